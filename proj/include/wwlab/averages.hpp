#pragma once

// Double-recurrence Wiener–Wintner averages
//     W_N(f1, f2, x, p) = (1/N) Σ_{n=1}^{N} f1(T^{an}x) f2(T^{bn}x) e(p(n))
// along truncation schedules, and suprema of |W_N| over phase families.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwlab/fixed_point.hpp"
#include "wwlab/observables.hpp"
#include "wwlab/phases.hpp"
#include "wwlab/systems.hpp"

namespace wwlab {

/// One factor f(T^{stride·(n+shift)}x), possibly conjugated.
struct WeightFactor {
  Observable f;
  std::uint64_t stride = 1;
  std::uint64_t shift = 0;
  bool conjugated = false;
  int source = 0;  // 0 for f1, 1 for f2; orders the product canonically
};

/// u_n for n = 1..N_max, stored at index n-1. When every factor is a
/// character the exact fixed-point phases are kept alongside the values and
/// the values are e(phase).
struct WeightSequence {
  std::vector<std::complex<double>> values;
  std::optional<std::vector<CirclePoint>> phases;
  std::uint64_t a = 1;
  std::uint64_t b = 2;
  std::string f1_label;
  std::string f2_label;

  // Generating data; empty for sequences built from raw values.
  std::optional<SystemSpec> system;
  StatePoint start;
  std::vector<WeightFactor> factors;
  std::map<std::uint64_t, std::shared_ptr<const OrbitTable>> orbits;

  static WeightSequence from_values(std::vector<std::complex<double>> values);

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] std::complex<double> u(std::size_t n) const { return values[n - 1]; }
  [[nodiscard]] double max_modulus(std::size_t N) const;
  [[nodiscard]] double mean_modulus(std::size_t N) const;
};

/// u_n = f1(T^{an}x)·f2(T^{bn}x), n = 1..N_max. Requires a ≠ b, a, b ≥ 1.
WeightSequence weight_sequence(const SystemSpec& sys, const StatePoint& x, const Observable& f1,
                               const Observable& f2, std::uint64_t a, std::uint64_t b, std::size_t n_max);

/// The a = b case: u_n = (f1·f2)(T^{an}x).
WeightSequence single_function_weights(const SystemSpec& sys, const StatePoint& x, const Observable& f1,
                                       const Observable& f2, std::uint64_t a, std::size_t n_max);

/// Rebuilds values (and phases) from factors and orbit tables.
void materialize(WeightSequence& w, std::size_t length);

/// N_i = 2^i for 2^i ≤ n_max.
std::vector<std::size_t> geometric_schedule(std::size_t n_max, std::size_t n_min = 1);

struct AverageSeries {
  std::vector<std::size_t> schedule;
  std::vector<std::complex<double>> values;
  PolynomialPhase phase;
};

/// Running Cesàro means (1/N_i) Σ_{n≤N_i} u_n e(p(n)), compensated summation.
AverageSeries ww_average(const WeightSequence& w, const PolynomialPhase& p, const std::vector<std::size_t>& schedule);

/// (1/N) Σ u_n φ(p(n)) as Σ_m amp_m · W_N(m·p).
AverageSeries twisted_average_trig(const WeightSequence& w, const TrigPolynomial& phi, const PolynomialPhase& p,
                                   const std::vector<std::size_t>& schedule);

enum class SupFamily { Linear, PolyGrid };

struct SupScan {
  SupFamily family = SupFamily::Linear;
  int degree = 1;
  std::size_t N = 0;
  std::size_t oversample = 4;
  std::size_t fft_points = 0;            // M = oversample·N grid for c_1
  std::vector<std::size_t> grid_sizes;   // c_2..c_k coarse grid
  int levels = 0;
  double sup_value = 0.0;
  std::vector<CirclePoint> argmax;       // c_1..c_k
  double rigor_bound = 0.0;              // additive bound on true sup - grid sup
  bool rigorous = true;                  // false for k ≥ 2 (heuristic refinement)
  std::size_t cells_scanned = 0;
};

nlohmann::json to_json(const SupScan& scan);

/// |(1/N) Σ_{n=1}^{N} u_n e(n j/M)| for j = 0..M-1, M = oversample·N, by a
/// zero-padded DFT.
std::vector<double> linear_grid_values(const WeightSequence& w, std::size_t N, std::size_t oversample);

SupScan sup_linear_fft(const WeightSequence& w, std::size_t N, std::size_t oversample = 4);

struct GridBudget {
  std::vector<std::size_t> grid{64};  // sizes for c_2..c_k; a single entry applies to all
  int levels = 2;                     // local refinement rounds
  std::size_t oversample = 4;
  std::size_t max_cells = std::size_t{1} << 20;   // cap on FFT scans
  std::size_t max_fft_points = std::size_t{1} << 26;

  [[nodiscard]] std::size_t grid_size(int j) const;  // for coefficient c_j, j ≥ 2
};

/// Raised when the grid exceeds the configured cap; carries the incumbent
/// found over the cells that were scanned.
class PartialResultError : public std::runtime_error {
 public:
  PartialResultError(const std::string& what, SupScan incumbent)
      : std::runtime_error(what), incumbent_(std::move(incumbent)) {}
  [[nodiscard]] const SupScan& incumbent() const { return incumbent_; }

 private:
  SupScan incumbent_;
};

/// sup over p ∈ R_k[ξ] (c_0 dropped): grid over (c_2..c_k), FFT over c_1,
/// then budget.levels rounds of 3^(k-1) neighborhood refinement.
SupScan sup_poly_grid(const WeightSequence& w, std::size_t N, int k, const GridBudget& budget);

}  // namespace wwlab
