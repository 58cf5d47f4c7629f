#pragma once

// Monte-Carlo experiment recipes over sampled initial points, and their
// persistence as CSV series, JSON reports, run manifests and gnuplot scripts.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwlab/averages.hpp"
#include "wwlab/config.hpp"
#include "wwlab/observables.hpp"
#include "wwlab/systems.hpp"

namespace wwlab {

/// Mean and standard error (sample std / √count) of per-point values.
struct MonteCarloIntegral {
  std::string statistic;
  std::vector<double> values;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  static MonteCarloIntegral from_values(std::string statistic, std::vector<double> values);
};

nlohmann::json to_json(const MonteCarloIntegral& mc);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct UniformityReport {
  std::vector<std::size_t> schedule;
  std::vector<MonteCarloIntegral> sup_squared;  // E_x sup_p |W_N|² per N
  std::vector<MonteCarloIntegral> rigor_bound;  // grid rigor bound per N
  double decay = 0.0;                           // last mean / first mean
  bool passed = true;
};

UniformityReport run_uniformity_experiment(const ExperimentConfig& cfg);

struct DominationMember {
  std::string f1;
  MonteCarloIntegral lhs;          // E_x sup_p |W_N|² at N = n_max
  MonteCarloIntegral seminorm_f1;  // |||f1|||_k estimates
  MonteCarloIntegral seminorm_f2;
  double rhs = 0.0;                // min(|||f1|||², |||f2|||²)
};

struct DominationReport {
  std::vector<DominationMember> members;
  double spearman = 0.0;
  bool strictly_ordered = false;  // seminorm estimates strictly ordered across the family
  bool passed = false;
};

DominationReport run_seminorm_domination(const ExperimentConfig& cfg);

struct ConvergenceReport {
  std::vector<std::size_t> schedule;
  // diffs[phase][point][i] = |W_{N_{i+1}} - W_{N_i}|
  std::vector<std::vector<std::vector<double>>> diffs;
  std::vector<std::vector<std::vector<std::complex<double>>>> averages;
  double fraction_ok = 0.0;  // points whose final difference is within tolerance for every phase
  double max_final_diff = 0.0;
  bool passed = false;
};

ConvergenceReport run_convergence_experiment(const ExperimentConfig& cfg);

struct MaximalEntry {
  std::string observable;
  MonteCarloIntegral sup_average_sq;  // (sup_{N ≤ N_max} (1/N) Σ_{n<N} |F|(T^n x))²
  MonteCarloIntegral modulus_sq;      // |F(x)|²
  double lhs = 0.0;                   // L² norm of the maximal function
  double norm2 = 0.0;                 // ‖F‖₂
  double ratio = 0.0;
  double margin = 0.0;                // relative standard error of the ratio
  bool passed = false;
};

struct MaximalReport {
  std::size_t n_max = 0;
  std::vector<MaximalEntry> entries;
  bool passed = false;
};

/// α = 2 maximal inequality on |F|; running averages over n = 0..N-1.
MaximalReport run_maximal_inequality_check(const SystemSpec& system, const std::vector<Observable>& F,
                                           std::size_t n_max, std::size_t samples, std::uint64_t seed);

/// p(n) = Σ_j c_j n^j for integer coefficients (coeffs[j-1] = c_j).
/// Raises InputError when some p(n), 0 ≤ n ≤ n_max, is negative or ≥ 2^63.
std::vector<std::uint64_t> integer_phase_values(const std::vector<std::int64_t>& coeffs, std::size_t n_max);

/// V_N(y) = (1/N) Σ_{n=1}^{N} u_n g(S^{p(n)} y) along the schedule, directly.
std::vector<std::complex<double>> return_time_averages(const WeightSequence& w, const SystemSpec& S,
                                                       const StatePoint& y, const Observable& g,
                                                       const std::vector<std::int64_t>& coeffs,
                                                       const std::vector<std::size_t>& schedule);

/// For S = Rotation(β) and g = character_x(m): e(m·y)·(1/N) Σ u_n e(p(n)·m·β).
std::vector<std::complex<double>> return_time_rotation_reduction(const WeightSequence& w, CirclePoint beta,
                                                                 CirclePoint y, std::int64_t m,
                                                                 const std::vector<std::int64_t>& coeffs,
                                                                 const std::vector<std::size_t>& schedule);

struct ReturnTimeReport {
  std::vector<std::size_t> schedule;
  std::vector<double> l2_diff;  // ‖V_{N_{i+1}} - V_{N_i}‖₂ over sampled (x, y)
  std::vector<double> l2_norm;  // ‖V_{N_i}‖₂
  bool decreasing = true;       // across the final three doublings
  bool passed = true;
};

ReturnTimeReport run_return_time_experiment(const ExperimentConfig& cfg);

struct ExperimentResult {
  std::string experiment;
  bool passed = true;
  std::string summary;
  std::string csv;
  nlohmann::json report;
};

/// Runs cfg.experiment; the CSV text depends only on the config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct OutputPaths {
  std::string csv;
  std::string json;
  std::string manifest;
  std::string plot;
};

/// Writes <hash>.<experiment>.csv, <hash>.<experiment>.json,
/// <hash>.manifest.json and <hash>.plot.gp into cfg.output_dir.
OutputPaths write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result, double wall_seconds);

nlohmann::json version_info();

/// Fixed "%.17g" rendering used by every CSV writer.
std::string format_double(double v);

}  // namespace wwlab
