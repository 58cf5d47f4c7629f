#pragma once

// Finite-orbit estimates of Gowers–Host–Kra seminorms |||f|||_k, and exact
// Gowers U_k norms on Z_N used as an independent oracle.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwlab/observables.hpp"
#include "wwlab/systems.hpp"

namespace wwlab {

struct SeminormEstimate {
  int k = 1;
  double value = 0.0;
  std::size_t N = 0;
  std::size_t H = 0;
  std::string observable;
  std::string system;
};

nlohmann::json to_json(const SeminormEstimate& est, std::uint64_t seed);

/// Recursive h-averaged estimator on a single orbit of length N:
///   k = 1:  |(1/L) Σ_{n<L} g(n)|
///   k + 1:  [(1/H) Σ_{h=1}^{H} value_k(conj(g)·g∘T^h)^{2^k}]^{1/2^{k+1}}
/// where L shrinks by h at every differencing step. Requires 1 ≤ H ≤ N/2,
/// k ≤ 4 and N - (k-1)·H ≥ 1.
SeminormEstimate ghk_estimate(const SystemSpec& sys, const StatePoint& x, const Observable& f, int k,
                              std::size_t N, std::size_t H);

/// Same estimator applied to an already evaluated sequence g(n) = f(T^n x).
double ghk_estimate_sequence(std::span<const std::complex<double>> g, int k, std::size_t H);

/// Estimates for k = 1..k_max sharing one orbit evaluation.
std::vector<SeminormEstimate> seminorm_ladder(const SystemSpec& sys, const StatePoint& x, const Observable& f,
                                              int k_max, std::size_t N, std::size_t H);

struct UkNorm {
  int k = 2;
  double value = 0.0;
  std::size_t N = 0;
};

/// Exact U_k norm of a function on Z_N, k ∈ {2, 3}:
///   ||f||^{2^k} = N^{-(k+1)} Σ_{n,h} Π_{ε ∈ {0,1}^k} C^{|ε|} f(n + ε·h).
/// Caps: N ≤ 2^14 for k = 2, N ≤ 2^12 for k = 3.
UkNorm uk_norm(std::span<const std::complex<double>> values, int k);

}  // namespace wwlab
