#pragma once

// van der Corput's inequality as an exact finite computation, and the
// h-differencing transforms used with it.

#include <complex>
#include <cstdint>
#include <span>

#include <nlohmann/json.hpp>

#include "wwlab/averages.hpp"
#include "wwlab/phases.hpp"

namespace wwlab {

struct VdcReport {
  std::size_t N = 0;
  std::size_t H = 0;
  double lhs = 0.0;    // |(1/N) Σ_{n=0}^{N-1} a_n|²
  double rhs = 0.0;    // the two-term bound
  double slack = 0.0;  // rhs - lhs
};

nlohmann::json to_json(const VdcReport& r);

/// lhs and rhs of
///   |(1/N) Σ_{n=0}^{N-1} a_n|² ≤ (N+H)/(N²(H+1)) Σ_{n=0}^{N-1} |a_n|²
///        + 2(N+H)/(N²(H+1)²) Σ_{h=1}^{H} (H+1-h) Re Σ_{n=0}^{N-h-1} a_n conj(a_{n+h}),
/// with indices exactly as written (0-based). Requires 0 ≤ H ≤ N-1.
VdcReport vdc_bound(std::span<const std::complex<double>> a, std::size_t H);

/// Weights of the differenced pair (f1·conj(f1∘T^{ah}), f2·conj(f2∘T^{bh})),
/// i.e. u_n·conj(u_{n+h}) for n = 1..N-h, recomputed from the generating
/// orbits. Requires 1 ≤ h ≤ N/2 and strides matching w.
WeightSequence h_difference(const WeightSequence& w, std::size_t h, std::uint64_t a, std::uint64_t b);

/// q_h(n) = p(n+h) - p(n) without its constant term p(h): the coefficient of
/// n^i is Σ_{j>i} C(j,i) h^{j-i} c_j mod 1. degree(q_h) = degree(p) - 1.
PolynomialPhase phase_reduction_check(const PolynomialPhase& p, std::uint64_t h);

/// The constant term p(h) dropped by phase_reduction_check.
inline CirclePoint difference_constant(const PolynomialPhase& p, std::uint64_t h) { return phase_angle(p, h); }

}  // namespace wwlab
