#pragma once

// Real-coefficient polynomial phases p(n) = c_1 n + ... + c_k n^k evaluated
// mod 1 in fixed point, and finite trigonometric polynomials standing in for
// continuous functions on the circle.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwlab/fixed_point.hpp"

namespace wwlab {

/// p(n) = Σ_{j=1..degree} c_j n^j (mod 1). The constant term is not stored:
/// it only contributes a unimodular factor.
struct PolynomialPhase {
  int degree = 0;
  std::vector<CirclePoint> coeffs;  // coeffs[j-1] = c_j, size == degree

  PolynomialPhase() = default;
  explicit PolynomialPhase(std::vector<CirclePoint> c);

  static PolynomialPhase zero(int degree = 0);
  /// Single monomial c·n^j.
  static PolynomialPhase monomial(int j, CirclePoint c);
  static PolynomialPhase parse(const std::vector<std::string>& coeff_texts);

  [[nodiscard]] CirclePoint coeff(int j) const;
  /// Index of the highest coefficient that is nonzero mod 1 (0 when all vanish).
  [[nodiscard]] int effective_degree() const;

  bool operator==(const PolynomialPhase&) const = default;
};

/// Coefficient-wise sum mod 1; degree is the larger of the two.
PolynomialPhase operator+(const PolynomialPhase& p, const PolynomialPhase& q);

/// p(n) mod 1 by exact Horner evaluation: ((c_k n + c_{k-1}) n + ... + c_1) n.
CirclePoint phase_angle(const PolynomialPhase& p, std::uint64_t n);

/// e(p(n)).
inline std::complex<double> phase_value(const PolynomialPhase& p, std::uint64_t n) {
  return unit_phasor(phase_angle(p, n));
}

/// Coefficients t·c_j mod 1 (integer part of t exact, fraction rounded).
PolynomialPhase scale_phase(const PolynomialPhase& p, FixedReal t);

nlohmann::json to_json(const PolynomialPhase& p);
PolynomialPhase phase_from_json(const nlohmann::json& j);

struct TrigTerm {
  std::int64_t m = 0;
  std::complex<double> amplitude{1.0, 0.0};
  bool operator==(const TrigTerm&) const = default;
};

struct TrigPolynomial {
  std::vector<TrigTerm> terms;
  bool operator==(const TrigPolynomial&) const = default;
};

/// Σ_m amplitude_m · e(m·α).
std::complex<double> trig_eval(const TrigPolynomial& phi, CirclePoint alpha);

nlohmann::json to_json(const TrigPolynomial& phi);
TrigPolynomial trig_from_json(const nlohmann::json& j);

}  // namespace wwlab
