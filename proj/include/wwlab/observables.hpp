#pragma once

// Catalog of test functions with analytically known structure.
//
// Every catalog observable is a finite sum of terms
//     amplitude · e(m_x·x + m_y·y + m_z·z) · s^β,      s = (-1)^(current bit),
// so products, conjugates, means and sup bounds are exact algebra on the
// term table. Torus terms (some m ≠ 0) need a torus state with enough
// coordinates; bit terms (β = 1) need a Bernoulli cursor.
//
// Factor membership, recorded analytically rather than computed:
//   * Rotation: every character e(mx) is an eigenfunction, so it lies in the
//     Kronecker factor Z_1.
//   * AnzaiSkew: e(mx) is in Z_1; e(my) (m ≠ 0) lies in Z_2 and is orthogonal
//     to Z_1 (its h-differences e(m·h·x + const) are Z_1 eigenfunctions).
//   * Heisenberg (x, y, z) ↦ (x+α, y+β, z+xβ): e(mx), e(my) in Z_1; e(mz) in Z_2.
//   * Bernoulli: weakly mixing, all Z_k trivial; every mean-zero observable
//     lies in Z_k^⊥ for all k, and |||f|||_k = |∫f| for k ≥ 1.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wwlab/fixed_point.hpp"
#include "wwlab/systems.hpp"

namespace wwlab {

/// (m_x, m_y, m_z, β) with β ∈ {0, 1}.
using TermKey = std::array<std::int64_t, 4>;

struct ObservableMetadata {
  std::complex<double> mean{0.0, 0.0};
  double sup_bound = 0.0;
  std::string factor_notes;
};

class Observable {
 public:
  Observable() = default;
  Observable(std::string name, std::map<TermKey, std::complex<double>> terms, std::string factor_notes = {});

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const ObservableMetadata& metadata() const { return meta_; }
  [[nodiscard]] const std::map<TermKey, std::complex<double>>& terms() const { return terms_; }

  /// Torus coordinates consumed (0 for constants and bit observables).
  [[nodiscard]] std::size_t arity() const { return arity_; }
  [[nodiscard]] bool uses_bits() const { return uses_bits_; }
  [[nodiscard]] bool compatible(const SystemSpec& system) const;
  [[nodiscard]] bool compatible(const StatePoint& x) const;

  /// A single term with amplitude exactly 1: the value is e(phase(x)).
  [[nodiscard]] bool is_character() const;
  [[nodiscard]] CirclePoint phase(const StatePoint& x) const;

  [[nodiscard]] std::complex<double> evaluate(const StatePoint& x) const;
  std::complex<double> operator()(const StatePoint& x) const { return evaluate(x); }

  bool operator==(const Observable& o) const { return terms_ == o.terms_; }

 private:
  std::string name_;
  std::map<TermKey, std::complex<double>> terms_;
  ObservableMetadata meta_;
  std::size_t arity_ = 0;
  bool uses_bits_ = false;
};

Observable operator*(const Observable& f, const Observable& g);
Observable conjugate(const Observable& f);
Observable scaled(const Observable& f, std::complex<double> lambda);

/// Catalog names: const_one, character_x(m), character_y(m), character_z(m),
/// rademacher_bit, rademacher_mix(λ) = λ·rademacher_bit + (1-λ), bump_x =
/// cos²(πx), and products joined with '*'. Unknown names raise LookupError.
Observable catalog_lookup(const std::string& name);
std::vector<std::string> catalog_names();

/// f along the orbit, pointwise. Arity mismatch raises InputError.
std::vector<std::complex<double>> evaluate_along(const OrbitTable& orbit, const Observable& f);

}  // namespace wwlab
