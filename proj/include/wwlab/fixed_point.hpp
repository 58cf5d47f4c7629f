#pragma once

// 64-bit fixed-point arithmetic on the circle T = R/Z.
//
// A CirclePoint stores x in [0,1) as frac / 2^64. Addition and multiplication
// by integers are exact (wrapping arithmetic on the word); products of two
// fractions are rounded to the nearest 2^-64.

#include <complex>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace wwlab {

using u128 = unsigned __int128;

struct CirclePoint {
  std::uint64_t frac = 0;

  constexpr CirclePoint() = default;
  constexpr explicit CirclePoint(std::uint64_t f) : frac(f) {}

  /// Nearest multiple of 2^-64 to num/den mod 1. den must be nonzero.
  static CirclePoint from_rational(std::int64_t num, std::uint64_t den);
  /// Nearest multiple of 2^-64 to x mod 1.
  static CirclePoint from_double(double x);
  /// Accepts "0x..." (raw 64-bit fraction), "p/q", or a decimal literal.
  static CirclePoint parse(std::string_view text);

  /// Exact value frac / 2^64; long double carries a 64-bit mantissa on x86.
  [[nodiscard]] long double to_real() const;
  [[nodiscard]] double to_double() const;
  /// Representative in [-1/2, 1/2).
  [[nodiscard]] double to_signed_double() const;
  [[nodiscard]] std::string hex() const;

  constexpr CirclePoint operator+(CirclePoint o) const { return CirclePoint{frac + o.frac}; }
  constexpr CirclePoint operator-(CirclePoint o) const { return CirclePoint{frac - o.frac}; }
  constexpr CirclePoint operator-() const { return CirclePoint{0 - frac}; }
  constexpr CirclePoint& operator+=(CirclePoint o) {
    frac += o.frac;
    return *this;
  }
  constexpr CirclePoint& operator-=(CirclePoint o) {
    frac -= o.frac;
    return *this;
  }
  /// n·x mod 1, exact for any integer n (only n mod 2^64 matters).
  [[nodiscard]] constexpr CirclePoint times(std::uint64_t n) const { return CirclePoint{frac * n}; }
  [[nodiscard]] constexpr CirclePoint times_signed(std::int64_t n) const {
    return CirclePoint{frac * static_cast<std::uint64_t>(n)};
  }

  constexpr auto operator<=>(const CirclePoint&) const = default;
};

/// x·y mod 1 for two fractions, rounded to nearest 2^-64 (ties upward).
constexpr CirclePoint mul_round(CirclePoint x, CirclePoint y) {
  const u128 prod = static_cast<u128>(x.frac) * y.frac;
  return CirclePoint{static_cast<std::uint64_t>((prod + (static_cast<u128>(1) << 63)) >> 64)};
}

/// A real scalar with a 64-bit integer part and a 64-bit fraction, used to
/// scale phases (t·p). Unlike a CirclePoint, 1 and 0 are distinct here.
struct FixedReal {
  std::int64_t whole = 0;
  std::uint64_t frac = 0;

  static FixedReal integer(std::int64_t n) { return FixedReal{n, 0}; }
  static FixedReal from_circle(CirclePoint c) { return FixedReal{0, c.frac}; }
  static FixedReal from_double(double t);
  static FixedReal from_rational(std::int64_t num, std::uint64_t den);

  /// t·c mod 1: exact integer part, rounded fractional part.
  [[nodiscard]] CirclePoint scale(CirclePoint c) const {
    return c.times_signed(whole) + mul_round(CirclePoint{frac}, c);
  }
  [[nodiscard]] double to_double() const;

  auto operator<=>(const FixedReal&) const = default;
};

/// e(θ) = exp(2πiθ). The quadrant is taken from the top two bits so that
/// multiples of 1/4 map to exactly ±1, ±i and the transcendental part is only
/// evaluated on [0, 1/4).
std::complex<double> unit_phasor(CirclePoint theta);

/// Compensated (double-double) accumulator. Adding a common value repeatedly
/// yields the correctly rounded multiple; used for every Cesàro sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double s = hi_ + x;
    const double bp = s - hi_;
    double err = (hi_ - (s - bp)) + (x - bp);
    err += lo_;
    hi_ = s + err;
    lo_ = err - (hi_ - s);
  }
  [[nodiscard]] double value() const { return hi_ + lo_; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  [[nodiscard]] std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Stateless 64-bit mixer (splitmix64 finalizer). Used to derive per-task
/// seeds and Bernoulli bit blocks from (seed, index) pairs.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace wwlab
