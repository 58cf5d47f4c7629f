#include "wwlab/fixed_point.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "wwlab/errors.hpp"

namespace wwlab {
namespace {

constexpr long double kTwo64 = 18446744073709551616.0L;

std::uint64_t fraction_bits(long double x) {
  long double f = x - std::floor(x);
  long double scaled = std::nearbyint(f * kTwo64);
  if (scaled >= kTwo64 || scaled < 0.0L) return 0;
  return static_cast<std::uint64_t>(scaled);
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

CirclePoint CirclePoint::from_rational(std::int64_t num, std::uint64_t den) {
  if (den == 0) throw InputError("rational with zero denominator");
  std::uint64_t r;
  if (num >= 0) {
    r = static_cast<std::uint64_t>(num) % den;
  } else {
    // -|num| mod den
    const std::uint64_t m = (0 - static_cast<std::uint64_t>(num)) % den;
    r = m == 0 ? 0 : den - m;
  }
  const u128 q = ((static_cast<u128>(r) << 64) + den / 2) / den;
  return CirclePoint{static_cast<std::uint64_t>(q)};  // q == 2^64 wraps to 0
}

CirclePoint CirclePoint::from_double(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite circle coordinate");
  return CirclePoint{fraction_bits(static_cast<long double>(x))};
}

CirclePoint CirclePoint::parse(std::string_view text) {
  const auto s = trim(text);
  if (s.empty()) throw InputError("empty circle coordinate");
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + 2, s.data() + s.size(), v, 16);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw InputError("bad hex fraction: '" + std::string(s) + "'");
    }
    return CirclePoint{v};
  }
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(trim(s.substr(0, slash)));
    const auto den = parse_int(trim(s.substr(slash + 1)));
    if (den <= 0) throw InputError("denominator must be positive: '" + std::string(s) + "'");
    return from_rational(num, static_cast<std::uint64_t>(den));
  }
  const std::string buf(s);
  char* end = nullptr;
  const long double v = std::strtold(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw InputError("bad circle coordinate: '" + buf + "'");
  }
  return CirclePoint{fraction_bits(v)};
}

long double CirclePoint::to_real() const { return static_cast<long double>(frac) / kTwo64; }

double CirclePoint::to_double() const { return std::ldexp(static_cast<double>(frac), -64); }

double CirclePoint::to_signed_double() const {
  return std::ldexp(static_cast<double>(static_cast<std::int64_t>(frac)), -64);
}

std::string CirclePoint::hex() const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(frac));
  return buf;
}

FixedReal FixedReal::from_double(double t) {
  if (!std::isfinite(t)) throw InputError("non-finite scale factor");
  const long double w = std::floor(static_cast<long double>(t));
  return FixedReal{static_cast<std::int64_t>(w), fraction_bits(static_cast<long double>(t))};
}

FixedReal FixedReal::from_rational(std::int64_t num, std::uint64_t den) {
  if (den == 0) throw InputError("rational with zero denominator");
  const auto sden = static_cast<std::int64_t>(den);
  std::int64_t w = num / sden;
  if (num % sden != 0 && num < 0) --w;
  return FixedReal{w, CirclePoint::from_rational(num, den).frac};
}

double FixedReal::to_double() const {
  return static_cast<double>(whole) + std::ldexp(static_cast<double>(frac), -64);
}

std::complex<double> unit_phasor(CirclePoint theta) {
  constexpr std::uint64_t kQuarterMask = (std::uint64_t{1} << 62) - 1;
  const unsigned quadrant = static_cast<unsigned>(theta.frac >> 62);
  const double r = std::ldexp(static_cast<double>(theta.frac & kQuarterMask), -64);
  const double angle = 2.0 * std::numbers::pi * r;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  switch (quadrant) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

}  // namespace wwlab
