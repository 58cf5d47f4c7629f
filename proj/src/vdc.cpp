#include "wwlab/vdc.hpp"

#include "wwlab/errors.hpp"
#include "wwlab/fixed_point.hpp"

namespace wwlab {

nlohmann::json to_json(const VdcReport& r) {
  return {{"N", r.N}, {"H", r.H}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}};
}

VdcReport vdc_bound(std::span<const std::complex<double>> a, std::size_t H) {
  const std::size_t N = a.size();
  if (N == 0) throw InputError("van der Corput bound needs a nonempty sequence");
  if (H >= N) throw InputError("van der Corput window H must satisfy H <= N-1");

  ComplexCompensatedSum total;
  CompensatedSum energy;
  for (const auto& z : a) {
    total.add(z);
    energy.add(std::norm(z));
  }
  CompensatedSum corr;
  for (std::size_t h = 1; h <= H; ++h) {
    CompensatedSum re;
    for (std::size_t n = 0; n + h < N; ++n) re.add((a[n] * std::conj(a[n + h])).real());
    corr.add(static_cast<double>(H + 1 - h) * re.value());
  }

  const long double n = static_cast<long double>(N);
  const long double h1 = static_cast<long double>(H) + 1;
  const long double nh = n + static_cast<long double>(H);
  const long double first = nh / (n * n * h1) * static_cast<long double>(energy.value());
  const long double second = 2 * nh / (n * n * h1 * h1) * static_cast<long double>(corr.value());

  VdcReport r;
  r.N = N;
  r.H = H;
  r.lhs = std::norm(total.value() / static_cast<double>(N));
  r.rhs = static_cast<double>(first + second);
  r.slack = r.rhs - r.lhs;
  return r;
}

WeightSequence h_difference(const WeightSequence& w, std::size_t h, std::uint64_t a, std::uint64_t b) {
  if (!w.system) throw InputError("h_difference needs a weight sequence built from a system orbit");
  if (a != w.a || b != w.b) throw InputError("strides (a, b) do not match the weight sequence");
  if (h < 1 || h > w.size() / 2) {
    throw InputError("shift h must satisfy 1 <= h <= N/2 (N=" + std::to_string(w.size()) + ")");
  }
  WeightSequence out = w;
  out.factors.reserve(2 * w.factors.size());
  for (const auto& factor : w.factors) {
    WeightFactor shifted = factor;
    shifted.shift += h;
    shifted.conjugated = !factor.conjugated;
    out.factors.push_back(std::move(shifted));
  }
  out.f1_label = "D" + std::to_string(h) + "(" + w.f1_label + ")";
  out.f2_label = "D" + std::to_string(h) + "(" + w.f2_label + ")";
  materialize(out, w.size() - h);
  return out;
}

PolynomialPhase phase_reduction_check(const PolynomialPhase& p, std::uint64_t h) {
  if (p.degree < 1) throw InputError("phase degree must be at least 1");
  auto q = PolynomialPhase::zero(p.degree - 1);
  // Binomial coefficients C(j, i) mod 2^64 via Pascal's rule; h powers wrap.
  std::vector<std::vector<std::uint64_t>> binom(static_cast<std::size_t>(p.degree) + 1);
  for (std::size_t j = 0; j < binom.size(); ++j) {
    binom[j].assign(j + 1, 1);
    for (std::size_t i = 1; i < j; ++i) binom[j][i] = binom[j - 1][i - 1] + binom[j - 1][i];
  }
  std::vector<std::uint64_t> hpow(binom.size(), 1);
  for (std::size_t e = 1; e < hpow.size(); ++e) hpow[e] = hpow[e - 1] * h;

  for (int i = 1; i < p.degree; ++i) {
    CirclePoint c{};
    for (int j = i + 1; j <= p.degree; ++j) {
      const std::uint64_t mult = binom[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] *
                                 hpow[static_cast<std::size_t>(j - i)];
      c += p.coeff(j).times(mult);
    }
    q.coeffs[static_cast<std::size_t>(i - 1)] = c;
  }
  return q;
}

}  // namespace wwlab
