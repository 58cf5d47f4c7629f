#include "wwlab/seminorms.hpp"

#include <cmath>

#include "wwlab/errors.hpp"
#include "wwlab/fft.hpp"
#include "wwlab/fixed_point.hpp"
#include "wwlab/parallel.hpp"

namespace wwlab {
namespace {

constexpr int kMaxOrder = 4;

void check_parameters(int k, std::size_t N, std::size_t H) {
  if (k < 1) throw InputError("seminorm order k must be at least 1");
  if (k > kMaxOrder) throw UnsupportedError("seminorm order k > 4 is not supported");
  if (H < 1 || H > N / 2) {
    throw InputError("differencing window H must satisfy 1 <= H <= N/2 (N=" + std::to_string(N) +
                     ", H=" + std::to_string(H) + ")");
  }
  if (N <= static_cast<std::size_t>(k - 1) * H) {
    throw InputError("orbit too short: N - (k-1)·H must be at least 1");
  }
}

double mean_modulus_of_sum(std::span<const std::complex<double>> g) {
  ComplexCompensatedSum s;
  for (const auto& z : g) s.add(z);
  return std::abs(s.value() / static_cast<double>(g.size()));
}

// Level k ≥ 2 works on scratch[k-2]; each level reuses its own buffer.
double recurse(std::span<const std::complex<double>> g, int k, std::size_t H,
               std::vector<std::vector<std::complex<double>>>& scratch) {
  if (k == 1) return mean_modulus_of_sum(g);
  auto& diff = scratch[static_cast<std::size_t>(k - 2)];
  const double power = std::ldexp(1.0, k - 1);
  CompensatedSum acc;
  for (std::size_t h = 1; h <= H; ++h) {
    const std::size_t L = g.size() - h;
    diff.resize(L);
    for (std::size_t n = 0; n < L; ++n) diff[n] = std::conj(g[n]) * g[n + h];
    acc.add(std::pow(recurse(diff, k - 1, H, scratch), power));
  }
  return std::pow(acc.value() / static_cast<double>(H), 1.0 / std::ldexp(1.0, k));
}

double estimate(std::span<const std::complex<double>> g, int k, std::size_t H) {
  if (k == 1) return mean_modulus_of_sum(g);
  // Parallel over the outermost h; terms are reduced in h order.
  std::vector<double> terms(H);
  const double power = std::ldexp(1.0, k - 1);
  parallel_for(H, [&](std::size_t i) {
    const std::size_t h = i + 1;
    std::vector<std::vector<std::complex<double>>> scratch(static_cast<std::size_t>(k));
    std::vector<std::complex<double>> diff(g.size() - h);
    for (std::size_t n = 0; n < diff.size(); ++n) diff[n] = std::conj(g[n]) * g[n + h];
    terms[i] = std::pow(recurse(diff, k - 1, H, scratch), power);
  });
  CompensatedSum acc;
  for (double t : terms) acc.add(t);
  return std::pow(acc.value() / static_cast<double>(H), 1.0 / std::ldexp(1.0, k));
}

std::vector<std::complex<double>> orbit_values(const SystemSpec& sys, const StatePoint& x, const Observable& f,
                                               std::size_t N) {
  if (!f.compatible(sys)) {
    throw InputError("observable '" + f.name() + "' does not fit system '" + to_string(sys.kind) + "'");
  }
  return evaluate_along(orbit(sys, x, 1, N), f);
}

}  // namespace

nlohmann::json to_json(const SeminormEstimate& est, std::uint64_t seed) {
  return {{"system", est.system}, {"observable", est.observable}, {"k", est.k}, {"N", est.N},
          {"H", est.H},           {"value", est.value},           {"seed", seed}};
}

double ghk_estimate_sequence(std::span<const std::complex<double>> g, int k, std::size_t H) {
  check_parameters(k, g.size(), H);
  return estimate(g, k, H);
}

SeminormEstimate ghk_estimate(const SystemSpec& sys, const StatePoint& x, const Observable& f, int k,
                              std::size_t N, std::size_t H) {
  check_parameters(k, N, H);
  const auto g = orbit_values(sys, x, f, N);
  return SeminormEstimate{k, estimate(g, k, H), N, H, f.name(), sys.label.empty() ? to_string(sys.kind) : sys.label};
}

std::vector<SeminormEstimate> seminorm_ladder(const SystemSpec& sys, const StatePoint& x, const Observable& f,
                                              int k_max, std::size_t N, std::size_t H) {
  check_parameters(k_max, N, H);
  const auto g = orbit_values(sys, x, f, N);
  const std::string label = sys.label.empty() ? to_string(sys.kind) : sys.label;
  std::vector<SeminormEstimate> out;
  for (int k = 1; k <= k_max; ++k) out.push_back(SeminormEstimate{k, estimate(g, k, H), N, H, f.name(), label});
  return out;
}

UkNorm uk_norm(std::span<const std::complex<double>> values, int k) {
  const std::size_t N = values.size();
  if (N == 0) throw InputError("U_k norm of an empty sequence");
  if (k != 2 && k != 3) throw UnsupportedError("U_k norm implemented for k = 2, 3");
  if ((k == 2 && N > (std::size_t{1} << 14)) || (k == 3 && N > (std::size_t{1} << 12))) {
    throw InputError("U_k norm size cap exceeded");
  }
  const double n = static_cast<double>(N);
  if (k == 2) {
    // Σ_{h1} |Σ_n f(n) conj f(n+h1)|², by direct correlation.
    CompensatedSum total;
    for (std::size_t h = 0; h < N; ++h) {
      ComplexCompensatedSum corr;
      for (std::size_t m = 0; m < N; ++m) corr.add(values[m] * std::conj(values[(m + h) % N]));
      total.add(std::norm(corr.value()));
    }
    return UkNorm{2, std::pow(total.value() / (n * n * n), 0.25), N};
  }
  // k = 3: for each h1 the inner U_2 sum of g = Δ_{h1} f via Parseval,
  // Σ_{h2} |Σ_n g(n) conj g(n+h2)|² = (1/N) Σ_t |ĝ(t)|^4.
  std::vector<double> per_shift(N);
  parallel_for(N, [&](std::size_t h1) {
    std::vector<std::complex<double>> g(N), ghat(N);
    for (std::size_t m = 0; m < N; ++m) g[m] = values[m] * std::conj(values[(m + h1) % N]);
    dft_negative(g, ghat);
    CompensatedSum s;
    for (const auto& z : ghat) s.add(std::norm(z) * std::norm(z));
    per_shift[h1] = s.value() / n;
  });
  CompensatedSum total;
  for (double v : per_shift) total.add(v);
  return UkNorm{3, std::pow(total.value() / (n * n * n * n), 0.125), N};
}

}  // namespace wwlab
