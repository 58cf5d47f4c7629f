#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "wwlab/errors.hpp"
#include "wwlab/seminorms.hpp"

using namespace wwlab;
using cd = std::complex<double>;

namespace {

CirclePoint q(std::int64_t num, std::uint64_t den) { return CirclePoint::from_rational(num, den); }

std::vector<cd> random_signs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<cd> u(n);
  for (auto& z : u) z = (rng() & 1) ? cd{1.0, 0.0} : cd{-1.0, 0.0};
  return u;
}

std::vector<cd> random_disk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(0.0, 1.0);
  std::vector<cd> u(n);
  for (auto& z : u) z = std::polar(std::sqrt(r(rng)), 2.0 * std::numbers::pi * r(rng));
  return u;
}

// Σ_t |f̂(t)|^4 with f̂(t) = (1/N) Σ_n f(n) e(-nt/N), by direct DFT.
double fourier_u2(const std::vector<cd>& f) {
  const std::size_t N = f.size();
  long double acc = 0.0L;
  for (std::size_t t = 0; t < N; ++t) {
    std::complex<long double> s{};
    for (std::size_t n = 0; n < N; ++n) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((n * t) % N) / N;
      s += std::complex<long double>(f[n].real(), f[n].imag()) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    acc += std::pow(std::abs(s / static_cast<long double>(N)), 4.0L);
  }
  return static_cast<double>(std::pow(acc, 0.25L));
}

// N^{-4} Σ_{n,h1,h2,h3} Π_ε C^{|ε|} f(n + ε·h), by brute force.
double brute_u3(const std::vector<cd>& f) {
  const std::size_t N = f.size();
  std::complex<long double> acc{};
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t h1 = 0; h1 < N; ++h1)
      for (std::size_t h2 = 0; h2 < N; ++h2)
        for (std::size_t h3 = 0; h3 < N; ++h3) {
          std::complex<long double> prod{1.0L, 0.0L};
          for (int eps = 0; eps < 8; ++eps) {
            const std::size_t idx = (n + ((eps & 1) ? h1 : 0) + ((eps & 2) ? h2 : 0) + ((eps & 4) ? h3 : 0)) % N;
            std::complex<long double> v(f[idx].real(), f[idx].imag());
            if (std::popcount(static_cast<unsigned>(eps)) % 2 == 1) v = std::conj(v);
            prod *= v;
          }
          acc += prod;
        }
  const long double norm = acc.real() / std::pow(static_cast<long double>(N), 4.0L);
  return static_cast<double>(std::pow(std::max(norm, 0.0L), 0.125L));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace

TEST(GhkEstimate, ConstantIsExactlyOne) {
  const auto one = catalog_lookup("const_one");
  for (const auto& sys : {SystemSpec::rotation(golden_alpha()), SystemSpec::bernoulli(),
                          SystemSpec::anzai_skew(golden_alpha())}) {
    const auto x = sample_initial_points(sys, 1, 5)[0];
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(ghk_estimate(sys, x, one, k, 256, 16).value, 1.0) << k;
  }
}

TEST(GhkEstimate, ConstantModulusNormalization) {
  const std::vector<cd> c(200, cd{0.6, -0.8} * 0.5);
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(ghk_estimate_sequence(c, k, 10), 0.5, 1e-15);
}

TEST(GhkEstimate, RotationCharacterNearOne) {
  const auto sys = SystemSpec::rotation(golden_alpha());
  const auto x = sample_initial_points(sys, 1, 9)[0];
  const auto est = ghk_estimate(sys, x, catalog_lookup("character_x(1)"), 2, 1 << 12, 1 << 6);
  EXPECT_NEAR(est.value, 1.0, 0.02);
  EXPECT_EQ(est.k, 2);
  EXPECT_EQ(est.N, 4096u);
  EXPECT_EQ(est.H, 64u);
  EXPECT_EQ(est.observable, "character_x(1)");
}

TEST(GhkEstimate, BernoulliMedianSmall) {
  const auto sys = SystemSpec::bernoulli();
  const auto f = catalog_lookup("rademacher_bit");
  std::vector<double> vals;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    vals.push_back(ghk_estimate(sys, sample_initial_points(sys, 1, seed)[0], f, 2, 1 << 14, 1 << 7).value);
  }
  EXPECT_LE(median(vals), 0.15);
}

TEST(GhkEstimate, BernoulliMediansNonincreasingInN) {
  const auto sys = SystemSpec::bernoulli();
  const auto f = catalog_lookup("rademacher_bit");
  double prev = 2.0;
  for (const std::size_t N : {1u << 10, 1u << 12, 1u << 14}) {
    std::vector<double> vals;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      vals.push_back(ghk_estimate(sys, sample_initial_points(sys, 1, seed)[0], f, 2, N, 32).value);
    }
    const double m = median(vals);
    EXPECT_LE(m, prev) << "N=" << N;
    prev = m;
  }
}

TEST(GhkEstimate, BoundedBySupNorm) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_disk(300, rng());
    for (int k = 1; k <= 3; ++k) {
      const double v = ghk_estimate_sequence(g, k, 1 + rng() % 50);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
  }
}

TEST(GhkEstimate, ScalingHomogeneity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_disk(256, rng());
    const cd lambda = std::polar(0.1 + 2.0 * static_cast<double>(rng() % 1000) / 1000.0, 0.37 * trial);
    std::vector<cd> scaled(g);
    for (auto& z : scaled) z *= lambda;
    for (int k = 1; k <= 3; ++k) {
      const double base = ghk_estimate_sequence(g, k, 16);
      EXPECT_NEAR(ghk_estimate_sequence(scaled, k, 16), std::abs(lambda) * base, 1e-10);
    }
  }
}

TEST(GhkEstimate, ConjugationSymmetry) {
  const auto sys = SystemSpec::anzai_skew(golden_alpha());
  const auto f = catalog_lookup("character_x(1)*character_y(2)");
  const auto bump = catalog_lookup("bump_x*character_y(1)");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = sample_initial_points(sys, 1, seed)[0];
    for (const auto& obs : {f, bump}) {
      for (int k = 1; k <= 3; ++k) {
        EXPECT_NEAR(ghk_estimate(sys, x, conjugate(obs), k, 1024, 16).value,
                    ghk_estimate(sys, x, obs, k, 1024, 16).value, 1e-12);
      }
    }
  }
}

TEST(GhkEstimate, AgreesWithCyclicNormOnPeriodicOrbit) {
  // Rotation by 1/P has exact period P; the shift range 1..P covers Z_P once.
  constexpr std::size_t P = 64;
  const auto sys = SystemSpec::rotation(q(1, P));
  const auto f = catalog_lookup("bump_x");
  const auto x = StatePoint::torus({q(1, 1000)});
  const auto period = evaluate_along(orbit(sys, x, 1, P), f);
  const double cyclic = uk_norm(period, 2).value;
  const double est = ghk_estimate(sys, x, f, 2, 64 * P, P).value;
  EXPECT_NEAR(est, cyclic, 0.05);
}

TEST(GhkEstimate, Errors) {
  const auto sys = SystemSpec::rotation(golden_alpha());
  const auto x = StatePoint::torus({CirclePoint{}});
  const auto f = catalog_lookup("character_x(1)");
  EXPECT_THROW(ghk_estimate(sys, x, f, 2, 100, 51), InputError);
  EXPECT_THROW(ghk_estimate(sys, x, f, 2, 100, 0), InputError);
  EXPECT_THROW(ghk_estimate(sys, x, f, 0, 100, 10), InputError);
  EXPECT_THROW(ghk_estimate(sys, x, f, 5, 100, 10), UnsupportedError);
}

TEST(GhkEstimate, JsonRecord) {
  const auto sys = SystemSpec::rotation(golden_alpha(), "rot");
  const auto est = ghk_estimate(sys, StatePoint::torus({CirclePoint{}}), catalog_lookup("const_one"), 2, 64, 8);
  const auto j = to_json(est, 17);
  EXPECT_EQ(j.at("system"), "rot");
  EXPECT_EQ(j.at("observable"), "const_one");
  EXPECT_EQ(j.at("k"), 2);
  EXPECT_EQ(j.at("N"), 64);
  EXPECT_EQ(j.at("H"), 8);
  EXPECT_EQ(j.at("value"), 1.0);
  EXPECT_EQ(j.at("seed"), 17);
}

TEST(SeminormLadder, ConstantIsAllOnes) {
  const auto sys = SystemSpec::heisenberg(golden_alpha(), q(1, 3));
  const auto ladder = seminorm_ladder(sys, sample_initial_points(sys, 1, 2)[0], catalog_lookup("const_one"), 4, 512, 16);
  ASSERT_EQ(ladder.size(), 4u);
  for (int k = 1; k <= 4; ++k) {
    EXPECT_EQ(ladder[k - 1].k, k);
    EXPECT_EQ(ladder[k - 1].value, 1.0);
  }
}

TEST(SeminormLadder, AnzaiSecondCoordinate) {
  const auto sys = SystemSpec::anzai_skew(golden_alpha());
  const auto x = sample_initial_points(sys, 1, 6)[0];
  const auto f = catalog_lookup("character_y(1)");
  const auto ladder = seminorm_ladder(sys, x, f, 3, 1 << 14, 1 << 7);
  EXPECT_LE(ladder[1].value, 0.2);
  EXPECT_GE(ladder[2].value, 0.8);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(ladder[k - 1].value, ghk_estimate(sys, x, f, k, 1 << 14, 1 << 7).value);
  }
}

TEST(SeminormLadder, MonotoneOnRandomSequences) {
  const auto sys = SystemSpec::bernoulli();
  const auto f = catalog_lookup("rademacher_mix(0.5)");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ladder = seminorm_ladder(sys, sample_initial_points(sys, 1, seed)[0], f, 3, 4096, 32);
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) EXPECT_LE(ladder[i].value, ladder[i + 1].value + 0.05);
  }
}

TEST(UkNorm, AllOnesIsOne) {
  EXPECT_EQ(uk_norm(std::vector<cd>(64, cd{1.0, 0.0}), 2).value, 1.0);
  EXPECT_EQ(uk_norm(std::vector<cd>(32, cd{1.0, 0.0}), 3).value, 1.0);
}

TEST(UkNorm, CharacterIsOne) {
  for (const std::size_t j : {1u, 5u, 17u}) {
    std::vector<cd> f(128);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = unit_phasor(q(static_cast<std::int64_t>(j * n), 128));
    EXPECT_NEAR(uk_norm(f, 2).value, 1.0, 1e-12);
    EXPECT_NEAR(uk_norm(f, 3).value, 1.0, 1e-12);
  }
}

TEST(UkNorm, QuadraticPhaseSeparatesLevels) {
  std::vector<cd> f(256);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = unit_phasor(q(static_cast<std::int64_t>((n * n) % 256), 256));
  EXPECT_LT(uk_norm(f, 2).value, 0.5);
  EXPECT_NEAR(uk_norm(f, 3).value, 1.0, 1e-12);
}

TEST(UkNorm, RandomSignsMatchFourierIdentity) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto f = random_signs(256, seed);
    EXPECT_NEAR(uk_norm(f, 2).value, fourier_u2(f), 1e-9);
  }
}

TEST(UkNorm, ThirdNormMatchesBruteForce) {
  for (const std::size_t N : {6u, 11u, 16u}) {
    const auto f = random_disk(N, N);
    EXPECT_NEAR(uk_norm(f, 3).value, brute_u3(f), 1e-9) << N;
  }
}

TEST(UkNorm, Errors) {
  EXPECT_THROW(uk_norm(std::vector<cd>((1u << 14) + 1, cd{1.0, 0.0}), 2), InputError);
  EXPECT_THROW(uk_norm(std::vector<cd>((1u << 12) + 1, cd{1.0, 0.0}), 3), InputError);
  EXPECT_THROW(uk_norm(std::vector<cd>(8, cd{1.0, 0.0}), 4), UnsupportedError);
  EXPECT_THROW(uk_norm(std::vector<cd>(8, cd{1.0, 0.0}), 1), UnsupportedError);
}
