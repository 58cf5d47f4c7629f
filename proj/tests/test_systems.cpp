#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "wwlab/errors.hpp"
#include "wwlab/systems.hpp"

using namespace wwlab;

namespace {

CirclePoint q(std::int64_t num, std::uint64_t den) { return CirclePoint::from_rational(num, den); }

StatePoint n_steps(const SystemSpec& sys, StatePoint x, std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) x = step(sys, x);
  return x;
}

// Pearson χ² over `bins` equal cells of [0,1).
double chi_square(const std::vector<CirclePoint>& xs, std::size_t bins) {
  std::vector<double> counts(bins, 0.0);
  for (const auto& c : xs) counts[static_cast<std::size_t>((c.frac >> 32) * bins >> 32)] += 1.0;
  const double expect = static_cast<double>(xs.size()) / static_cast<double>(bins);
  double chi = 0.0;
  for (double c : counts) chi += (c - expect) * (c - expect) / expect;
  return chi;
}

}  // namespace

TEST(Iterate, RationalRotation) {
  const auto sys = SystemSpec::rotation(q(1, 4));
  EXPECT_EQ(iterate(sys, StatePoint::torus({CirclePoint{}}), 3).coord(0), q(3, 4));
}

TEST(Iterate, ZeroStepsIsIdentity) {
  std::mt19937_64 rng(1);
  for (const auto& sys : {SystemSpec::rotation(golden_alpha()), SystemSpec::anzai_skew(golden_alpha()),
                          SystemSpec::heisenberg(golden_alpha(), q(1, 3)), SystemSpec::bernoulli()}) {
    const auto x = sample_initial_points(sys, 1, rng())[0];
    EXPECT_EQ(iterate(sys, x, 0), x);
  }
}

TEST(Iterate, AnzaiClosedFormFiveSteps) {
  const CirclePoint alpha = golden_alpha();
  const auto sys = SystemSpec::anzai_skew(alpha);
  const CirclePoint x = q(1, 7), y = q(2, 9);
  const auto got = iterate(sys, StatePoint::torus({x, y}), 5);
  EXPECT_EQ(got.coord(0), x + alpha.times(5));
  EXPECT_EQ(got.coord(1), y + x.times(5) + alpha.times(10));
  EXPECT_EQ(got, n_steps(sys, StatePoint::torus({x, y}), 5));
}

TEST(Iterate, ClosedFormAgreesWithStepping) {
  std::mt19937_64 rng(2);
  for (const auto& sys : {SystemSpec::rotation(CirclePoint{rng()}), SystemSpec::anzai_skew(CirclePoint{rng()})}) {
    const auto start = sample_initial_points(sys, 1, rng())[0];
    StatePoint x = start;
    for (std::uint64_t n = 0; n <= 4096; ++n) {
      ASSERT_EQ(iterate(sys, start, n), x) << "n=" << n;
      x = step(sys, x);
    }
  }
}

TEST(Iterate, HeisenbergStep) {
  const CirclePoint a = q(1, 8), b = q(1, 4);
  const auto sys = SystemSpec::heisenberg(a, b);
  const auto next = step(sys, StatePoint::torus({q(1, 2), q(0, 1), q(1, 16)}));
  EXPECT_EQ(next.coord(0), q(5, 8));
  EXPECT_EQ(next.coord(1), q(1, 4));
  EXPECT_EQ(next.coord(2), q(1, 16) + q(1, 8));  // z + x·β = 1/16 + 1/8
}

TEST(Iterate, DimensionMismatch) {
  EXPECT_THROW(iterate(SystemSpec::anzai_skew(golden_alpha()), StatePoint::torus({q(1, 2)}), 1), InputError);
  EXPECT_THROW(iterate(SystemSpec::rotation(golden_alpha()), StatePoint::cursor(5), 1), InputError);
}

TEST(Orbit, RationalRotationTables) {
  const auto sys = SystemSpec::rotation(q(1, 4));
  const auto x0 = StatePoint::torus({CirclePoint{}});
  const auto t1 = orbit(sys, x0, 1, 5);
  const std::array<CirclePoint, 5> e1{q(0, 1), q(1, 4), q(1, 2), q(3, 4), q(0, 1)};
  ASSERT_EQ(t1.length(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(t1.states[i].coord(0), e1[i]);
  const auto t2 = orbit(sys, x0, 2, 3);
  const std::array<CirclePoint, 3> e2{q(0, 1), q(1, 2), q(0, 1)};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t2.states[i].coord(0), e2[i]);
}

TEST(Orbit, StatesAreStridedIterates) {
  const auto sys = SystemSpec::heisenberg(golden_alpha(), q(1, 5));
  const auto x = sample_initial_points(sys, 1, 4)[0];
  const auto t = orbit(sys, x, 3, 50);
  for (std::size_t n = 0; n < t.length(); ++n) EXPECT_EQ(t.states[n], n_steps(sys, x, 3 * n));
}

TEST(Orbit, BernoulliReproducible) {
  const auto sys = SystemSpec::bernoulli();
  const auto x = StatePoint::cursor(0xfeedULL);
  const auto a = orbit(sys, x, 1, 8);
  const auto b = orbit(sys, x, 1, 8);
  for (std::size_t n = 0; n < 8; ++n) {
    EXPECT_EQ(a.states[n], b.states[n]);
    EXPECT_EQ(a.states[n].bits().offset, n);
    EXPECT_EQ(a.states[n].current_bit(), stream_bit(0xfeedULL, n));
  }
}

TEST(Orbit, RejectsEmptyAndZeroStride) {
  const auto sys = SystemSpec::rotation(golden_alpha());
  const auto x = StatePoint::torus({CirclePoint{}});
  EXPECT_THROW(orbit(sys, x, 1, 0), InputError);
  EXPECT_THROW(orbit(sys, x, 0, 4), InputError);
}

TEST(Sampling, Deterministic) {
  const auto sys = SystemSpec::anzai_skew(golden_alpha());
  EXPECT_EQ(sample_initial_points(sys, 1, 42), sample_initial_points(sys, 1, 42));
  const auto ten = sample_initial_points(sys, 10, 42);
  const auto five = sample_initial_points(sys, 5, 42);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(ten[i], five[i]);
}

TEST(Sampling, CharacterMeansSmall) {
  for (const auto& sys : {SystemSpec::rotation(golden_alpha()), SystemSpec::anzai_skew(golden_alpha())}) {
    const auto pts = sample_initial_points(sys, 10000, 99);
    for (std::size_t d = 0; d < sys.dimension(); ++d) {
      std::complex<double> s{};
      for (const auto& p : pts) s += std::polar(1.0, 2.0 * M_PI * p.coord(d).to_double());
      EXPECT_LE(std::abs(s) / 1e4, 0.03);
    }
  }
}

TEST(Sampling, BernoulliBitsFair) {
  const auto pts = sample_initial_points(SystemSpec::bernoulli(), 10000, 5);
  int ones = 0;
  for (const auto& p : pts) ones += p.current_bit() ? 1 : 0;
  EXPECT_NEAR(ones / 1e4, 0.5, 0.03);
}

TEST(MeasurePreservation, ChiSquareAfterOneStep) {
  // 0.999 quantile of χ² with 15 degrees of freedom.
  constexpr double kQuantile = 37.697;
  for (const auto& sys : {SystemSpec::rotation(golden_alpha()), SystemSpec::anzai_skew(golden_alpha()),
                          SystemSpec::heisenberg(golden_alpha(), q(1, 3))}) {
    const auto pts = sample_initial_points(sys, 10000, 21);
    for (std::size_t d = 0; d < sys.dimension(); ++d) {
      std::vector<CirclePoint> pushed;
      for (const auto& p : pts) pushed.push_back(step(sys, p).coord(d));
      EXPECT_LT(chi_square(pushed, 16), kQuantile) << to_string(sys.kind) << " coord " << d;
    }
  }
}

TEST(SystemJson, RoundTrip) {
  for (const auto& sys : {SystemSpec::rotation(q(1, 4), "r"), SystemSpec::anzai_skew(golden_alpha()),
                          SystemSpec::heisenberg(golden_alpha(), q(1, 3)), SystemSpec::bernoulli("b")}) {
    const auto j = to_json(sys);
    EXPECT_TRUE(j.contains("kind"));
    EXPECT_TRUE(j.contains("params"));
    EXPECT_TRUE(j.contains("label"));
    EXPECT_EQ(system_from_json(j), sys);
  }
  EXPECT_EQ(to_json(SystemSpec::rotation(q(1, 4))).at("params").at("alpha"), "0x4000000000000000");
  EXPECT_THROW(system_from_json(nlohmann::json{{"kind", "torus"}}), LookupError);
}
