#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "tmlog/error.hpp"
#include "tmlog/extremal_solver.hpp"
#include "tmlog/moving_plane.hpp"

using namespace tmlog;

namespace {
SampledFunction cauchy40() {
  return sample(make_interval_grid(801, 40.0, false), [](double x) { return 1.0 / (1.0 + x * x) - 1.0 / 1601.0; });
}
double hat(double x, double c) { return std::max(0.0, 1.0 - std::abs(x - c)); }
}  // namespace

TEST(Reflection, EvenAtZeroVanishes) {
  const SampledFunction d = reflect_diff(cauchy40(), 0.0);
  EXPECT_EQ(d.max_value(), 0.0);
  EXPECT_EQ(d.min_value(), 0.0);
}

TEST(Reflection, EvenDecreasingNonnegativeLeftOfCenter) {
  for (double l : {-0.3, -2.0, -7.0}) EXPECT_GE(reflect_diff(cauchy40(), l).min_value(), 0.0);
}

TEST(Reflection, TranslateCenterDetected) {
  std::vector<double> xs;
  for (int i = -80; i <= 96; ++i) xs.push_back(0.125 * i);
  const SampledFunction u = sample(Grid1D(xs), [](double x) { return 1.0 / (1.0 + (x - 1) * (x - 1)); });
  const SampledFunction d = reflect_diff(u, 1.0);
  EXPECT_LE(std::max(d.max_value(), -d.min_value()), 1e-15);
}

TEST(Reflection, AntisymmetricOnMirroredPairs) {
  const SampledFunction u = sample(make_interval_grid(101, 3.0, false), [](double x) { return hat(x, 0.4); });
  const SampledFunction a = antisymmetric_difference(u, 0.37);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(a[i], -a[n - 1 - i]);
  EXPECT_NEAR(a.grid()[0] + a.grid()[n - 1], 0.74, 1e-14);
}

TEST(Reflection, LeavingHullFlagged) {
  const SampledFunction u = cauchy40();
  EXPECT_FALSE(reflection_leaves_hull(u, 0.0));
  EXPECT_TRUE(reflection_leaves_hull(u, -3.0));
}

TEST(WLambda, NonnegativeWhenDifferenceIs) {
  const SampledFunction w = w_lambda(cauchy40(), GrowthModel::power(2.0), -2.0);
  EXPECT_GE(w.min_value(), -1e-12);
  EXPECT_GT(w.max_value(), 0.0);
  const SampledFunction z = w_lambda(cauchy40(), GrowthModel::power(2.0), 0.0);
  EXPECT_EQ(z.max_value(), 0.0);
}

TEST(WLambda, KernelPositive) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-10.0, 0.0);
  const double l = 0.5;
  for (int k = 0; k < 1000; ++k) {
    const double x = unif(rng), y = unif(rng);
    if (x == y) continue;
    EXPECT_GT(std::log(std::abs(x - (2 * l - y)) / std::abs(x - y)), 0.0);
  }
}

TEST(WLambda, AgainstBruteForce) {
  const Grid1D g = make_interval_grid(201, 2.0, false);
  const SampledFunction u = sample(g, [](double x) { return hat(x, 0.3); });
  const GrowthModel G = GrowthModel::power(2.0);
  const double l = 0.1;
  const SampledFunction w = w_lambda(u, G, l);
  boost::math::quadrature::tanh_sinh<double> ts;
  const auto z = [&](double y) { return G(evaluate(u, 2 * l - y)) - G(evaluate(u, y)); };
  for (double x : {-1.0, -0.4, 0.0}) {
    const auto k = [&](double y) {
      return y == x ? 0.0 : std::log(std::abs(x - (2 * l - y)) / std::abs(x - y)) * z(y);
    };
    double ref = 0.0;
    // kinks of z: hat peaks and feet of u and its reflection
    std::vector<double> cuts{-2.0, -1.1, -0.7, -0.1, x, l};
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cuts[i + 1] > cuts[i]) ref += ts.integrate(k, cuts[i], cuts[i + 1]);
    const auto idx = w.grid().find_node(x, 1e-12);
    ASSERT_TRUE(idx.has_value());
    EXPECT_NEAR(w[*idx], ref, 1e-5) << x;
  }
}

TEST(CLambda, EmptyNegativeSetGivesZero) {
  const ComparisonConstant c = c_lambda(cauchy40(), GrowthModel::power(2.0).scaled(0.5), -3.0);
  EXPECT_EQ(c.c_mid, 0.0);
  EXPECT_EQ(c.sigma_minus_measure, 0.0);
  EXPECT_GT(c.envelope, 0.0);
}

TEST(CLambda, PositiveJustRightOfCenter) {
  const ComparisonConstant c = c_lambda(cauchy40(), GrowthModel::power(2.0).scaled(0.5), 0.05);
  EXPECT_GT(c.c_mid, 0.0);
  EXPECT_GE(c.c_worst, c.c_mid);
  EXPECT_LE(c.c_worst, c.envelope + 1e-12);
}

TEST(CLambda, EnvelopeDecaysOutward) {
  const GrowthModel G = GrowthModel::power(2.0).scaled(0.5);
  double prev = INFINITY;
  for (double l = -2.0; l >= -8.0; l -= 1.0) {
    const double e = c_lambda(cauchy40(), G, l).envelope;
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(Lambda1, EvenAndTranslated) {
  const SampledFunction u = cauchy40();
  EXPECT_LE(std::abs(lambda1_estimate(u, {-8.0, 2.0})), 0.1);
  std::vector<double> xs;
  for (int i = -160; i <= 176; ++i) xs.push_back(0.125 * i);
  const SampledFunction t =
      sample(Grid1D(xs), [](double x) { return 1.0 / (1.0 + (x - 1) * (x - 1)) - 1.0 / 442.0; });
  EXPECT_NEAR(lambda1_estimate(t, {-8.0, 8.0}), 1.0, 0.125);
}

TEST(Lambda1, RangeError) {
  try {
    lambda1_estimate(cauchy40(), {1.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::range);
  }
}

TEST(Lambda1, MaximizerIsSymmetric) {
  const MaximizerState st = maximize(GrowthModel::power(2.0), make_interval_grid(129, 1.0, false));
  const ReflectionDiagnostics d = moving_plane_sweep(st.function(), GrowthModel::power(2.0), {-0.5, 0.0, 0.5});
  EXPECT_LE(std::abs(d.lambda1_estimate), st.grid.cell_width(0));
  EXPECT_LE(d.symmetry_score, 1e-6);
}

TEST(EnergyBound, NonnegativeGivesZeros) {
  const SampledFunction u = sample(make_interval_grid(101, 2.0, false), [](double x) { return hat(x, 0.0); });
  const EnergyBound e = negative_part_energy_bound(u);
  EXPECT_EQ(e.lhs, 0.0);
  EXPECT_EQ(e.rhs, 0.0);
}

TEST(EnergyBound, MixedSignInequality) {
  const SampledFunction u =
      sample(make_interval_grid(401, 4.0, false), [](double x) { return hat(x, -0.5) - 0.7 * hat(x, 1.2); });
  const EnergyBound e = negative_part_energy_bound(u);
  EXPECT_GT(e.lhs, 0.0);
  EXPECT_LE(e.lhs, e.rhs + 1e-4);
}

TEST(ReflectionIdentityTest, AntisymmetricExtensionHolds) {
  const SampledFunction u = sample(make_interval_grid(401, 4.0, false),
                                   [](double x) { return hat(x, -0.5) + 0.8 * hat(x, 0.9) - 0.3 * hat(x, 2.0); });
  for (double l : {-0.2, 0.3, 0.7}) {
    const ReflectionIdentity r = reflection_identity(u, l);
    EXPECT_LE(r.gap, 1e-4) << l;
  }
}

TEST(Sweep, ShapesAndSigns) {
  const ReflectionDiagnostics d = moving_plane_sweep(cauchy40(), GrowthModel::power(2.0), {-4.0, -2.0, 0.0, 1.0});
  ASSERT_EQ(d.c_lambda.size(), 4u);
  ASSERT_EQ(d.sigma_minus_measure.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_GE(d.c_lambda[i], 0.0);
    EXPECT_GE(d.sigma_minus_measure[i], 0.0);
  }
  EXPECT_TRUE(d.mu_fit.has_value());
}
