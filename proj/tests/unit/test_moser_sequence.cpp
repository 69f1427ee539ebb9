#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "tmlog/error.hpp"
#include "tmlog/moser_sequence.hpp"

using namespace tmlog;
using std::numbers::pi;

TEST(Moser, AmplitudeAndDomain) {
  EXPECT_THROW(moser_amplitude(2.0), Error);
  const double L = std::log(100.0);
  EXPECT_NEAR(moser_amplitude(100.0), std::sqrt((1 - 1 / L) / (pi * L)), 1e-15);
}

TEST(Moser, FunctionShape) {
  const double n = 1e3;
  const SampledFunction w = moser_function(n, moser_grid(n));
  const double A = moser_amplitude(n);
  EXPECT_NEAR(evaluate(w, 0.0), A * std::log(n), 1e-12);
  EXPECT_NEAR(evaluate(w, 0.1), A * std::log(10.0), 1e-3);
  EXPECT_EQ(evaluate(w, 1.0), 0.0);
  EXPECT_THROW(moser_function(n, make_interval_grid(33, 1.0, false)), Error);
}

TEST(Moser, ConstantsAgainstOracles) {
  boost::math::quadrature::exp_sinh<double> es;
  const auto fh = [](double t) {
    if (t < 1e-6) return 1.0;
    return t * t / (std::exp(t) + std::exp(-t) - 2.0) + t * t / (std::exp(t) + std::exp(-t) + 2.0);
  };
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_NEAR(A_constant(), es.integrate(fh, 0.0, inf), 1e-10);
  EXPECT_NEAR(A_constant(), pi * pi / 2.0, 1e-12);
  EXPECT_NEAR(B_constant(), es.integrate([&](double t) { return fh(t) * t; }, 0.0, inf), 1e-9);
  EXPECT_NEAR(B_constant(), 10.5 * boost::math::zeta(3.0), 1e-10);
  EXPECT_NEAR(bracket_constant(), 28.0 * boost::math::zeta(3.0), 1e-10);
}

TEST(Moser, NumericSeminormMatchesClosed) {
  for (double n : {10.0, 100.0}) {
    const MoserWitness w = verify_normalization(n);
    EXPECT_NEAR(w.seminorm_sq_numeric / w.seminorm_sq_closed, 1.0, 1e-4) << n;
    EXPECT_TRUE(w.member);
    EXPECT_NEAR(w.quarter_norm_sq, w.seminorm_sq_numeric / (2 * pi), 1e-14);
  }
}

TEST(Moser, PlateauMarginValidatesC2) {
  const MoserPhi p = phi_moser(100.0, GrowthModel::critical_family(0.5), 0.5, std::sqrt(2.0));
  EXPECT_GE(p.plateau_margin, 1.0);
  EXPECT_GE(p.phi_direct, p.lower_bound);
}
