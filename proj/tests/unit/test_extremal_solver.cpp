#include <gtest/gtest.h>

#include <cmath>

#include "tmlog/error.hpp"
#include "tmlog/extremal_solver.hpp"

using namespace tmlog;

namespace {
const MaximizerState& reference_state() {
  static const MaximizerState st = maximize(GrowthModel::power(2.0), make_interval_grid(129, 1.0, false));
  return st;
}
}  // namespace

TEST(Solver, ConvergesToEvenPositiveMaximizer) {
  const MaximizerState& st = reference_state();
  EXPECT_TRUE(st.converged);
  EXPECT_NEAR(st.constraint_value, 1.0, 1e-8);
  EXPECT_LE(st.kkt_residual, 1e-3);
  const SampledFunction u = st.function();
  EXPECT_LE(evenness_defect(u), 1e-8);
  EXPECT_TRUE(radially_nonincreasing(u));
  for (std::size_t i = 1; i + 1 < u.size(); ++i) EXPECT_GT(u[i], 0.0);
  EXPECT_GT(st.phi, 0.0);
}

TEST(Solver, HistoryIsMonotone) {
  const MaximizerState& st = reference_state();
  for (std::size_t k = 1; k < st.history.size(); ++k) EXPECT_GE(st.history[k].phi, st.history[k - 1].phi);
}

TEST(Solver, ThetaEstimateMatchesState) {
  const MaximizerState& st = reference_state();
  const ThetaEstimate t = theta_estimate(st, stiffness_matrix(st.grid), GrowthModel::power(2.0));
  EXPECT_NEAR(t.theta, st.theta, 1e-10);
  EXPECT_GT(t.theta, 0.0);
}

TEST(Solver, ArgmaxInvariantUnderScaling) {
  const Grid1D g = make_interval_grid(65, 1.0, false);
  const MaximizerState a = maximize(GrowthModel::power(2.0), g);
  const MaximizerState b = maximize(GrowthModel::power(2.0).scaled(2.0), g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(a.coefficients[i], b.coefficients[i], 1e-6);
  EXPECT_NEAR(b.phi, 4.0 * a.phi, 1e-8);
}

TEST(Solver, ProjectionOnlyShrinks) {
  const Grid1D g = make_interval_grid(17, 1.0, false);
  const StiffnessForm Q = stiffness_matrix(g);
  Eigen::VectorXd c(g.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = 1.0 - std::abs(g[i]);
  const Eigen::VectorXd p = project_to_ball(10.0 * c, Q);
  EXPECT_NEAR(constraint_value(p, Q), 1.0, 1e-12);
  const Eigen::VectorXd small = 1e-3 * c;
  EXPECT_EQ(project_to_ball(small, Q), small);
}

TEST(Solver, RejectsBadOptions) {
  SolverOptions o;
  o.tol = 0.0;
  EXPECT_THROW(maximize(GrowthModel::power(2.0), make_interval_grid(17, 1.0, false), o), Error);
  EXPECT_THROW(maximize(GrowthModel::power(2.0), Grid1D({-1.0, 0.0, 0.5, 1.0, 2.0})), Error);
}

TEST(Solver, IterationCapReturnsUnconverged) {
  SolverOptions o;
  o.max_iter = 1;
  o.symmetrize_every = 0;
  const MaximizerState st = maximize(GrowthModel::power(2.0), make_interval_grid(33, 1.0, false), o);
  EXPECT_FALSE(st.converged);
  EXPECT_EQ(st.iterations, 1);
}
