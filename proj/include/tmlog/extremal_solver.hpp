#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tmlog/error.hpp"
#include "tmlog/fractional_calculus.hpp"
#include "tmlog/function_space.hpp"
#include "tmlog/growth_models.hpp"

namespace tmlog {

struct SolverOptions {
  int max_iter = 2000;
  double tol = 1e-3;
  int symmetrize_every = 10;
  std::uint64_t seed = 7;
  /// Relative amplitude of the seeded perturbation of the initial hat.
  double perturbation = 0.05;
  double initial_constraint = 0.9;
  /// Use the full H^{1/2} norm (seminorm part plus L²) as the constraint.
  bool entire_space = false;
};

struct HistoryEntry {
  int iteration = 0;
  double phi = 0.0;
  double constraint_value = 0.0;
};

struct SymmetrizationRecord {
  int iteration = 0;
  double phi_plus_before = 0.0;
  double phi_plus_after = 0.0;
  double constraint_before = 0.0;
  double constraint_after = 0.0;
  bool accepted = false;
};

struct MaximizerState {
  Grid1D grid;
  std::string growth;
  bool entire_space = false;
  std::vector<double> coefficients;
  double phi = 0.0;
  double constraint_value = 0.0;
  double kkt_residual = 0.0;
  double theta = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<HistoryEntry> history;
  std::vector<SymmetrizationRecord> symmetrizations;

  SampledFunction function() const { return SampledFunction(grid, coefficients); }
};

class SolverStall : public Error {
 public:
  SolverStall(const std::string& what, MaximizerState state)
      : Error(ErrorKind::stall, what), state_(std::move(state)) {}
  const MaximizerState& state() const noexcept { return state_; }

 private:
  MaximizerState state_;
};

/// Constraint matrix B with constraint value cᵀBc: Q/(2π), plus the mass
/// matrix for the entire-space norm.
Eigen::MatrixXd constraint_matrix(const StiffnessForm& Q, bool entire_space = false);
double constraint_value(const Eigen::VectorXd& c, const StiffnessForm& Q, bool entire_space = false);

/// Rescales c onto the unit ball of the constraint; identity when feasible.
Eigen::VectorXd project_to_ball(const Eigen::VectorXd& c, const StiffnessForm& Q, bool entire_space = false);

/// Nodal gradient of the discretized Φ at u.
Eigen::VectorXd phi_gradient(const SampledFunction& u, const GrowthModel& G);

MaximizerState maximize(const GrowthModel& G, const Grid1D& grid, const SolverOptions& opts = {});

struct ThetaEstimate {
  double theta = 0.0;
  double kkt_residual = 0.0;
};

/// θ = ⟨∇Φ, c⟩ / ⟨∇C, c⟩ at the state; requires an active constraint.
ThetaEstimate theta_estimate(const MaximizerState& state, const StiffnessForm& Q, const GrowthModel& G);

}  // namespace tmlog
