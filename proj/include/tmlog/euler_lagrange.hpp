#pragma once

#include <optional>
#include <string>

#include "tmlog/extremal_solver.hpp"
#include "tmlog/fractional_calculus.hpp"
#include "tmlog/function_space.hpp"
#include "tmlog/growth_models.hpp"

namespace tmlog {

/// interval: (-Δ)^{1/2}u = θ w g(u) inside the support (maximizer over the
/// interval ball); entire: (-Δ)^{1/2}u + u = θ w g(u).
enum class ResidualMode { interval, entire };
const char* to_string(ResidualMode m) noexcept;

struct ELReport {
  double residual_u = 0.0;
  double residual_w = 0.0;
  std::optional<double> u_decay_exponent;
  double w_log_slope = 0.0;
  double theta_used = 0.0;
  ResidualMode mode = ResidualMode::interval;
  int nodes_u = 0;
  int nodes_w = 0;
  int failed_nodes = 0;
  double failure_ratio = 0.0;
};

/// w = log(1/|·|) * G(u) at the nodes of eval_grid (G(u) on a 4x refined grid).
SampledFunction w_potential(const SampledFunction& u, const GrowthModel& G, const Grid1D& eval_grid);

/// u and w on a shared grid reaching well beyond supp u.
ELReport system_residual(const SampledFunction& u, const SampledFunction& w, double theta, const GrowthModel& G,
                         const QuadratureSpec& q = {}, ResidualMode mode = ResidualMode::interval);

struct DecayFit {
  double exponent = 0.0;
  Interval used;            // window after dropping nonpositive samples
  bool shrunk = false;
  double inner_exponent = 0.0;  // fit on the inner half of the window
  double outer_exponent = 0.0;  // fit on the outer half
  bool super_polynomial = false;
};

/// Least-squares slope of log u against log|x| for |x| in the window.
DecayFit decay_fit(const SampledFunction& u, Interval window);

/// Coefficient b of the fit w ≈ a - b log|x| over |x| in the window.
double log_slope_fit(const SampledFunction& w, Interval window);

/// Full check for a maximizer: extends the grid to ±outer, builds w, uses
/// θ = 1/θ_KKT, and fits the logarithmic slope of w on |x| ∈ [5, 20].
ELReport el_check(const MaximizerState& state, const GrowthModel& G, const QuadratureSpec& q = {},
                  double outer = 30.0);

}  // namespace tmlog
