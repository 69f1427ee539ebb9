#pragma once

#include <optional>
#include <vector>

#include "tmlog/fractional_calculus.hpp"
#include "tmlog/function_space.hpp"
#include "tmlog/growth_models.hpp"

namespace tmlog {

/// Grid closed under x -> 2λ - x containing λ, every node of `grid` left of
/// λ and the mirror of every node right of it.
Grid1D reflection_grid(const Grid1D& grid, double lambda);

/// True when the reflected support leaves the hull of u, so the zero
/// extension of u enters u^λ.
bool reflection_leaves_hull(const SampledFunction& u, double lambda);

/// u_λ = u(2λ - ·) - u on the whole reflection grid; exactly antisymmetric on
/// mirrored node pairs.
SampledFunction antisymmetric_difference(const SampledFunction& u, double lambda);

/// u_λ restricted to Σ_λ = {x <= λ}.
SampledFunction reflect_diff(const SampledFunction& u, double lambda);

/// u on its grid merged with the zero crossings of the interpolant.
SampledFunction with_zero_crossings(const SampledFunction& u);
/// min(u, 0), exact for the piecewise-linear interpolant.
SampledFunction negative_part(const SampledFunction& u);

/// w_λ(x) = ∫_{Σ_λ} log(|x - y^λ|/|x - y|) (G(u^λ) - G(u))(y) dy at the nodes
/// of reflect_diff(u, λ).
SampledFunction w_lambda(const SampledFunction& u, const GrowthModel& G, double lambda);

struct ComparisonConstant {
  double c_mid = 0.0;     // ξ = (u + u^λ)/2
  double c_worst = 0.0;   // g(max(u, u^λ))
  /// ξ = u over all of Σ_λ; bounds c_worst when g is nondecreasing, since
  /// u^λ < u on Σ_λ^-.
  double envelope = 0.0;
  double sigma_minus_measure = 0.0;
  double min_u_lambda = 0.0;
};

/// c_λ = (∫_{Σ_λ^-} |λ - y| g(ξ_λ(y))² dy)^{1/2} with g = G'.
ComparisonConstant c_lambda(const SampledFunction& u, const GrowthModel& G, double lambda);

/// sup{λ : min_{Σ_μ} u_μ >= -tol for all μ <= λ} within the range, by
/// bisection. tol defaults to 1e-8 max u.
double lambda1_estimate(const SampledFunction& u, Interval range, std::optional<double> tol = std::nullopt);

struct EnergyBound {
  double lhs = 0.0;  // [u⁻]² + |u⁻|²
  double rhs = 0.0;  // 2C⁻¹∫(-Δ)^{1/2}u u⁻ + ∫u u⁻
};

/// Both sides of the negative-part inequality for u vanishing at its hull.
EnergyBound negative_part_energy_bound(const SampledFunction& u, const QuadratureSpec& q = {});

struct ReflectionIdentity {
  /// With the antisymmetric extension of the Σ_λ negative part.
  double whole_line = 0.0;
  double twice_half_space = 0.0;
  double gap = 0.0;
  /// With the pointwise negative part min(u_λ, 0) on the whole line.
  double literal_whole_line = 0.0;
  double literal_gap = 0.0;
};

/// ∫_ℝ (-Δ)^{1/2}u_λ v + u_λ v against 2∫_{Σ_λ}(same), v the negative part.
ReflectionIdentity reflection_identity(const SampledFunction& u, double lambda, const QuadratureSpec& q = {});

struct ReflectionDiagnostics {
  std::vector<double> lambda_grid;
  std::vector<double> min_u_lambda;
  std::vector<double> sigma_minus_measure;
  std::vector<double> c_lambda;
  std::vector<double> c_lambda_worst;
  std::vector<double> envelope;
  double lambda1_estimate = 0.0;
  double symmetry_score = 0.0;
  /// max over the sweep of |w_λ⁻|₂ / (c_λ |u_λ⁻|₂) where both are nonzero.
  std::optional<double> mu_fit;
};

ReflectionDiagnostics moving_plane_sweep(const SampledFunction& u, const GrowthModel& G,
                                         const std::vector<double>& lambdas, bool fit_mu = true);

}  // namespace tmlog
