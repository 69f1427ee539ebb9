#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "tmlog/function_space.hpp"

namespace tmlog {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int diagonal_refinement_levels = 8;
  /// Half-width beyond which analytic tails are used; 0 means "grid hull".
  double tail_cutoff = 0.0;
  /// First excision radius of the principal-value Richardson sequence.
  double pv_initial_excision = 0.125;

  void validate() const;
};

/// C_{N,s} = 4^s s Γ(N/2 + s) / (π^{N/2} Γ(1 - s)).
double normalization_constant(double s, int N);
/// (∫_ℝ (1 - cos ζ)/|ζ|^{1+2s} dζ)^{-1}, the one-dimensional constant by quadrature.
double normalization_constant_numeric(double s);

/// ∬_{ℝ²} (u(x) - u(y))² / (x - y)² of the zero extension of u.
double gagliardo_seminorm_sq(const SampledFunction& u, const QuadratureSpec& q = {});
/// Symmetric bilinear form behind the seminorm (u and v on the same grid).
double gagliardo_bilinear(const SampledFunction& u, const SampledFunction& v,
                          const QuadratureSpec& q = {});
/// |(-Δ)^{1/4} u|₂² = gagliardo_seminorm_sq / (2π).
double quarter_laplacian_norm_sq(const SampledFunction& u, const QuadratureSpec& q = {});

/// Quadratic form Q with cᵀQc = [u]² for nodal coefficients c vanishing at the hull.
struct StiffnessForm {
  Grid1D grid;
  Eigen::MatrixXd entries;

  double quadratic(const Eigen::VectorXd& c) const { return c.dot(entries * c); }
};

StiffnessForm stiffness_matrix(const Grid1D& grid);
/// Consistent P1 mass matrix (∫ φ_i φ_j).
Eigen::MatrixXd mass_matrix(const Grid1D& grid);

/// Smooth function with its analytic second derivative.
struct ClosedFormFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> f2;
};

ClosedFormFunction cauchy_profile();             // 1/(1+x²)
ClosedFormFunction cauchy_complement_shifted();  // x²/(1+x²) + 1
ClosedFormFunction constant_function(double c);
ClosedFormFunction combine(double a, const ClosedFormFunction& f, double b,
                           const ClosedFormFunction& g);

/// Behaviour of a sampled function beyond its hull: value(y) = c - b log|y|.
/// Absent means zero extension.
struct LogFarField {
  double c = 0.0;
  double b = 0.0;
};

/// (-Δ)^{1/2} f(x) = (1/π) P.V.∫ (f(x) - f(y))/(x - y)² dy.
double half_laplacian_pointwise(const ClosedFormFunction& f, double x, const QuadratureSpec& q = {});
/// Sampled case: x must be a node at least two cells inside the hull.
double half_laplacian_pointwise(const SampledFunction& f, double x, const QuadratureSpec& q = {},
                                const std::optional<LogFarField>& far = std::nullopt);

/// (numeric ∫ e^{-2πixξ}/(1+x²) dx, π e^{-2π|ξ|}).
std::pair<double, double> fourier_pair_check(double xi);

/// ∫ (e^{αu²} - 1) over the hull of u, Gauss per cell.
double tm_integral(const SampledFunction& u, double alpha);

}  // namespace tmlog
