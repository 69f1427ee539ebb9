#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tmlog/function_space.hpp"
#include "tmlog/growth_models.hpp"
#include "tmlog/log_kernel.hpp"

namespace tmlog {

enum class EvalMethod { direct, radial_reduction };
const char* to_string(EvalMethod m) noexcept;

/// Φ = Φ₊ - Φ₋ (or Ψ = Ψ₊ - Ψ₋) with the method that produced it.
struct FunctionalReport {
  double phi_plus = 0.0;
  double phi_minus = 0.0;
  double phi = 0.0;
  EvalMethod method = EvalMethod::direct;
  double est_error = 0.0;
};

struct IdentityDiscrepancy {
  double direct_value = 0.0;
  double formula_value = 0.0;
  double abs_gap = 0.0;
  std::string probe;
  std::optional<double> x;  // set for pointwise records
};

/// ∬ k(x - y) v(x) w(y) for nonnegative piecewise-linear v, w.
double log_kernel_bilinear_direct(const SampledFunction& v, const SampledFunction& w,
                                  KernelBranch sign = KernelBranch::full);

/// Discretized Φ(c) = vᵀ K v with v = G(P c), P the interpolation from `grid`
/// onto a refined grid and K the log-kernel Galerkin matrices there.
class DiscreteLogEnergy {
 public:
  explicit DiscreteLogEnergy(const Grid1D& grid, int refine = 4);

  const Grid1D& grid() const { return grid_; }
  const Grid1D& fine_grid() const { return fine_; }
  const Eigen::MatrixXd& interpolation() const { return P_; }
  const KernelMatrices& kernel() const { return K_; }

  FunctionalReport evaluate(const Eigen::VectorXd& c, const GrowthModel& G) const;
  /// ∇_c Φ = 2 Pᵀ (g(Pc) ∘ K v).
  Eigen::VectorXd gradient(const Eigen::VectorXd& c, const GrowthModel& G) const;

 private:
  Grid1D grid_, fine_, half_;
  Eigen::MatrixXd P_, P_half_, P_half_to_fine_;
  KernelMatrices K_;
  Eigen::MatrixXd K_full_;
};

FunctionalReport phi_report(const SampledFunction& u, const GrowthModel& G);
/// Same split on a truncated line grid; requires G(0) = 0.
FunctionalReport psi_report(const SampledFunction& u, const GrowthModel& G);

/// ∫ log(1 + |x|) v(x) dx.
double log_star_norm(const SampledFunction& v);

/// log|x| ∫_{|y|<|x|} v + ∫_{|y|≥|x|} log|y| v(y) dy, as a formula value.
double newton_radial_convolution(const SampledFunction& v, double x);
/// ∫ log|x - y| v(y) dy by direct product integration.
double log_convolution(const SampledFunction& v, double x);

/// ∫₀^∞ v(r) [log(1/r) ∫₀^r w + ∫_r^∞ log(1/ρ) w(ρ) dρ] dr.
double radial_reduction_bilinear(const SampledFunction& v, const SampledFunction& w);

/// Pointwise records for each probe, followed by one bilinear record.
std::vector<IdentityDiscrepancy> identity_discrepancy(const SampledFunction& v,
                                                      const std::vector<double>& probes);

}  // namespace tmlog
