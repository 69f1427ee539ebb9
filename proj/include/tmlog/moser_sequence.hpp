#pragma once

#include <optional>

#include "tmlog/fractional_calculus.hpp"
#include "tmlog/function_space.hpp"
#include "tmlog/growth_models.hpp"

namespace tmlog {

/// A_n = (π log n)^{-1/2} (1 - 1/log n)^{1/2}; requires n >= 3.
double moser_amplitude(double n);

/// Symmetric grid with nodes 0, ±1/n, ±1 and `per_decade` log-graded nodes
/// per decade in between.
Grid1D moser_grid(double n, int per_decade = 32);

/// Nodal samples of w_n: A_n log n on |x| <= 1/n, A_n log(1/|x|) up to |x| = 1, 0 beyond.
SampledFunction moser_function(double n, const Grid1D& grid);

struct ComponentIntegrals {
  double I12 = 0.0;
  double I13 = 0.0;
  double I22 = 0.0;
  double I23 = 0.0;
};

/// The four component integrals of the seminorm of w_n / A_n.
ComponentIntegrals component_integrals(double n);

/// ∫₀^∞ (f + h) with f = t²/(e^t + e^{-t} - 2), h = t²/(e^t + e^{-t} + 2).
double A_constant();
/// Same integrand truncated at T.
double A_partial(double T);
/// ∫₀^∞ (f + h) t dt, the intercept constant of I22.
double B_constant();
/// lim 2 I12 + 2 I23 as n -> ∞.
double bracket_constant();
/// [C + π² log n + 4 (log n)² log(1 + 2/(n-1))] A_n² with C = bracket_constant().
double bracket_bound(double n);

struct MoserWitness {
  double n = 0.0;
  double A_n = 0.0;
  ComponentIntegrals components;
  double seminorm_sq_closed = 0.0;
  double seminorm_sq_numeric = 0.0;
  double quarter_norm_sq = 0.0;
  bool member = false;  // quarter_norm_sq <= 1
  double bracket = 0.0;
  std::optional<double> phi_lower_bound;
  std::optional<double> phi_direct;
};

MoserWitness verify_normalization(double n, const QuadratureSpec& q = {}, int per_decade = 32);

struct MoserPhi {
  double phi_direct = 0.0;
  double lower_bound = 0.0;
  double c2 = 0.0;
  /// min over |x| <= 1/n of G(w_n) / (c₂ (log n)^{-γ/2} n); >= 1 validates c₂.
  double plateau_margin = 0.0;
};

/// Φ(w_n) by the direct method and the lower bound (1/4) c₂² (log n)^{1-γ},
/// c₂ = π^{γ/2} / (c1 e).
MoserPhi phi_moser(double n, const GrowthModel& G, double gamma, double c1, int per_decade = 32);

}  // namespace tmlog
