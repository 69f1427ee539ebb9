#include "tmlog/moving_plane.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tmlog/error.hpp"
#include "tmlog/log_kernel.hpp"
#include "tmlog/quadrature.hpp"

namespace tmlog {

namespace {

using std::numbers::pi;

// Left half (nodes <= λ, ending at λ with value 0) mirrored into an
// antisymmetric function on the whole reflection grid.
SampledFunction mirror_extend(const std::vector<double>& left, const std::vector<double>& vals, double lambda) {
  const std::size_t m = left.size();
  std::vector<double> x(left), v(vals);
  x.reserve(2 * m - 1);
  v.reserve(2 * m - 1);
  for (std::size_t i = m - 1; i-- > 0;) {
    x.push_back(2.0 * lambda - left[i]);
    v.push_back(-vals[i]);
  }
  return SampledFunction(Grid1D(std::move(x)), std::move(v));
}

std::vector<double> left_nodes(const Grid1D& grid, double lambda) {
  const double tol = 1e-13 * std::max({1.0, std::abs(grid.lo()), std::abs(grid.hi()), std::abs(lambda)});
  std::vector<double> cand;
  cand.reserve(grid.size());
  for (double x : grid.nodes()) cand.push_back(x <= lambda ? x : 2.0 * lambda - x);
  std::sort(cand.begin(), cand.end());
  std::vector<double> left;
  left.reserve(cand.size() + 1);
  for (double x : cand) {
    if (x >= lambda - tol) break;
    if (left.empty() || x - left.back() > tol) left.push_back(x);
  }
  left.push_back(lambda);
  return left;
}

// ∫ u v for piecewise-linear u, v on one grid (exact).
double l2_dot(const SampledFunction& u, const SampledFunction& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.grid().cells(); ++k)
    s += u.grid().cell_width(k) / 6.0 *
         (2.0 * u[k] * v[k] + u[k] * v[k + 1] + u[k + 1] * v[k] + 2.0 * u[k + 1] * v[k + 1]);
  return s;
}

SampledFunction map_values(const SampledFunction& u, double (*f)(double)) {
  std::vector<double> v(u.values());
  for (double& t : v) t = f(t);
  return SampledFunction(u.grid(), std::move(v));
}

double min0(double t) { return std::min(t, 0.0); }

}  // namespace

Grid1D reflection_grid(const Grid1D& grid, double lambda) {
  const std::vector<double> left = left_nodes(grid, lambda);
  return mirror_extend(left, std::vector<double>(left.size(), 0.0), lambda).grid();
}

bool reflection_leaves_hull(const SampledFunction& u, double lambda) {
  const Interval s = u.support();
  return 2.0 * lambda - s.hi < s.lo || 2.0 * lambda - s.lo > s.hi;
}

SampledFunction reflect_diff(const SampledFunction& u, double lambda) {
  std::vector<double> left = left_nodes(u.grid(), lambda);
  std::vector<double> v(left.size());
  for (std::size_t i = 0; i + 1 < left.size(); ++i) v[i] = evaluate(u, 2.0 * lambda - left[i]) - evaluate(u, left[i]);
  v.back() = 0.0;
  if (left.size() < 3) {
    // Σ_λ misses the hull; pad so the grid is valid.
    const double h = left.size() == 2 ? left[1] - left[0] : 1.0;
    left.insert(left.begin(), left.front() - h);
    v.insert(v.begin(), 0.0);
    if (left.size() < 3) {
      left.insert(left.begin(), left.front() - h);
      v.insert(v.begin(), 0.0);
    }
  }
  return SampledFunction(Grid1D(std::move(left)), std::move(v));
}

SampledFunction antisymmetric_difference(const SampledFunction& u, double lambda) {
  const SampledFunction d = reflect_diff(u, lambda);
  return mirror_extend(d.grid().nodes(), d.values(), lambda);
}

SampledFunction with_zero_crossings(const SampledFunction& u) {
  const Grid1D& g = u.grid();
  std::vector<double> x, v;
  x.reserve(g.size());
  v.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    x.push_back(g[k]);
    v.push_back(u[k]);
    if (k + 1 < g.size() && u[k] * u[k + 1] < 0.0) {
      const double h = g.cell_width(k);
      const double t = h * u[k] / (u[k] - u[k + 1]);
      if (t > 1e-14 * h && t < h * (1.0 - 1e-14)) {
        x.push_back(g[k] + t);
        v.push_back(0.0);
      }
    }
  }
  return SampledFunction(Grid1D(std::move(x)), std::move(v), u.support_hint());
}

SampledFunction negative_part(const SampledFunction& u) { return map_values(with_zero_crossings(u), min0); }

SampledFunction w_lambda(const SampledFunction& u, const GrowthModel& G, double lambda) {
  if (G.value(0.0) != 0.0) fail(ErrorKind::invalid_argument, "w_lambda needs G(0) = 0");
  const SampledFunction d = reflect_diff(u, lambda);
  const Grid1D fine = refine_grid(d.grid(), 4);
  std::vector<double> z(fine.size());
  bool any = false;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    z[i] = G.value(evaluate(u, 2.0 * lambda - fine[i])) - G.value(evaluate(u, fine[i]));
    any = any || z[i] != 0.0;
  }
  std::vector<double> w(d.size(), 0.0);
  if (any) {
    const SampledFunction zf(fine, std::move(z));
    // |x - y^λ| = |x^λ - y|, so the reflected kernel is the potential at x^λ.
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
      w[i] = log_potential(zf, d.grid()[i]) - log_potential(zf, 2.0 * lambda - d.grid()[i]);
  }
  return SampledFunction(d.grid(), std::move(w));
}

ComparisonConstant c_lambda(const SampledFunction& u, const GrowthModel& G, double lambda) {
  if (!G.differentiable()) fail(ErrorKind::unsupported_input, "c_lambda needs a differentiable growth model");
  const SampledFunction d = reflect_diff(u, lambda);
  const Grid1D& g = d.grid();
  const GaussRule& r = gauss_legendre(10);
  ComparisonConstant cc;
  cc.min_u_lambda = d.min_value();
  double mid = 0.0, worst = 0.0, env = 0.0;

  auto piece = [&](double a, double b, bool negative) {
    if (!(b > a)) return;
    // 0: ξ = u (envelope), 1: midpoint, 2: max(u, u^λ)
    const auto weight = [&](double y, int variant) {
      const double uy = evaluate(u, y), ur = evaluate(u, 2.0 * lambda - y);
      const double xi = variant == 0 ? uy : variant == 1 ? 0.5 * (uy + ur) : std::max(uy, ur);
      const double gv = G.derivative(xi);
      return (lambda - y) * gv * gv;
    };
    env += gauss_sum(r, a, b, [&](double y) { return weight(y, 0); });
    if (negative) {
      worst += gauss_sum(r, a, b, [&](double y) { return weight(y, 2); });
      mid += gauss_sum(r, a, b, [&](double y) { return weight(y, 1); });
      cc.sigma_minus_measure += b - a;
    }
  };

  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double a = g[k], b = g[k + 1], va = d[k], vb = d[k + 1];
    if (va * vb < 0.0) {
      const double t = a + (b - a) * va / (va - vb);
      piece(a, t, va < 0.0);
      piece(t, b, vb < 0.0);
    } else {
      piece(a, b, va < 0.0 || vb < 0.0);
    }
  }
  cc.c_mid = std::sqrt(mid);
  cc.c_worst = std::sqrt(worst);
  cc.envelope = std::sqrt(env);
  return cc;
}

double lambda1_estimate(const SampledFunction& u, Interval range, std::optional<double> tol) {
  if (!(range.hi >= range.lo)) fail(ErrorKind::invalid_argument, "lambda range must satisfy lo <= hi");
  const double eps = tol.value_or(1e-8 * u.max_value());
  if (!(eps >= 0.0)) fail(ErrorKind::invalid_argument, "predicate tolerance must be nonnegative");
  const auto holds = [&](double lambda) { return reflect_diff(u, lambda).min_value() >= -eps; };
  if (!holds(range.lo)) {
    std::ostringstream os;
    os << "u_lambda >= -" << eps << " fails already at lambda = " << range.lo;
    fail(ErrorKind::range, os.str());
  }
  if (holds(range.hi)) return range.hi;
  double lo = range.lo, hi = range.hi;
  const double stop = 1e-15 * std::max({1.0, std::abs(lo), std::abs(hi)});
  for (int i = 0; i < 200 && hi - lo > stop; ++i) {
    const double m = 0.5 * (lo + hi);
    (holds(m) ? lo : hi) = m;
  }
  return lo;
}

EnergyBound negative_part_energy_bound(const SampledFunction& u, const QuadratureSpec& q) {
  const SampledFunction z = with_zero_crossings(u);
  const SampledFunction m = map_values(z, min0);
  if (m.min_value() == 0.0) return {};
  EnergyBound e;
  e.lhs = gagliardo_seminorm_sq(m, q) + l2_dot(m, m);
  e.rhs = gagliardo_bilinear(z, m, q) + l2_dot(z, m);
  return e;
}

ReflectionIdentity reflection_identity(const SampledFunction& u, double lambda, const QuadratureSpec& q) {
  const SampledFunction d = with_zero_crossings(reflect_diff(u, lambda));
  const std::vector<double>& left = d.grid().nodes();
  const SampledFunction ua = mirror_extend(left, d.values(), lambda);
  const std::size_t m = left.size(), n = ua.size();

  std::vector<double> anti(n, 0.0), sigma(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    sigma[i] = anti[i] = std::min(d[i], 0.0);
    anti[n - 1 - i] = -anti[i];
  }
  const SampledFunction v_anti(ua.grid(), std::move(anti));
  const SampledFunction v_sigma(ua.grid(), std::move(sigma));
  const SampledFunction v_lit = map_values(ua, min0);

  // ∫(-Δ)^{1/2}f g = B(f, g)/(2π) for the Gagliardo form B.
  const auto pairing = [&](const SampledFunction& v) {
    return gagliardo_bilinear(ua, v, q) / (2.0 * pi) + l2_dot(ua, v);
  };
  ReflectionIdentity r;
  r.whole_line = pairing(v_anti);
  r.twice_half_space = 2.0 * pairing(v_sigma);
  r.gap = std::abs(r.whole_line - r.twice_half_space);
  r.literal_whole_line = pairing(v_lit);
  r.literal_gap = std::abs(r.literal_whole_line - r.twice_half_space);
  return r;
}

ReflectionDiagnostics moving_plane_sweep(const SampledFunction& u, const GrowthModel& G,
                                         const std::vector<double>& lambdas, bool fit_mu) {
  if (lambdas.empty()) fail(ErrorKind::invalid_argument, "empty lambda sweep");
  ReflectionDiagnostics diag;
  diag.lambda_grid = lambdas;
  std::sort(diag.lambda_grid.begin(), diag.lambda_grid.end());
  for (double lambda : diag.lambda_grid) {
    const ComparisonConstant cc = c_lambda(u, G, lambda);
    diag.min_u_lambda.push_back(cc.min_u_lambda);
    diag.sigma_minus_measure.push_back(cc.sigma_minus_measure);
    diag.c_lambda.push_back(cc.c_mid);
    diag.c_lambda_worst.push_back(cc.c_worst);
    diag.envelope.push_back(cc.envelope);
    if (!fit_mu || !(cc.c_mid > 0.0)) continue;
    const double un = lp_norm(negative_part(reflect_diff(u, lambda)), 2.0);
    if (!(un > 0.0)) continue;
    const double wn = lp_norm(negative_part(w_lambda(u, G, lambda)), 2.0);
    const double ratio = wn / (cc.c_mid * un);
    diag.mu_fit = std::max(diag.mu_fit.value_or(0.0), ratio);
  }
  diag.lambda1_estimate = lambda1_estimate(u, {diag.lambda_grid.front(), diag.lambda_grid.back()});
  diag.symmetry_score = lp_norm(antisymmetric_difference(u, diag.lambda1_estimate), 2.0);
  return diag;
}

}  // namespace tmlog
