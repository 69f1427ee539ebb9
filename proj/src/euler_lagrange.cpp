#include "tmlog/euler_lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tmlog/error.hpp"
#include "tmlog/log_kernel.hpp"

namespace tmlog {

namespace {

using std::numbers::pi;

// Least-squares slope and intercept of y against x.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (x.size() < 2 || den <= 0.0) fail(ErrorKind::degenerate_fit, "fewer than two distinct abscissae in window");
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

// Lumped mass of node i.
double lumped(const Grid1D& g, std::size_t i) {
  double m = 0.0;
  if (i > 0) m += 0.5 * g.cell_width(i - 1);
  if (i + 1 < g.size()) m += 0.5 * g.cell_width(i);
  return m;
}

// sqrt(Σ m_i t_i²) for each term, and of their sum.
struct ResidualNorms {
  std::vector<double> terms;
  double total = 0.0;
};

double relative(const ResidualNorms& r) {
  const double big = *std::max_element(r.terms.begin(), r.terms.end());
  return big > 0.0 ? std::sqrt(r.total) / big : 0.0;
}

}  // namespace

const char* to_string(ResidualMode m) noexcept { return m == ResidualMode::interval ? "interval" : "entire"; }

SampledFunction w_potential(const SampledFunction& u, const GrowthModel& G, const Grid1D& eval_grid) {
  if (G.value(0.0) != 0.0)
    fail(ErrorKind::invalid_argument, "w potential needs G(0) = 0; the convolution diverges otherwise");
  const Grid1D fine = refine_grid(u.grid(), 4);
  std::vector<double> v(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) v[i] = G.value(evaluate(u, fine[i]));
  const SampledFunction gv(fine, std::move(v));
  std::vector<double> w(eval_grid.size());
  for (std::size_t i = 0; i < eval_grid.size(); ++i) w[i] = log_potential(gv, eval_grid[i]);
  return SampledFunction(eval_grid, std::move(w));
}

ELReport system_residual(const SampledFunction& u, const SampledFunction& w, double theta, const GrowthModel& G,
                         const QuadratureSpec& q, ResidualMode mode) {
  if (u.grid().nodes() != w.grid().nodes())
    fail(ErrorKind::invalid_argument, "u and w must share a grid");
  if (!G.differentiable()) fail(ErrorKind::unsupported_input, "residual needs a differentiable growth model");
  const Grid1D& g = u.grid();
  const std::size_t n = g.size();

  // Support of u in node indices.
  std::size_t first = n, last = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (u[i] != 0.0) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  ELReport rep;
  rep.theta_used = theta;
  rep.mode = mode;
  if (first == n) return rep;
  // The support runs from node first-1 to node last+1 (where u returns to 0).
  const std::size_t s_lo = first == 0 ? 0 : first - 1, s_hi = std::min(n - 1, last + 1);

  double mass = 0.0;
  for (std::size_t k = s_lo; k < s_hi; ++k) {
    const double a = g[k], b = g[k + 1];
    // Simpson on each cell of the piecewise-linear u
    const double m = 0.5 * (a + b);
    mass += (b - a) / 6.0 * (G.value(u[k]) + 4.0 * G.value(evaluate(u, m)) + G.value(u[k + 1]));
  }
  LogFarField far;
  far.b = mass;
  far.c = 0.5 * (w[n - 1] + mass * std::log(std::abs(g.hi())) + w[0] + mass * std::log(std::abs(g.lo())));

  int failed = 0, total = 0;
  ResidualNorms ru{std::vector<double>(mode == ResidualMode::entire ? 3 : 2, 0.0), 0.0};
  for (std::size_t i = s_lo + 2; i + 2 <= s_hi; ++i) {
    ++total;
    double lap;
    try {
      lap = half_laplacian_pointwise(u, g[i], q);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ill_conditioned_point) throw;
      ++failed;
      continue;
    }
    const double m = lumped(g, i);
    const double rhs = theta * w[i] * G.derivative(u[i]);
    double res = lap - rhs;
    ru.terms[0] += m * lap * lap;
    ru.terms[1] += m * rhs * rhs;
    if (mode == ResidualMode::entire) {
      res += u[i];
      ru.terms[2] += m * u[i] * u[i];
    }
    ru.total += m * res * res;
    ++rep.nodes_u;
  }
  ResidualNorms rw{std::vector<double>(2, 0.0), 0.0};
  for (std::size_t i = 2; i + 2 < n; ++i) {
    ++total;
    double lap;
    try {
      lap = half_laplacian_pointwise(w, g[i], q, far);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ill_conditioned_point) throw;
      ++failed;
      continue;
    }
    const double m = lumped(g, i);
    const double rhs = pi * G.value(u[i]);
    rw.terms[0] += m * lap * lap;
    rw.terms[1] += m * rhs * rhs;
    rw.total += m * (lap - rhs) * (lap - rhs);
    ++rep.nodes_w;
  }
  for (double& t : ru.terms) t = std::sqrt(t);
  for (double& t : rw.terms) t = std::sqrt(t);
  rep.residual_u = relative(ru);
  rep.residual_w = relative(rw);
  rep.failed_nodes = failed;
  rep.failure_ratio = total > 0 ? static_cast<double>(failed) / total : 0.0;
  return rep;
}

DecayFit decay_fit(const SampledFunction& u, Interval window) {
  if (!(window.lo > 0.0 && window.hi > window.lo))
    fail(ErrorKind::invalid_argument, "decay window must satisfy 0 < lo < hi");
  const Grid1D& g = u.grid();
  std::vector<double> lx, ly;
  DecayFit fit;
  fit.used = {std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double ax = std::abs(g[i]);
    if (ax < window.lo || ax > window.hi) continue;
    if (!(u[i] > 0.0)) {
      fit.shrunk = true;
      continue;
    }
    lx.push_back(std::log(ax));
    ly.push_back(std::log(u[i]));
    fit.used.lo = std::min(fit.used.lo, ax);
    fit.used.hi = std::max(fit.used.hi, ax);
  }
  if (lx.size() < 2) fail(ErrorKind::degenerate_fit, "fewer than two positive samples in the decay window");
  fit.exponent = -line_fit(lx, ly).first;
  if (!(fit.exponent > 0.0)) {
    std::ostringstream os;
    os << "nonpositive decay exponent " << fit.exponent << " on the window";
    fail(ErrorKind::degenerate_fit, os.str());
  }
  // Split at the geometric middle of the window to probe log-log curvature.
  const double mid = 0.5 * (std::log(fit.used.lo) + std::log(fit.used.hi));
  std::vector<double> ix, iy, ox, oy;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    (lx[k] <= mid ? ix : ox).push_back(lx[k]);
    (lx[k] <= mid ? iy : oy).push_back(ly[k]);
  }
  if (ix.size() >= 2 && ox.size() >= 2) {
    fit.inner_exponent = -line_fit(ix, iy).first;
    fit.outer_exponent = -line_fit(ox, oy).first;
    fit.super_polynomial = fit.outer_exponent > 1.1 * fit.inner_exponent;
  } else {
    fit.inner_exponent = fit.outer_exponent = fit.exponent;
  }
  return fit;
}

double log_slope_fit(const SampledFunction& w, Interval window) {
  const Grid1D& g = w.grid();
  std::vector<double> lx, y;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double ax = std::abs(g[i]);
    if (ax < window.lo || ax > window.hi) continue;
    lx.push_back(std::log(ax));
    y.push_back(w[i]);
  }
  return -line_fit(lx, y).first;
}

ELReport el_check(const MaximizerState& state, const GrowthModel& G, const QuadratureSpec& q, double outer) {
  const SampledFunction u0 = state.function();
  const Grid1D ext = extend_grid(u0.grid(), outer);
  const SampledFunction u = resample(u0, ext);
  const SampledFunction w = w_potential(u0, G, ext);
  const ThetaEstimate t = theta_estimate(state, stiffness_matrix(u0.grid()), G);
  if (t.theta == 0.0) fail(ErrorKind::undefined_multiplier, "multiplier vanishes");
  ELReport rep = system_residual(u, w, 1.0 / t.theta, G, q,
                                 state.entire_space ? ResidualMode::entire : ResidualMode::interval);
  rep.w_log_slope = log_slope_fit(w, {5.0, 20.0});
  if (state.entire_space) {
    try {
      rep.u_decay_exponent = decay_fit(u, {0.5 * u0.grid().hi(), u0.grid().hi()}).exponent;
    } catch (const Error&) {
      rep.u_decay_exponent.reset();
    }
  }
  return rep;
}

}  // namespace tmlog
