#include "tmlog/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmlog/error.hpp"
#include "tmlog/quadrature.hpp"

namespace tmlog {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::unsupported_input: return "unsupported-input";
    case ErrorKind::ill_conditioned_point: return "ill-conditioned-point";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::stall: return "stall";
    case ErrorKind::undefined_multiplier: return "undefined-multiplier";
    case ErrorKind::range: return "range";
    case ErrorKind::degenerate_fit: return "degenerate-fit";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Grid1D::Grid1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 3) fail(ErrorKind::invalid_argument, "grid needs at least 3 nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i])) fail(ErrorKind::invalid_argument, "grid node is not finite");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      fail(ErrorKind::invalid_argument, "grid nodes must be strictly increasing");
  }
  const std::size_t n = nodes_.size();
  symmetric_ = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes_[i] != -nodes_[n - 1 - i]) {
      symmetric_ = false;
      break;
    }
  }
}

std::size_t Grid1D::locate(double x) const {
  if (x <= nodes_.front()) return 0;
  if (x >= nodes_.back()) return nodes_.size() - 2;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

std::optional<std::size_t> Grid1D::find_node(double x, double tol) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x - tol);
  if (it != nodes_.end() && std::abs(*it - x) <= tol)
    return static_cast<std::size_t>(it - nodes_.begin());
  return std::nullopt;
}

SampledFunction::SampledFunction(Grid1D grid, std::vector<double> values,
                                 std::optional<Interval> support_hint)
    : grid_(std::move(grid)), values_(std::move(values)), support_(support_hint) {
  if (values_.size() != grid_.size())
    fail(ErrorKind::invalid_argument, "value count does not match grid size");
  for (double v : values_)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "sampled value is not finite");
  if (support_) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!support_->contains(grid_[i]) && values_[i] != 0.0)
        fail(ErrorKind::invalid_argument, "nonzero value outside support hint");
    }
  }
}

Interval SampledFunction::support() const {
  Interval h = grid_.hull();
  if (support_) return {std::max(h.lo, support_->lo), std::min(h.hi, support_->hi)};
  return h;
}

double SampledFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double SampledFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

Grid1D make_interval_grid(std::size_t n_nodes, double half_width, bool refine_near_zero) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    fail(ErrorKind::invalid_argument, "half_width must be positive");
  if (n_nodes < 3 || n_nodes % 2 == 0)
    fail(ErrorKind::invalid_argument, "symmetric grid needs an odd node count >= 3");
  const std::size_t m = (n_nodes - 1) / 2;
  std::vector<double> pos(m);
  // Graded half-grid x_k = W (e^{bk/m} - 1)/(e^b - 1); cell ratio about e^b.
  const double beta = std::log(25.0);
  for (std::size_t k = 1; k <= m; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(m);
    pos[k - 1] = refine_near_zero ? half_width * std::expm1(beta * t) / std::expm1(beta)
                                  : half_width * t;
  }
  pos.back() = half_width;
  return make_symmetric_grid(std::move(pos));
}

Grid1D make_symmetric_grid(std::vector<double> positive_nodes) {
  std::sort(positive_nodes.begin(), positive_nodes.end());
  positive_nodes.erase(std::unique(positive_nodes.begin(), positive_nodes.end()), positive_nodes.end());
  if (positive_nodes.empty() || !(positive_nodes.front() > 0.0))
    fail(ErrorKind::invalid_argument, "symmetric grid needs positive abscissae");
  std::vector<double> nodes;
  nodes.reserve(2 * positive_nodes.size() + 1);
  for (auto it = positive_nodes.rbegin(); it != positive_nodes.rend(); ++it) nodes.push_back(-*it);
  nodes.push_back(0.0);
  nodes.insert(nodes.end(), positive_nodes.begin(), positive_nodes.end());
  return Grid1D(std::move(nodes));
}

Grid1D refine_grid(const Grid1D& grid, int factor) {
  if (factor < 1) fail(ErrorKind::invalid_argument, "refinement factor must be >= 1");
  std::vector<double> nodes;
  nodes.reserve(grid.cells() * factor + 1);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    const double a = grid[k], h = grid.cell_width(k);
    nodes.push_back(a);
    for (int j = 1; j < factor; ++j) nodes.push_back(a + h * j / factor);
  }
  nodes.push_back(grid.hi());
  // Keep exact mirror symmetry when the coarse grid has it.
  if (grid.symmetric()) {
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n / 2; ++i) nodes[i] = -nodes[n - 1 - i];
    if (n % 2 == 1) nodes[n / 2] = 0.0;
  }
  return Grid1D(std::move(nodes));
}

Grid1D merge_grids(const Grid1D& a, const Grid1D& b, double tol) {
  std::vector<double> all = a.nodes();
  all.insert(all.end(), b.nodes().begin(), b.nodes().end());
  std::sort(all.begin(), all.end());
  const double scale = std::max({std::abs(all.front()), std::abs(all.back()), 1e-300});
  std::vector<double> out;
  for (double x : all)
    if (out.empty() || x - out.back() > tol * scale) out.push_back(x);
  return Grid1D(std::move(out));
}

Grid1D extend_grid(const Grid1D& grid, double outer, double growth) {
  if (!(growth >= 1.0)) fail(ErrorKind::invalid_argument, "growth factor must be >= 1");
  std::vector<double> right, left;
  double h = grid.cell_width(grid.cells() - 1), x = grid.hi();
  while (x < outer) {
    h *= growth;
    if (x + 1.5 * h >= outer) {
      right.push_back(outer);
      break;
    }
    x += h;
    right.push_back(x);
  }
  h = grid.cell_width(0);
  x = grid.lo();
  while (x > -outer) {
    h *= growth;
    if (x - 1.5 * h <= -outer) {
      left.push_back(-outer);
      break;
    }
    x -= h;
    left.push_back(x);
  }
  std::vector<double> nodes(left.rbegin(), left.rend());
  nodes.insert(nodes.end(), grid.nodes().begin(), grid.nodes().end());
  nodes.insert(nodes.end(), right.begin(), right.end());
  if (grid.symmetric() && left.size() == right.size()) {
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n / 2; ++i) nodes[i] = -nodes[n - 1 - i];
  }
  return Grid1D(std::move(nodes));
}

double evaluate(const SampledFunction& u, double x) {
  const Grid1D& g = u.grid();
  if (!(x >= g.lo() && x <= g.hi())) return 0.0;
  const std::size_t k = g.locate(x);
  const double a = g[k], b = g[k + 1];
  if (x == b) return u[k + 1];
  const double t = (x - a) / (b - a);
  return u[k] + t * (u[k + 1] - u[k]);
}

SampledFunction sample(const Grid1D& grid, const std::vector<double>& values) {
  return SampledFunction(grid, values);
}

SampledFunction resample(const SampledFunction& u, const Grid1D& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = evaluate(u, grid[i]);
  return SampledFunction(grid, std::move(v));
}

double integral(const SampledFunction& u) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.grid().cells(); ++k)
    s += 0.5 * u.grid().cell_width(k) * (u[k] + u[k + 1]);
  return s;
}

namespace {

// Integral of |a + (b - a) s|^p over s in [0, 1] for a, b of one sign.
double power_segment(double a, double b, double p) {
  a = std::abs(a);
  b = std::abs(b);
  const double hi = std::max(a, b), lo = std::min(a, b);
  if (hi == 0.0) return 0.0;
  if (hi - lo > 1e-3 * hi)
    return (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo));
  const GaussRule& r = gauss_legendre(10);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double t = 0.5 * (r.x[i] + 1.0);
    s += 0.5 * r.w[i] * std::pow(a + (b - a) * t, p);
  }
  return s;
}

}  // namespace

double lp_norm(const SampledFunction& u, double p) {
  if (!(p >= 1.0)) fail(ErrorKind::invalid_argument, "lp_norm requires p >= 1");
  double s = 0.0;
  for (std::size_t k = 0; k < u.grid().cells(); ++k) {
    const double h = u.grid().cell_width(k), a = u[k], b = u[k + 1];
    if (a * b < 0.0) {
      const double t0 = a / (a - b);
      s += h * t0 * power_segment(a, 0.0, p) + h * (1.0 - t0) * power_segment(0.0, b, p);
    } else {
      s += h * power_segment(a, b, p);
    }
  }
  return std::pow(s, 1.0 / p);
}

namespace {

// |{u > t}| (strict) for a piecewise-linear u on its hull.
double measure_above(const SampledFunction& u, double t) {
  double m = 0.0;
  const Grid1D& g = u.grid();
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double a = u[k], b = u[k + 1], h = g.cell_width(k);
    if (a == b) {
      if (a > t) m += h;
      continue;
    }
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (t >= hi) continue;
    if (t <= lo) {
      m += h;
      continue;
    }
    m += h * (hi - t) / (hi - lo);
  }
  return m;
}

// |{u >= t}|; differs from the strict measure only through flat cells at t.
double measure_at_least(const SampledFunction& u, double t) {
  double m = measure_above(u, t);
  const Grid1D& g = u.grid();
  for (std::size_t k = 0; k < g.cells(); ++k)
    if (u[k] == t && u[k + 1] == t) m += g.cell_width(k);
  return m;
}

}  // namespace

SampledFunction schwarz_rearrange(const SampledFunction& u) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] < 0.0) {
      std::ostringstream os;
      os << "rearrangement needs nonnegative input; node " << i << " has value " << u[i];
      fail(ErrorKind::invalid_argument, os.str());
    }
  std::vector<double> levels = u.values();
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Layer cake: between consecutive node values the distribution function is
  // linear in t, so u* is linear in r between the breakpoints below.
  struct Point { double r, value; };
  std::vector<Point> pts;
  pts.reserve(2 * levels.size());
  for (double t : levels) {
    pts.push_back({0.5 * measure_above(u, t), t});
    pts.push_back({0.5 * measure_at_least(u, t), t});
  }
  const double half_hull = 0.5 * u.grid().hull().length();
  const double tol = 1e-13 * half_hull;
  std::vector<Point> kept;
  for (const Point& p : pts) {
    const double r = std::min(p.r, half_hull);
    if (kept.empty()) {
      kept.push_back({0.0, p.value});
      continue;
    }
    if (r - kept.back().r > tol) kept.push_back({r, p.value});
  }
  if (half_hull - kept.back().r > tol) kept.push_back({half_hull, 0.0});

  std::vector<double> pos;
  std::vector<double> pos_values;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    pos.push_back(kept[i].r);
    pos_values.push_back(kept[i].value);
  }
  if (pos.empty()) {
    pos.push_back(half_hull);
    pos_values.push_back(kept.front().value);
  }
  Grid1D grid = make_symmetric_grid(pos);
  std::vector<double> values(grid.size());
  const std::size_t m = pos.size();
  for (std::size_t i = 0; i < m; ++i) {
    values[m + 1 + i] = pos_values[i];
    values[m - 1 - i] = pos_values[i];
  }
  values[m] = kept.front().value;
  return SampledFunction(std::move(grid), std::move(values));
}

SampledFunction schwarz_rearrange_onto(const SampledFunction& u, const Grid1D& grid) {
  if (!grid.symmetric()) fail(ErrorKind::invalid_argument, "target grid must be symmetric");
  SampledFunction star = schwarz_rearrange(u);
  std::vector<double> v(grid.size());
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) v[i] = evaluate(star, std::abs(grid[i]));
  return SampledFunction(grid, std::move(v));
}

double evenness_defect(const SampledFunction& u) {
  if (!u.grid().symmetric()) fail(ErrorKind::invalid_argument, "evenness needs a symmetric grid");
  double d = 0.0;
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(u[i] - u[n - 1 - i]));
  return d;
}

bool radially_nonincreasing(const SampledFunction& u, double tol) {
  if (!u.grid().symmetric()) fail(ErrorKind::invalid_argument, "radial check needs a symmetric grid");
  const std::size_t n = u.size(), mid = n / 2;
  for (std::size_t i = mid; i + 1 < n; ++i)
    if (u[i + 1] > u[i] + tol) return false;
  for (std::size_t i = mid; i > 0; --i)
    if (u[i - 1] > u[i] + tol) return false;
  return true;
}

}  // namespace tmlog
