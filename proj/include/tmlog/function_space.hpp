#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace tmlog {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Strictly increasing 1D node set. `symmetric` means the nodes are closed
/// under negation (detected on construction, exact comparison).
class Grid1D {
 public:
  Grid1D() = default;
  explicit Grid1D(std::vector<double> nodes);

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t cells() const { return nodes_.size() - 1; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  Interval hull() const { return {lo(), hi()}; }
  double cell_width(std::size_t k) const { return nodes_[k + 1] - nodes_[k]; }
  bool symmetric() const { return symmetric_; }

  /// Index k of the cell [x_k, x_{k+1}] containing x (clamped to the hull).
  std::size_t locate(double x) const;
  /// Node index equal to x within `tol`, if any.
  std::optional<std::size_t> find_node(double x, double tol = 0.0) const;

 private:
  std::vector<double> nodes_;
  bool symmetric_ = false;
};

/// Piecewise-linear function on a grid, zero outside the hull.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(Grid1D grid, std::vector<double> values,
                  std::optional<Interval> support_hint = std::nullopt);

  const Grid1D& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  const std::optional<Interval>& support_hint() const { return support_; }

  /// Hull of the grid, or the support hint when it is tighter.
  Interval support() const;
  /// True when both hull values vanish, i.e. the zero extension is continuous.
  bool vanishes_at_hull() const { return values_.front() == 0.0 && values_.back() == 0.0; }
  double max_value() const;
  double min_value() const;

 private:
  Grid1D grid_;
  std::vector<double> values_;
  std::optional<Interval> support_;
};

Grid1D make_interval_grid(std::size_t n_nodes, double half_width, bool refine_near_zero);
/// Symmetric grid built from positive abscissae (0 is added).
Grid1D make_symmetric_grid(std::vector<double> positive_nodes);
/// Every cell split into `factor` equal sub-cells.
Grid1D refine_grid(const Grid1D& grid, int factor);
/// Sorted union of two node sets; nodes closer than `tol` (relative) are merged.
Grid1D merge_grids(const Grid1D& a, const Grid1D& b, double tol = 1e-14);
/// Grid extended beyond its hull by geometrically growing cells up to `outer`.
Grid1D extend_grid(const Grid1D& grid, double outer, double growth = 1.08);

double evaluate(const SampledFunction& u, double x);
SampledFunction sample(const Grid1D& grid, const std::vector<double>& values);
template <class F>
SampledFunction sample(const Grid1D& grid, F&& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return SampledFunction(grid, std::move(v));
}
/// Interpolate u onto another grid (zero outside the hull of u).
SampledFunction resample(const SampledFunction& u, const Grid1D& grid);

double integral(const SampledFunction& u);
double lp_norm(const SampledFunction& u, double p);

/// Schwarz symmetric-decreasing rearrangement on its own adapted symmetric
/// grid (exact for piecewise-linear input).
SampledFunction schwarz_rearrange(const SampledFunction& u);
/// Rearrangement resampled onto a prescribed symmetric grid.
SampledFunction schwarz_rearrange_onto(const SampledFunction& u, const Grid1D& grid);

/// max_i |u(x_i) - u(-x_i)| over a symmetric grid.
double evenness_defect(const SampledFunction& u);
/// True when values are nonincreasing in |x| on a symmetric grid (slack `tol`).
bool radially_nonincreasing(const SampledFunction& u, double tol = 0.0);

}  // namespace tmlog
