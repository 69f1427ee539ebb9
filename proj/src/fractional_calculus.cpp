#include "tmlog/fractional_calculus.hpp"

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

// Linear piece of a sampled function: u(x) = u1 + s (x - x1) on [x1, x2].
struct Piece {
  double x1, x2, u1, u2;
  double slope() const { return (u2 - u1) / (x2 - x1); }
  double width() const { return x2 - x1; }
  double at(double x) const { return u1 + (u2 - u1) * (x - x1) / (x2 - x1); }
  Piece left() const { const double m = 0.5 * (x1 + x2); return {x1, m, u1, at(m)}; }
  Piece right() const { const double m = 0.5 * (x1 + x2); return {m, x2, at(m), u2}; }
};

Piece piece(const SampledFunction& u, std::size_t k) {
  const Grid1D& g = u.grid();
  return {g[k], g[k + 1], u[k], u[k + 1]};
}

// ∬_{A×B} (u(x) - u(y))²/(x - y)² for disjoint A < B, by tensor Gauss after
// bisecting the larger cell while the pair is close relative to its size.
double separated_pair(const Piece& a, const Piece& b, int depth) {
  const double gap = b.x1 - a.x2;
  if (depth > 0 && gap < std::max(a.width(), b.width())) {
    if (a.width() >= b.width())
      return separated_pair(a.left(), b, depth - 1) + separated_pair(a.right(), b, depth - 1);
    return separated_pair(a, b.left(), depth - 1) + separated_pair(a, b.right(), depth - 1);
  }
  const GaussRule& r = gauss_legendre(10);
  return gauss_sum(r, a.x1, a.x2, [&](double x) {
    const double ux = a.at(x);
    return gauss_sum(r, b.x1, b.x2, [&](double y) {
      const double d = (ux - b.at(y)) / (x - y);
      return d * d;
    });
  });
}

double duffy_branch(double alpha, double beta, double R) {
  const double d = alpha - beta;
  return beta * beta * R + 2.0 * beta * d * std::log1p(R) + d * d * (R / (1.0 + R));
}

// Adjacent cells sharing a node: closed form of the Duffy-split integral.
double adjacent_pair(const Piece& a, const Piece& b) {
  const double ha = a.width(), hb = b.width(), r = hb / ha;
  const double sa = a.slope(), sb = b.slope();
  return 0.5 * ha * ha * duffy_branch(sa, sb, r) + 0.5 * hb * hb * duffy_branch(sb, sa, 1.0 / r);
}

double seminorm_sq(const SampledFunction& u, const QuadratureSpec& q) {
  q.validate();
  if (!u.vanishes_at_hull())
    fail(ErrorKind::unsupported_input,
         "seminorm requires a function vanishing at the grid hull (zero extension must be continuous)");
  const Grid1D& g = u.grid();
  const double half = std::max(std::abs(g.lo()), std::abs(g.hi()));
  if (q.tail_cutoff > 0.0 && q.tail_cutoff < half)
    fail(ErrorKind::invalid_argument, "tail_cutoff is inside the grid hull");
  const std::size_t nc = g.cells();
  std::vector<Piece> cells(nc);
  for (std::size_t k = 0; k < nc; ++k) cells[k] = piece(u, k);

  double diag = 0.0, off = 0.0;
  for (std::size_t a = 0; a < nc; ++a) {
    const Piece& A = cells[a];
    const double s = A.slope();
    diag += s * s * A.width() * A.width();
    if (a + 1 < nc) off += adjacent_pair(A, cells[a + 1]);
    for (std::size_t b = a + 2; b < nc; ++b) {
      const Piece& B = cells[b];
      if (A.u1 == B.u1 && A.u2 == B.u2 && A.u1 == A.u2 && B.u1 == B.u2) continue;
      off += separated_pair(A, B, q.diagonal_refinement_levels);
    }
  }

  // y outside the hull: ∫ dy/(x-y)² over the complement is 1/(R-x) + 1/(x-L).
  const double L = g.lo(), R = g.hi();
  const GaussRule& r = gauss_legendre(10);
  double tail = 0.0;
  for (const Piece& c : cells) {
    if (c.u1 == 0.0 && c.u2 == 0.0) continue;
    tail += gauss_sum(r, c.x1, c.x2, [&](double x) {
      const double v = c.at(x);
      return v * v * (1.0 / (R - x) + 1.0 / (x - L));
    });
  }
  return diag + 2.0 * off + 2.0 * tail;
}

// ∫_ε^∞ (2f(x) - f(x+t) - f(x-t))/t² dt.
double excised_integral(const ClosedFormFunction& f, double x, double eps, const QuadratureSpec& q) {
  const double fx = f.f(x);
  auto near = [&](double t) { return (2.0 * fx - f.f(x + t) - f.f(x - t)) / (t * t); };
  // t = 1/s maps [1, ∞) onto (0, 1]; dt/t² = ds.
  auto far = [&](double s) {
    if (s == 0.0) return 0.0;
    return 2.0 * fx - f.f(x + 1.0 / s) - f.f(x - 1.0 / s);
  };
  double v = 0.0;
  if (eps < 1.0) {
    const QuadResult a = integrate(near, eps, 1.0, q.abs_tol, q.rel_tol);
    v += a.value;
    const QuadResult b = integrate(far, 0.0, 1.0, q.abs_tol, q.rel_tol);
    v += b.value;
  } else {
    v += integrate(far, 0.0, 1.0 / eps, q.abs_tol, q.rel_tol).value;
  }
  return v;
}

// ∫_R^∞ (c - b log y - c) / (y - x)² dy + the constant part, for x < R, R > 0.
double log_tail(double fx, double x, double R, const LogFarField& far) {
  double v = (fx - far.c) / (R - x);
  const double lr = std::log(R);
  const double logpart =
      x == 0.0 ? (lr + 1.0) / R : lr / (R - x) - std::log1p(-x / R) / x;
  return v + far.b * logpart;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    fail(ErrorKind::invalid_argument, "quadrature tolerances must be positive");
  if (diagonal_refinement_levels < 0)
    fail(ErrorKind::invalid_argument, "diagonal_refinement_levels must be >= 0");
  if (!(pv_initial_excision > 0.0))
    fail(ErrorKind::invalid_argument, "pv_initial_excision must be positive");
  if (tail_cutoff < 0.0) fail(ErrorKind::invalid_argument, "tail_cutoff must be >= 0");
}

double normalization_constant(double s, int N) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::invalid_argument, "s must lie in (0, 1)");
  if (N < 1) fail(ErrorKind::invalid_argument, "dimension must be positive");
  const double half_n = 0.5 * N;
  return std::pow(4.0, s) * s * std::tgamma(half_n + s) /
         (std::pow(pi, half_n) * std::tgamma(1.0 - s));
}

double normalization_constant_numeric(double s) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::invalid_argument, "s must lie in (0, 1)");
  const double a = 1.0 + 2.0 * s;
  // 1 - cos ζ = 2 sin²(ζ/2) avoids cancellation near 0.
  auto f = [a](double z) {
    if (z == 0.0) return 0.0;
    const double sn = std::sin(0.5 * z);
    return 2.0 * sn * sn / std::pow(z, a);
  };
  constexpr int kPeriods = 200;
  double sum = 0.0;
  for (int k = 0; k < 2 * kPeriods; ++k)
    sum += integrate(f, k * pi, (k + 1) * pi, 1e-15, 1e-13).value;
  // Tail beyond X = 2π·kPeriods: ∫ζ^{-a} minus the asymptotic cosine series
  // (sin X = 0, cos X = 1).
  const double X = 2.0 * pi * kPeriods;
  const double power_tail = std::pow(X, 1.0 - a) / (a - 1.0);
  const double cos_tail = a * std::pow(X, -a - 1.0) - a * (a + 1.0) * (a + 2.0) * std::pow(X, -a - 3.0);
  sum += power_tail - cos_tail;
  return 1.0 / (2.0 * sum);
}

double gagliardo_seminorm_sq(const SampledFunction& u, const QuadratureSpec& q) {
  return seminorm_sq(u, q);
}

double gagliardo_bilinear(const SampledFunction& u, const SampledFunction& v, const QuadratureSpec& q) {
  if (u.grid().nodes() != v.grid().nodes())
    fail(ErrorKind::invalid_argument, "bilinear form needs both functions on the same grid");
  std::vector<double> p(u.size()), m(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    p[i] = u[i] + v[i];
    m[i] = u[i] - v[i];
  }
  return 0.25 * (seminorm_sq(SampledFunction(u.grid(), p), q) - seminorm_sq(SampledFunction(u.grid(), m), q));
}

double quarter_laplacian_norm_sq(const SampledFunction& u, const QuadratureSpec& q) {
  return seminorm_sq(u, q) / (2.0 * pi);
}

StiffnessForm stiffness_matrix(const Grid1D& grid) {
  // [u]² = 2 ∬ u'(x) u'(y) log(1/|x-y|) for compactly supported u; u' is the
  // cell slope vector D c.
  const std::size_t n = grid.size(), nc = grid.cells();
  const Eigen::MatrixXd L = assemble_cell_log_matrix(grid);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nc, n);
  for (std::size_t k = 0; k < nc; ++k) {
    const double h = grid.cell_width(k);
    D(k, k) = -1.0 / h;
    D(k, k + 1) = 1.0 / h;
  }
  Eigen::MatrixXd Q = 2.0 * D.transpose() * L * D;
  Q = 0.5 * (Q + Q.transpose()).eval();
  return {grid, std::move(Q)};
}

Eigen::MatrixXd mass_matrix(const Grid1D& grid) {
  const std::size_t n = grid.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    const double h = grid.cell_width(k);
    M(k, k) += h / 3.0;
    M(k + 1, k + 1) += h / 3.0;
    M(k, k + 1) += h / 6.0;
    M(k + 1, k) += h / 6.0;
  }
  return M;
}

ClosedFormFunction cauchy_profile() {
  return {"cauchy", [](double x) { return 1.0 / (1.0 + x * x); },
          [](double x) {
            const double d = 1.0 + x * x;
            return (6.0 * x * x - 2.0) / (d * d * d);
          }};
}

ClosedFormFunction cauchy_complement_shifted() {
  return {"cauchy_complement_shifted", [](double x) { return x * x / (1.0 + x * x) + 1.0; },
          [](double x) {
            const double d = 1.0 + x * x;
            return (2.0 - 6.0 * x * x) / (d * d * d);
          }};
}

ClosedFormFunction constant_function(double c) {
  return {"constant", [c](double) { return c; }, [](double) { return 0.0; }};
}

ClosedFormFunction combine(double a, const ClosedFormFunction& f, double b, const ClosedFormFunction& g) {
  std::ostringstream name;
  name << a << "*" << f.name << "+" << b << "*" << g.name;
  return {name.str(), [=](double x) { return a * f.f(x) + b * g.f(x); },
          [=](double x) { return a * f.f2(x) + b * g.f2(x); }};
}

double half_laplacian_pointwise(const ClosedFormFunction& f, double x, const QuadratureSpec& q) {
  q.validate();
  // I(ε) - f''(x) ε = exact + a₃ε³ + a₅ε⁵ + ...; eliminate three odd powers.
  constexpr int kLevels = 4;
  double t[kLevels];
  const double f2 = f.f2(x);
  for (int k = 0; k < kLevels; ++k) {
    const double eps = q.pv_initial_excision * std::ldexp(1.0, -k);
    t[k] = excised_integral(f, x, eps, q) - f2 * eps;
  }
  for (int j = 1, p = 3; j < kLevels; ++j, p += 2) {
    const double fac = std::ldexp(1.0, p);
    for (int k = kLevels - 1; k >= j; --k) t[k] = (fac * t[k] - t[k - 1]) / (fac - 1.0);
  }
  return t[kLevels - 1] / pi;
}

double half_laplacian_pointwise(const SampledFunction& f, double x, const QuadratureSpec& q,
                                const std::optional<LogFarField>& far) {
  q.validate();
  const Grid1D& g = f.grid();
  const double scale = std::max(std::abs(g.lo()), std::abs(g.hi()));
  const auto node = g.find_node(x, 1e-13 * scale);
  if (!node) {
    std::ostringstream os;
    os << "x = " << x << " is not a grid node; sampled half-Laplacian is undefined off nodes";
    fail(ErrorKind::ill_conditioned_point, os.str());
  }
  const std::size_t i = *node;
  if (i < 2 || i + 2 >= g.size()) {
    std::ostringstream os;
    os << "x = " << x << " lies within two cells of the hull";
    fail(ErrorKind::ill_conditioned_point, os.str());
  }
  const double xi = g[i], fx = f[i];
  // Near part: principal value against the quadratic through the three nodes.
  const double hl = xi - g[i - 1], hr = g[i + 1] - xi;
  const double sl = (fx - f[i - 1]) / hl, sr = (f[i + 1] - fx) / hr;
  const double q2 = 2.0 * (sr - sl) / (hl + hr);
  const double q1 = (sl * hr + sr * hl) / (hl + hr);
  double v = q1 * std::log(hl / hr) - 0.5 * q2 * (hl + hr);
  // Far cells, exact for each linear piece.
  for (std::size_t k = 0; k < g.cells(); ++k) {
    if (k + 1 == i || k == i) continue;
    const double y1 = g[k], y2 = g[k + 1];
    const double beta = (f[k + 1] - f[k]) / (y2 - y1);
    const double Lx = f[k] + beta * (xi - y1);
    v += (fx - Lx) * (1.0 / (xi - y2) - 1.0 / (xi - y1)) + beta * std::log(std::abs((xi - y1) / (xi - y2)));
  }
  const double L = g.lo(), R = g.hi();
  if (far) {
    if (!(R > 0.0 && L < 0.0))
      fail(ErrorKind::invalid_argument, "logarithmic far field needs a hull straddling 0");
    v += log_tail(fx, xi, R, *far) + log_tail(fx, -xi, -L, *far);
  } else {
    v += fx / (R - xi) + fx / (xi - L);
  }
  return v / pi;
}

std::pair<double, double> fourier_pair_check(double xi) {
  const double rhs = pi * std::exp(-2.0 * pi * std::abs(xi));
  auto f = [](double x) { return 1.0 / (1.0 + x * x); };
  if (xi == 0.0) {
    const double half = integrate_to_infinity(f, 0.0, 1e-14, 1e-13).value;
    return {2.0 * half, rhs};
  }
  // The integrand is even in x and the sine part cancels.
  const double w = 2.0 * pi * std::abs(xi);
  const double period = 2.0 * pi / w;
  const int periods = static_cast<int>(std::ceil(100.0 / period));
  double sum = 0.0;
  for (int k = 0; k < periods; ++k)
    sum += integrate([&](double x) { return std::cos(w * x) * f(x); }, k * period, (k + 1) * period,
                     1e-15, 1e-13)
               .value;
  // Tail past X (cos wX = 1, sin wX = 0): -f'(X)/w² + f'''(X)/w⁴ - ...
  const double X = periods * period, d = 1.0 + X * X;
  const double f1 = -2.0 * X / (d * d);
  const double f3 = 24.0 * X * (1.0 - X * X) / (d * d * d * d);
  sum += -f1 / (w * w) + f3 / (w * w * w * w);
  return {2.0 * sum, rhs};
}

double tm_integral(const SampledFunction& u, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorKind::invalid_argument, "alpha must be positive");
  const Grid1D& g = u.grid();
  const GaussRule& r = gauss_legendre(10);
  double sum = 0.0;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double a = g[k], b = g[k + 1];
    const double peak = std::max(u[k] * u[k], u[k + 1] * u[k + 1]);
    if (alpha * peak > 709.0) {
      std::ostringstream os;
      os << "exp(alpha u^2) overflows in cell [" << a << ", " << b << "] (alpha u^2 = " << alpha * peak << ")";
      fail(ErrorKind::overflow, os.str());
    }
    sum += gauss_sum(r, a, b, [&](double x) {
      const double v = u[k] + (u[k + 1] - u[k]) * (x - a) / (b - a);
      return std::expm1(alpha * v * v);
    });
  }
  return sum;
}

}  // namespace tmlog
