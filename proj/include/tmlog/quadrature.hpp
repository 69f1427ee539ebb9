#pragma once

#include <functional>
#include <vector>

namespace tmlog {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Cached rule of order n (1 <= n <= 64).
const GaussRule& gauss_legendre(int n);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval.
QuadResult integrate(const Integrand& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-10, int max_intervals = 4000);

/// Integral over [a, inf) via t = a + s/(1-s).
QuadResult integrate_to_infinity(const Integrand& f, double a, double abs_tol = 1e-12,
                                 double rel_tol = 1e-10, int max_intervals = 4000);

/// Fixed-order Gauss sum of f over [a, b].
template <class F>
double gauss_sum(const GaussRule& r, double a, double b, F&& f) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
  return h * s;
}

}  // namespace tmlog
