#include "tmlog/log_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "tmlog/error.hpp"
#include "tmlog/quadrature.hpp"

namespace tmlog {

namespace {

constexpr double kFactorial[] = {1.0, 1.0, 2.0, 6.0, 24.0, 120.0};
// Harmonic numbers H_0..H_4.
constexpr double kHarmonic[] = {0.0, 1.0, 1.5, 11.0 / 6.0, 25.0 / 12.0};
constexpr int kGaussOrder = 8;

double full_antiderivative(int m, double t) {
  if (m == 0) return -std::log(std::abs(t));
  if (t == 0.0) return 0.0;
  return -std::pow(t, m) / kFactorial[m] * (std::log(std::abs(t)) - kHarmonic[m]);
}

// Taylor continuation of the clipped kernel's antiderivative beyond |t| = 1,
// where the kernel itself is identically zero.
double plus_antiderivative(int m, double t) {
  if (std::abs(t) <= 1.0) return full_antiderivative(m, t);
  if (m == 0) return 0.0;
  const double edge = t > 0.0 ? 1.0 : -1.0;
  const double d = t - edge;
  double s = 0.0, dj = 1.0;
  for (int j = 0; j < m; ++j) {
    const int k = m - j;
    const double at_edge = (edge > 0.0 ? 1.0 : ((k % 2 == 0) ? 1.0 : -1.0)) * kHarmonic[k] / kFactorial[k];
    s += at_edge * dj / kFactorial[j];
    dj *= d;
  }
  return s;
}

// Inner integral ∫_{b1}^{b2} q(y) k(x - y) dy for q linear with q(b1) = q_lo,
// q(b2) = q_hi.
double inner_exact(KernelBranch br, double x, double b1, double b2, double q_lo, double q_hi) {
  const double q1 = (q_hi - q_lo) / (b2 - b1);
  return -q_hi * kernel_antiderivative(br, 1, x - b2) + q_lo * kernel_antiderivative(br, 1, x - b1) -
         q1 * kernel_antiderivative(br, 2, x - b2) + q1 * kernel_antiderivative(br, 2, x - b1);
}

// Element by tensor Gauss for a kernel smooth on the box.
template <class K>
std::array<double, 4> element_gauss(double a1, double a2, double b1, double b2, K&& k) {
  const GaussRule& r = gauss_legendre(kGaussOrder);
  std::array<double, 4> m{0.0, 0.0, 0.0, 0.0};
  const double ca = 0.5 * (a1 + a2), ha = 0.5 * (a2 - a1);
  const double cb = 0.5 * (b1 + b2), hb = 0.5 * (b2 - b1);
  for (int i = 0; i < kGaussOrder; ++i) {
    const double x = ca + ha * r.x[i];
    const double px[2] = {0.5 * (1.0 - r.x[i]), 0.5 * (1.0 + r.x[i])};
    double row[2] = {0.0, 0.0};
    for (int j = 0; j < kGaussOrder; ++j) {
      const double y = cb + hb * r.x[j];
      const double kw = r.w[j] * k(x - y);
      row[0] += kw * 0.5 * (1.0 - r.x[j]);
      row[1] += kw * 0.5 * (1.0 + r.x[j]);
    }
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) m[2 * p + q] += r.w[i] * px[p] * row[q];
  }
  for (double& v : m) v *= ha * hb;
  return m;
}

// Element for boxes crossed by |x - y| = 1: exact inner integral, Gauss outer
// integral split at the kinks of x -> inner(x).
std::array<double, 4> element_split(KernelBranch br, double a1, double a2, double b1, double b2) {
  std::vector<double> cuts = {a1, a2};
  for (double c : {b1 - 1.0, b2 - 1.0, b1 + 1.0, b2 + 1.0})
    if (c > a1 && c < a2) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  const GaussRule& r = gauss_legendre(kGaussOrder);
  const double ha = a2 - a1;
  std::array<double, 4> m{0.0, 0.0, 0.0, 0.0};
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s], hi = cuts[s + 1];
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (int i = 0; i < kGaussOrder; ++i) {
      const double x = c + h * r.x[i];
      const double w = h * r.w[i];
      const double px[2] = {(a2 - x) / ha, (x - a1) / ha};
      const double j0 = inner_exact(br, x, b1, b2, 1.0, 0.0);
      const double j1 = inner_exact(br, x, b1, b2, 0.0, 1.0);
      for (int p = 0; p < 2; ++p) {
        m[2 * p] += w * px[p] * j0;
        m[2 * p + 1] += w * px[p] * j1;
      }
    }
  }
  return m;
}

}  // namespace

const char* to_string(KernelBranch b) noexcept {
  switch (b) {
    case KernelBranch::full: return "full";
    case KernelBranch::plus: return "plus";
    case KernelBranch::minus: return "minus";
  }
  return "unknown";
}

double log_kernel(KernelBranch b, double t) {
  const double a = std::abs(t);
  switch (b) {
    case KernelBranch::full: return -std::log(a);
    case KernelBranch::plus: return a < 1.0 ? -std::log(a) : 0.0;
    case KernelBranch::minus: return a > 1.0 ? std::log(a) : 0.0;
  }
  return 0.0;
}

double kernel_antiderivative(KernelBranch b, int m, double t) {
  if (m < 0 || m > 4) fail(ErrorKind::invalid_argument, "antiderivative order must be in [0, 4]");
  switch (b) {
    case KernelBranch::full: return full_antiderivative(m, t);
    case KernelBranch::plus: return plus_antiderivative(m, t);
    case KernelBranch::minus: return plus_antiderivative(m, t) - full_antiderivative(m, t);
  }
  return 0.0;
}

double kernel_box(KernelBranch b, double a1, double a2, double b1, double b2) {
  auto K2 = [b](double t) { return kernel_antiderivative(b, 2, t); };
  return -K2(a2 - b2) + K2(a1 - b2) + K2(a2 - b1) - K2(a1 - b1);
}

std::array<double, 4> kernel_element(KernelBranch br, double a1, double a2, double b1, double b2) {
  const double ha = a2 - a1, hb = b2 - b1;
  auto K = [br](int m, double t) { return kernel_antiderivative(br, m, t); };
  // K_m at the four corner differences, m = 2..4
  double k[5][2][2];
  const double as[2] = {a1, a2}, bs[2] = {b1, b2};
  for (int m = 2; m <= 4; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) k[m][i][j] = K(m, as[i] - bs[j]);
  std::array<double, 4> out{};
  for (int p = 0; p < 2; ++p) {
    const double pa1 = p == 0 ? 1.0 : 0.0, pa2 = 1.0 - pa1;
    const double p1 = (p == 0 ? -1.0 : 1.0) / ha;
    // S_m(c) = p(a2) K_{m+1}(a2-c) - p(a1) K_{m+1}(a1-c) - p' (K_{m+2}(a2-c) - K_{m+2}(a1-c))
    auto S = [&](int m, int j) {
      return pa2 * k[m + 1][1][j] - pa1 * k[m + 1][0][j] - p1 * (k[m + 2][1][j] - k[m + 2][0][j]);
    };
    const double s1b1 = S(1, 0), s1b2 = S(1, 1), s2b1 = S(2, 0), s2b2 = S(2, 1);
    for (int q = 0; q < 2; ++q) {
      const double qb1 = q == 0 ? 1.0 : 0.0, qb2 = 1.0 - qb1;
      const double q1 = (q == 0 ? -1.0 : 1.0) / hb;
      out[2 * p + q] = -qb2 * s1b2 + qb1 * s1b1 - q1 * s2b2 + q1 * s2b1;
    }
  }
  return out;
}

std::array<double, 4> kernel_pair(KernelBranch br, double a1, double a2, double b1, double b2) {
  if (b2 <= a1) {
    const auto t = kernel_pair(br, b1, b2, a1, a2);
    return {t[0], t[2], t[1], t[3]};
  }
  const double gap = b1 - a2;
  if (gap <= std::max(a2 - a1, b2 - b1)) return kernel_element(br, a1, a2, b1, b2);
  const std::array<double, 4> zero{0.0, 0.0, 0.0, 0.0};
  auto log_abs = [](double t) { return std::log(std::abs(t)); };
  auto neg_log_abs = [](double t) { return -std::log(std::abs(t)); };
  if (br == KernelBranch::full) return element_gauss(a1, a2, b1, b2, neg_log_abs);
  if (gap >= 1.0) return br == KernelBranch::minus ? element_gauss(a1, a2, b1, b2, log_abs) : zero;
  if (b2 - a1 <= 1.0) return br == KernelBranch::plus ? element_gauss(a1, a2, b1, b2, neg_log_abs) : zero;
  return element_split(br, a1, a2, b1, b2);
}

KernelMatrices assemble_log_kernel(const Grid1D& grid) {
  const std::size_t n = grid.size(), nc = grid.cells();
  KernelMatrices km;
  km.plus = Eigen::MatrixXd::Zero(n, n);
  km.minus = Eigen::MatrixXd::Zero(n, n);
  auto scatter = [&](Eigen::MatrixXd& M, std::size_t a, std::size_t b, const std::array<double, 4>& e) {
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        M(a + p, b + q) += e[2 * p + q];
        if (a != b) M(b + q, a + p) += e[2 * p + q];
      }
  };
  for (std::size_t a = 0; a < nc; ++a) {
    const double a1 = grid[a], a2 = grid[a + 1];
    for (std::size_t b = a; b < nc; ++b) {
      const double b1 = grid[b], b2 = grid[b + 1];
      scatter(km.plus, a, b, kernel_pair(KernelBranch::plus, a1, a2, b1, b2));
      scatter(km.minus, a, b, kernel_pair(KernelBranch::minus, a1, a2, b1, b2));
    }
  }
  return km;
}

Eigen::MatrixXd assemble_cell_log_matrix(const Grid1D& grid) {
  const std::size_t nc = grid.cells();
  Eigen::MatrixXd L(nc, nc);
  const GaussRule& r = gauss_legendre(kGaussOrder);
  for (std::size_t a = 0; a < nc; ++a) {
    const double a1 = grid[a], a2 = grid[a + 1];
    for (std::size_t b = a; b < nc; ++b) {
      const double b1 = grid[b], b2 = grid[b + 1];
      double v;
      if (b1 - a2 <= std::max(a2 - a1, b2 - b1)) {
        v = kernel_box(KernelBranch::full, a1, a2, b1, b2);
      } else {
        v = gauss_sum(r, a1, a2, [&](double x) {
          return gauss_sum(r, b1, b2, [&](double y) { return -std::log(y - x); });
        });
      }
      L(a, b) = v;
      L(b, a) = v;
    }
  }
  return L;
}

double log_potential(const SampledFunction& v, double x, KernelBranch br) {
  const Grid1D& g = v.grid();
  const GaussRule& r = gauss_legendre(kGaussOrder);
  double s = 0.0;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double b1 = g[k], b2 = g[k + 1], h = b2 - b1;
    const double lo = v[k], hi = v[k + 1];
    if (lo == 0.0 && hi == 0.0) continue;
    const double dist = std::max({b1 - x, x - b2, 0.0});
    const bool crosses = br != KernelBranch::full && (std::abs(x - b1) - 1.0) * (std::abs(x - b2) - 1.0) <= 0.0;
    if (dist <= 2.0 * h || crosses) {
      s += inner_exact(br, x, b1, b2, lo, hi);
    } else {
      s += gauss_sum(r, b1, b2, [&](double y) { return log_kernel(br, x - y) * (lo + (hi - lo) * (y - b1) / h); });
    }
  }
  return s;
}

}  // namespace tmlog
