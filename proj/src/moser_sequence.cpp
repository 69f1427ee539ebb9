#include "tmlog/moser_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tmlog/error.hpp"
#include "tmlog/log_functionals.hpp"
#include "tmlog/quadrature.hpp"

namespace tmlog {

namespace {

using std::numbers::pi;

void require_n(double n) {
  if (!(n >= 3.0) || !std::isfinite(n)) {
    std::ostringstream os;
    os << "Moser index n = " << n << " must be >= 3 (A_n is real only for log n > 1)";
    fail(ErrorKind::invalid_argument, os.str());
  }
}

// f(t) = t²/(e^t + e^{-t} - 2), h(t) = t²/(e^t + e^{-t} + 2), cancellation-free.
double f_plus_h(double t) {
  if (t == 0.0) return 1.0;
  const double e = std::exp(-t);
  const double em = std::expm1(-t);
  const double one_plus = 1.0 + e;
  return t * t * e * (1.0 / (em * em) + 1.0 / (one_plus * one_plus));
}

// t² (1/(e^t - 1) + 1/(e^t + 1)) = t² / sinh t.
double i12_integrand(double t) {
  if (t == 0.0) return 0.0;
  return t * t / std::sinh(t);
}

constexpr double kTol = 1e-14;
constexpr double kRel = 1e-13;

double quad(const Integrand& f, double a, double b) { return integrate(f, a, b, kTol, kRel, 20000).value; }

}  // namespace

double moser_amplitude(double n) {
  require_n(n);
  const double L = std::log(n);
  return std::sqrt((1.0 - 1.0 / L) / (pi * L));
}

Grid1D moser_grid(double n, int per_decade) {
  require_n(n);
  if (per_decade < 1) fail(ErrorKind::invalid_argument, "per_decade must be >= 1");
  const double decades = std::log10(n);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> pos;
  pos.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) pos.push_back(std::pow(10.0, -decades * (1.0 - static_cast<double>(k) / steps)));
  pos.front() = 1.0 / n;
  pos.back() = 1.0;
  return make_symmetric_grid(std::move(pos));
}

SampledFunction moser_function(double n, const Grid1D& grid) {
  const double A = moser_amplitude(n);
  const double inv = 1.0 / n;
  const double tol = 1e-14;
  if (!grid.find_node(inv, tol * inv) || !grid.find_node(-inv, tol * inv) || !grid.find_node(1.0, tol) ||
      !grid.find_node(-1.0, tol))
    fail(ErrorKind::invalid_argument, "grid must contain the breakpoints ±1/n and ±1");
  const double L = std::log(n);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ax = std::abs(grid[i]);
    if (ax >= 1.0)
      v[i] = 0.0;
    else if (ax <= inv * (1.0 + tol))
      v[i] = A * L;
    else
      v[i] = -A * std::log(ax);
  }
  return SampledFunction(grid, std::move(v), Interval{-1.0, 1.0});
}

ComponentIntegrals component_integrals(double n) {
  require_n(n);
  const double L = std::log(n);
  ComponentIntegrals c;
  c.I12 = 2.0 * quad(i12_integrand, 0.0, L);
  c.I13 = L * L * 2.0 * std::log1p(2.0 / (n - 1.0));
  const double fh = quad(f_plus_h, 0.0, L);
  const double fht = quad([](double t) { return f_plus_h(t) * t; }, 0.0, L);
  c.I22 = 4.0 * L * fh - 4.0 * fht;
  // 4 ∫₁^n (log t)²/(t² - 1) dt with t = e^s.
  c.I23 = 2.0 * quad(i12_integrand, 0.0, L);
  return c;
}

double A_partial(double T) { return quad(f_plus_h, 0.0, T); }

double A_constant() {
  // The integrand is below 2 t² e^{-t} beyond t = 60; that tail is < 1e-22.
  return A_partial(60.0);
}

double B_constant() {
  return quad([](double t) { return f_plus_h(t) * t; }, 0.0, 70.0);
}

double bracket_constant() {
  // 2 I12(∞) + 2 I23(∞), each equal to 2 ∫₀^∞ t²/sinh t = 7ζ(3)
  return 8.0 * quad(i12_integrand, 0.0, 80.0);
}

double bracket_bound(double n) {
  const double A = moser_amplitude(n);
  const double L = std::log(n);
  return (bracket_constant() + pi * pi * L + 4.0 * L * L * std::log1p(2.0 / (n - 1.0))) * A * A;
}

MoserWitness verify_normalization(double n, const QuadratureSpec& q, int per_decade) {
  MoserWitness w;
  w.n = n;
  w.A_n = moser_amplitude(n);
  w.components = component_integrals(n);
  const ComponentIntegrals& c = w.components;
  w.seminorm_sq_closed = w.A_n * w.A_n * (2.0 * c.I12 + 2.0 * c.I13 + c.I22 + 2.0 * c.I23);
  const SampledFunction u = moser_function(n, moser_grid(n, per_decade));
  w.seminorm_sq_numeric = gagliardo_seminorm_sq(u, q);
  w.quarter_norm_sq = w.seminorm_sq_numeric / (2.0 * pi);
  w.member = w.quarter_norm_sq <= 1.0;
  w.bracket = bracket_bound(n);
  return w;
}

MoserPhi phi_moser(double n, const GrowthModel& G, double gamma, double c1, int per_decade) {
  if (!(c1 > 0.0)) fail(ErrorKind::invalid_argument, "c1 must be positive");
  const SampledFunction u = moser_function(n, moser_grid(n, per_decade));
  const double L = std::log(n);
  MoserPhi r;
  r.c2 = std::pow(pi, 0.5 * gamma) / (c1 * std::numbers::e);
  r.lower_bound = 0.25 * r.c2 * r.c2 * std::pow(L, 1.0 - gamma);
  const double plateau = moser_amplitude(n) * L;
  try {
    // log-space comparison of G(plateau) with c₂ L^{-γ/2} n
    r.plateau_margin = std::exp(G.log_value(plateau) - (std::log(r.c2) - 0.5 * gamma * std::log(L) + L));
    r.phi_direct = phi_report(u, G).phi;
  } catch (const Error& e) {
    std::ostringstream os;
    os << "phi_moser(n = " << n << ", plateau A_n log n = " << plateau << "): " << e.what();
    fail(e.kind(), os.str());
  }
  return r;
}

}  // namespace tmlog
