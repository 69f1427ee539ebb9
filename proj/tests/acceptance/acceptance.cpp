// Acceptance criteria 1-9. Usage: tmlog_acceptance [N ...]; no argument runs all.
// Prints one PASS/FAIL line per criterion; detail lines are indented.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "tmlog/euler_lagrange.hpp"
#include "tmlog/extremal_solver.hpp"
#include "tmlog/fractional_calculus.hpp"
#include "tmlog/function_space.hpp"
#include "tmlog/growth_models.hpp"
#include "tmlog/log_functionals.hpp"
#include "tmlog/moser_sequence.hpp"
#include "tmlog/moving_plane.hpp"

using namespace tmlog;
using std::numbers::pi;

namespace {

// Collects the sub-checks of one criterion.
struct Verdict {
  bool ok = true;
  std::vector<std::string> notes;

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wformat-security"
  void check(bool cond, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    notes.push_back(std::string(cond ? "ok    " : "FAILED") + "  " + buf);
    ok = ok && cond;
  }
  void info(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    notes.push_back(std::string("info    ") + buf);
  }
#pragma GCC diagnostic pop
};

double tanh_sinh(const std::function<double(double)>& f, double a, double b) {
  static boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b, 1e-13);
}

double gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

double hat(double x, double c, double w = 1.0) { return std::max(0.0, 1.0 - std::abs(x - c) / w); }

// ---------------------------------------------------------------------------

void criterion1(Verdict& v) {
  const double c_num = normalization_constant_numeric(0.5);
  v.check(std::abs(c_num - 1.0 / pi) <= 1e-8, "(int (1-cos z)/z^2)^-1 = %.12f vs 1/pi, err %.2e <= 1e-8", c_num,
          std::abs(c_num - 1.0 / pi));
  // Oracle: ∫_0^∞ (1 - cos z)/z² = π/2; Gauss-Kronrod over 200 periods plus
  // the tail 1/X - 2/X³ + O(X⁻⁵) at X = 400π.
  double body = 0.0;
  for (int k = 0; k < 400; ++k)
    body += gauss_kronrod([](double z) { return z == 0.0 ? 0.5 : (1.0 - std::cos(z)) / (z * z); }, k * pi,
                          (k + 1) * pi);
  const double X = 400.0 * pi;
  const double oracle = 1.0 / (2.0 * (body + 1.0 / X - 2.0 / (X * X * X)));
  v.check(std::abs(oracle - 1.0 / pi) <= 1e-8, "boost oracle for the same integral: %.12f", oracle);

  const double A = A_constant();
  const auto fh = [](double t) {
    return t * t / (std::exp(t) + std::exp(-t) - 2.0) + t * t / (std::exp(t) + std::exp(-t) + 2.0);
  };
  boost::math::quadrature::exp_sinh<double> es;
  const double A_oracle = es.integrate([&](double t) { return t < 1e-6 ? 1.0 : fh(t); }, 0.0,
                                       std::numeric_limits<double>::infinity());
  v.info("A = %.10f, boost exp-sinh oracle %.10f, pi^2/2 = %.10f", A, A_oracle, pi * pi / 2.0);
  v.check(std::abs(A - pi * pi / 4.0) <= 1e-6, "A = pi^2/4 = %.10f within 1e-6 (gap %.4f)", pi * pi / 4.0,
          std::abs(A - pi * pi / 4.0));
}

void criterion2(Verdict& v) {
  const double n = 1e4;
  const MoserWitness w = verify_normalization(n);
  const double L = std::log(n);
  const double i12 = 2.0 * tanh_sinh([](double t) { return t == 0.0 ? 0.0 : t * t / std::sinh(t); }, 0.0, L);
  v.info("I12 = %.10f, boost oracle %.10f", w.components.I12, i12);
  const double rel = std::abs(w.bracket - pi) / pi;
  v.check(rel <= 0.05, "bracket bound %.5f within 5%% of pi (rel %.3f)", w.bracket, rel);
  v.check(w.quarter_norm_sq <= 1.0, "quarter-Laplacian norm^2 %.5f <= 1", w.quarter_norm_sq);
  const double agree = std::abs(w.seminorm_sq_numeric - w.seminorm_sq_closed) / w.seminorm_sq_closed;
  v.check(agree <= 0.01, "numeric seminorm %.6f vs closed %.6f, rel %.2e <= 1%%", w.seminorm_sq_numeric,
          w.seminorm_sq_closed, agree);
}

void criterion3(Verdict& v) {
  const std::vector<double> ns{1e2, 1e3, 1e4};
  for (double gamma : {0.5, 1.0}) {
    const GrowthModel G = GrowthModel::critical_family(gamma);
    std::vector<double> phi;
    for (double n : ns) {
      const MoserPhi p = phi_moser(n, G, gamma, std::pow(2.0, gamma));
      phi.push_back(p.phi_direct);
      v.info("gamma %.1f n %.0e: Phi %.5f, lower bound %.5f, plateau margin %.3f", gamma, n, p.phi_direct,
             p.lower_bound, p.plateau_margin);
    }
    if (gamma == 0.5) {
      v.check(phi[0] < phi[1] && phi[1] < phi[2], "gamma 0.5: Phi increasing (%.4f, %.4f, %.4f)", phi[0], phi[1],
              phi[2]);
      for (int k = 0; k < 2; ++k) {
        const double obs = phi[k + 1] / phi[k];
        const double pred = std::sqrt(std::log(ns[k + 1]) / std::log(ns[k]));
        v.check(std::abs(obs / pred - 1.0) <= 0.2, "gamma 0.5: ratio %.4f vs (log n)^(1/2) ratio %.4f within 20%%",
                obs, pred);
      }
    } else {
      const double lo = *std::min_element(phi.begin(), phi.end());
      const double hi = *std::max_element(phi.begin(), phi.end());
      v.check((hi - lo) / lo < 0.10, "gamma 1: Phi variation (max-min)/min = %.3f < 10%%", (hi - lo) / lo);
    }
  }
}

void criterion4(Verdict& v) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Grid1D g = make_interval_grid(129, 1.0, false);
  double worst_eq = 0.0, worst_ps = -INFINITY, worst_rp = -INFINITY, worst_rm = -INFINITY;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> vals(g.size());
    for (std::size_t i = 1; i + 1 < g.size(); ++i) vals[i] = unif(rng);
    const SampledFunction u(g, vals);
    const SampledFunction us = schwarz_rearrange(u);
    worst_eq = std::max(worst_eq, std::abs(lp_norm(us, 2.0) - lp_norm(u, 2.0)));
    worst_ps = std::max(worst_ps, gagliardo_seminorm_sq(us) - gagliardo_seminorm_sq(u));
    worst_rp = std::max(worst_rp, log_kernel_bilinear_direct(u, u, KernelBranch::plus) -
                                      log_kernel_bilinear_direct(us, us, KernelBranch::plus));
    worst_rm = std::max(worst_rm, log_kernel_bilinear_direct(us, us, KernelBranch::minus) -
                                      log_kernel_bilinear_direct(u, u, KernelBranch::minus));
  }
  v.check(worst_eq <= 1e-6, "equimeasurability: max | |u*|_2 - |u|_2 | = %.2e <= 1e-6", worst_eq);
  v.check(worst_ps <= 1e-6, "Polya-Szego: max [u*]^2 - [u]^2 = %.4g <= 1e-6", worst_ps);
  v.check(worst_rp <= 1e-6, "Riesz plus: max Phi+(u) - Phi+(u*) = %.4g <= 1e-6", worst_rp);
  v.check(worst_rm <= 1e-6, "Riesz minus: max Phi-(u*) - Phi-(u) = %.4g <= 1e-6", worst_rm);
}

void criterion5(Verdict& v) {
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -10.0 + 0.1 * i, d = (1.0 + x * x) * (1.0 + x * x);
    e1 = std::max(e1, std::abs(half_laplacian_pointwise(cauchy_profile(), x) - (1.0 - x * x) / d));
    e2 = std::max(e2, std::abs(half_laplacian_pointwise(cauchy_complement_shifted(), x) - (x * x - 1.0) / d));
  }
  v.check(e1 <= 1e-4, "(-D)^(1/2) 1/(1+x^2) vs (1-x^2)/(1+x^2)^2: max err %.2e <= 1e-4", e1);
  v.check(e2 <= 1e-4, "(-D)^(1/2) (x^2/(1+x^2)+1) vs (x^2-1)/(1+x^2)^2: max err %.2e <= 1e-4", e2);
  double ef = 0.0;
  for (double xi : {0.0, 0.25, 0.5, 1.0}) {
    const auto [lhs, rhs] = fourier_pair_check(xi);
    ef = std::max({ef, std::abs(lhs - rhs), std::abs(rhs - pi * std::exp(-2.0 * pi * std::abs(xi)))});
  }
  v.check(ef <= 1e-5, "Fourier pair |lhs - pi e^(-2 pi |xi|)| max %.2e <= 1e-5", ef);
}

void criterion6(Verdict& v) {
  const Grid1D g = make_interval_grid(257, 1.0, false);
  const GrowthModel G = GrowthModel::power(2.0);
  SolverOptions o;
  o.seed = 7;
  const MaximizerState st = maximize(G, g, o);
  const SampledFunction u = st.function();
  bool mono = true;
  for (std::size_t k = 1; k < st.history.size(); ++k) mono = mono && st.history[k].phi >= st.history[k - 1].phi;
  v.check(mono, "monotone ascent over %zu iterates", st.history.size());
  v.check(std::abs(st.constraint_value - 1.0) <= 1e-8, "constraint %.12f = 1 +- 1e-8", st.constraint_value);
  v.check(st.kkt_residual <= 1e-3, "KKT residual %.3e <= 1e-3", st.kkt_residual);
  v.check(evenness_defect(u) <= 1e-8, "evenness defect %.2e <= 1e-8", evenness_defect(u));
  v.check(radially_nonincreasing(u), "radially nonincreasing");
  double mn = INFINITY;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) mn = std::min(mn, u[i]);
  v.check(mn > 0.0, "min interior value %.4f > 0", mn);
  v.check(st.phi > 0.0, "phi %.8f > 0", st.phi);

  // Gradient against central differences of the same discretization.
  DiscreteLogEnergy E(g);
  const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(st.coefficients.data(), st.coefficients.size());
  const Eigen::VectorXd grad = E.gradient(c, G);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd d(c.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = nd(rng);
    const double h = 1e-5;
    const double fd = (E.evaluate(c + h * d, G).phi - E.evaluate(c - h * d, G).phi) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - grad.dot(d)) / std::abs(grad.dot(d)));
  }
  v.check(worst <= 1e-4, "gradient vs finite differences: rel err %.2e <= 1e-4", worst);
  v.info("converged %d after %d iterations, theta %.6f", st.converged, st.iterations, st.theta);
}

void criterion7(Verdict& v) {
  const SampledFunction pl = sample(make_interval_grid(129, 1.0, false), [](double) { return 1.0; });
  const double direct = log_kernel_bilinear_direct(pl, pl);
  const double radial = radial_reduction_bilinear(pl, pl);
  const double newton = newton_radial_convolution(pl, 0.5);
  const double conv = log_convolution(pl, 0.5);

  // Brute-force oracles.
  // Integrals of log|x - y| are taken in the distance t = |x - y| so the
  // singularity sits at t = 0, which tanh-sinh never samples.
  const auto neg_log = [](double t) { return -std::log(t); };
  const auto inner = [&](double x) { return tanh_sinh(neg_log, 0.0, x + 1.0) + tanh_sinh(neg_log, 0.0, 1.0 - x); };
  const double direct_o = tanh_sinh(inner, -1.0, 1.0);
  const double radial_o = tanh_sinh(
      [](double r) { return r * std::log(1.0 / r) + tanh_sinh([](double p) { return std::log(1.0 / p); }, r, 1.0); },
      0.0, 1.0);
  const double newton_o = std::log(0.5) + 2.0 * tanh_sinh([](double y) { return std::log(y); }, 0.5, 1.0);
  const double conv_o = -tanh_sinh(neg_log, 0.0, 1.5) - tanh_sinh(neg_log, 0.0, 0.5);

  const double want_direct = 6.0 - 4.0 * std::log(2.0);
  v.check(std::abs(direct - want_direct) <= 1e-4 && std::abs(direct_o - want_direct) <= 1e-4,
          "plateau direct bilinear %.8f (oracle %.8f) = 6 - 4 log 2 +- 1e-4", direct, direct_o);
  v.check(std::abs(radial - 0.5) <= 1e-6 && std::abs(radial_o - 0.5) <= 1e-6,
          "radial-reduction value %.10f (oracle %.10f) = 0.5 +- 1e-6", radial, radial_o);
  v.check(std::abs(newton + 1.0) <= 1e-6 && std::abs(newton_o + 1.0) <= 1e-6,
          "Newton formula at 0.5: %.10f (oracle %.10f) = -1 +- 1e-6", newton, newton_o);
  v.check(std::abs(conv + 1.7384) <= 1e-3 && std::abs(conv_o + 1.7384) <= 1e-3,
          "direct convolution at 0.5: %.8f (oracle %.8f) = -1.7384 +- 1e-3", conv, conv_o);
  v.info("findings (non-gating): bilinear gap %.6f, pointwise gap %.6f", std::abs(direct - radial),
         std::abs(newton - conv));
}

void criterion8(Verdict& v) {
  // c_λ sweep, g(s) = s.
  const GrowthModel G = GrowthModel::power(2.0).scaled(0.5);
  const Grid1D g40 = make_interval_grid(801, 40.0, false);
  const SampledFunction u = sample(g40, [](double x) { return 1.0 / (1.0 + x * x) - 1.0 / 1601.0; });
  std::vector<double> lam, c, env;
  for (int k = 0; k <= 12; ++k) {
    lam.push_back(-2.0 - 0.5 * k);
    const ComparisonConstant cc = c_lambda(u, G, lam.back());
    c.push_back(cc.c_mid);
    env.push_back(cc.envelope);
  }
  bool mono = true, env_mono = true;
  for (std::size_t k = 1; k < c.size(); ++k) {
    mono = mono && c[k] <= c[k - 1];
    env_mono = env_mono && env[k] <= env[k - 1];
  }
  const bool degenerate = c.front() == 0.0 && c.back() == 0.0;
  v.check(mono && (c.back() < 0.1 * c.front() || degenerate),
          "c_lambda nonincreasing as lambda -> -8 and c(-8) = %.3g below 10%% of c(-2) = %.3g%s", c.back(),
          c.front(), degenerate ? " (Sigma_lambda^- empty: c_lambda = 0 identically)" : "");
  v.info("envelope (int over Sigma_lambda |lambda-y| g(u)^2)^(1/2): %.5f at -2, %.5f at -8, ratio %.3f, monotone %d",
         env.front(), env.back(), env.back() / env.front(), env_mono);
  const ComparisonConstant pos = c_lambda(u, G, 0.05);
  v.check(pos.c_mid > 0.0 && pos.sigma_minus_measure > 0.0, "lambda = 0.05: c_lambda %.4f > 0, |Sigma^-| %.3f",
          pos.c_mid, pos.sigma_minus_measure);

  // λ₁ on even decreasing inputs and a translate.
  const double l1 = lambda1_estimate(u, {-8.0, 2.0});
  v.check(std::abs(l1) <= g40.cell_width(0), "lambda1 of 1/(1+x^2): %.3g within one spacing %.3g of 0", l1,
          g40.cell_width(0));
  const Grid1D g1 = make_interval_grid(129, 1.0, false);
  const double l1h = lambda1_estimate(sample(g1, [](double x) { return hat(x, 0.0); }), {-0.8, 0.8});
  v.check(std::abs(l1h) <= g1.cell_width(0), "lambda1 of the hat: %.3g within %.3g of 0", l1h, g1.cell_width(0));
  std::vector<double> xs;
  for (int i = -160; i <= 176; ++i) xs.push_back(0.125 * i);
  const SampledFunction ut =
      sample(Grid1D(xs), [](double x) { return 1.0 / (1.0 + (x - 1.0) * (x - 1.0)) - 1.0 / 442.0; });
  const double l1t = lambda1_estimate(ut, {-8.0, 8.0});
  v.check(std::abs(l1t - 1.0) <= 0.125, "lambda1 of the translate by 1: %.6f within 0.125 of 1", l1t);

  // Negative-part inequality and reflection identity on mixed-sign functions.
  const Grid1D g4 = make_interval_grid(401, 4.0, false);
  const std::vector<SampledFunction> mixed{
      sample(g4, [](double x) { return hat(x, -0.5) - 0.7 * hat(x, 1.2); }),
      sample(g4, [](double x) { return hat(x, 0.0, 3.0) * std::sin(2.0 * x); }),
      sample(g4, [](double x) { return hat(x, -0.5) + 0.8 * hat(x, 0.9) - 0.3 * hat(x, 2.0); }),
  };
  double worst_ineq = -INFINITY, worst_gap = 0.0, worst_literal = 0.0;
  for (const SampledFunction& m : mixed) {
    const EnergyBound e = negative_part_energy_bound(m);
    worst_ineq = std::max(worst_ineq, e.lhs - e.rhs);
    for (double l : {-0.2, 0.3, 0.7}) {
      const ReflectionIdentity r = reflection_identity(m, l);
      worst_gap = std::max(worst_gap, r.gap);
      worst_literal = std::max(worst_literal, r.literal_gap);
    }
  }
  v.check(worst_ineq <= 1e-4, "negative-part inequality: max lhs - rhs = %.4f <= 1e-4", worst_ineq);
  v.check(worst_gap <= 1e-4, "reflection identity (antisymmetric negative part): max gap %.2e <= 1e-4", worst_gap);
  v.info("reflection identity with pointwise min(u_lambda, 0) on the whole line: max gap %.4f", worst_literal);
}

void criterion9(Verdict& v) {
  const Grid1D g = make_interval_grid(257, 1.0, false);
  const GrowthModel G = GrowthModel::power(2.0);
  const MaximizerState st = maximize(G, g);
  const ELReport r = el_check(st, G);
  v.check(r.residual_u <= 0.05, "residual_u %.4f <= 0.05 (theta %.5f, %d nodes)", r.residual_u, r.theta_used,
          r.nodes_u);
  v.check(r.residual_w <= 0.05, "residual_w %.4f <= 0.05 (%d nodes)", r.residual_w, r.nodes_w);
  const SampledFunction c = sample(make_interval_grid(1201, 30.0, false), [](double x) { return 1.0 / (1.0 + x * x); });
  const DecayFit d = decay_fit(c, {5.0, 20.0});
  v.check(std::abs(d.exponent - 2.0) <= 0.1, "decay_fit of 1/(1+x^2) on [5, 20]: %.4f = 2 +- 0.1", d.exponent);
  v.info("w log slope %.4f", r.w_log_slope);
}

struct Criterion {
  void (*run)(Verdict&);
  double budget_s;
  const char* title;
};

const Criterion kCriteria[] = {
    {criterion1, 1.0, "constants"},
    {criterion2, 60.0, "Moser normalization"},
    {criterion3, 600.0, "divergence/boundedness dichotomy"},
    {criterion4, 120.0, "rearrangement suite"},
    {criterion5, 30.0, "closed-form half-Laplacians"},
    {criterion6, 300.0, "maximizer run"},
    {criterion7, 30.0, "identity discrepancy findings"},
    {criterion8, 120.0, "moving-plane suite"},
    {criterion9, 120.0, "EL consistency"},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int k = 1; k <= 9; ++k) which.push_back(k);
  int failed = 0;
  for (int k : which) {
    if (k < 1 || k > 9) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const Criterion& c = kCriteria[k - 1];
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.check(false, "exception: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.check(secs < c.budget_s, "runtime %.2f s < %.0f s", secs, c.budget_s);
    for (const std::string& n : v.notes) std::printf("    %s\n", n.c_str());
    std::printf("criterion %d (%s): %s\n", k, c.title, v.ok ? "PASS" : "FAIL");
    std::fflush(stdout);
    failed += !v.ok;
  }
  return failed ? 1 : 0;
}
