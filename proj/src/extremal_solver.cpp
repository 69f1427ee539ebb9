#include "tmlog/extremal_solver.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tmlog/log_functionals.hpp"

namespace tmlog {

namespace {

using std::numbers::pi;

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Everything the iteration needs about the discretized problem.
struct Problem {
  const GrowthModel& G;
  StiffnessForm Q;
  Eigen::MatrixXd B;
  Eigen::LDLT<Eigen::MatrixXd> B_int;  // interior block
  DiscreteLogEnergy energy;
  Eigen::Index n;

  Problem(const GrowthModel& g, const Grid1D& grid, bool entire)
      : G(g), Q(stiffness_matrix(grid)), B(constraint_matrix(Q, entire)), energy(grid),
        n(static_cast<Eigen::Index>(grid.size())) {
    B_int.compute(B.block(1, 1, n - 2, n - 2));
  }

  double constraint(const Eigen::VectorXd& c) const { return c.dot(B * c); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& c) const {
    Eigen::VectorXd g = energy.gradient(c, G);
    g[0] = 0.0;
    g[n - 1] = 0.0;
    return g;
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& g) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    d.segment(1, n - 2) = B_int.solve(g.segment(1, n - 2));
    return d;
  }
  Eigen::VectorXd to_sphere(const Eigen::VectorXd& c) const { return c / std::sqrt(constraint(c)); }
  Eigen::VectorXd to_ball(const Eigen::VectorXd& c) const {
    const double v = constraint(c);
    return v > 1.0 ? Eigen::VectorXd(c / std::sqrt(v)) : c;
  }
};

// Multiplier and relative KKT residual over the free (interior) nodes.
ThetaEstimate kkt_interior(const Eigen::VectorXd& g, const Eigen::VectorXd& c, const Eigen::MatrixXd& B) {
  const Eigen::Index m = c.size() - 2;
  const Eigen::VectorXd gi = g.segment(1, m);
  const Eigen::VectorXd grad_c = (2.0 * (B * c)).segment(1, m);
  const Eigen::VectorXd ci = c.segment(1, m);
  ThetaEstimate t;
  t.theta = gi.dot(ci) / grad_c.dot(ci);
  const double gn = gi.norm();
  t.kkt_residual = gn > 0.0 ? (gi - t.theta * grad_c).norm() / gn : 0.0;
  return t;
}

ThetaEstimate kkt(const Problem& P, const Eigen::VectorXd& c, const Eigen::VectorXd& g) {
  return kkt_interior(g, c, P.B);
}

Eigen::VectorXd initial_guess(const Problem& P, const Grid1D& grid, const SolverOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double half = 0.5 * (grid.hi() - grid.lo()), mid = 0.5 * (grid.hi() + grid.lo());
  Eigen::VectorXd c(P.n);
  for (Eigen::Index i = 0; i < P.n; ++i) {
    const double hat = std::max(0.0, 1.0 - std::abs(grid[i] - mid) / half);
    c[i] = hat * (1.0 + opts.perturbation * unif(rng));
  }
  c[0] = 0.0;
  c[P.n - 1] = 0.0;
  return c * std::sqrt(opts.initial_constraint / P.constraint(c));
}

}  // namespace

Eigen::MatrixXd constraint_matrix(const StiffnessForm& Q, bool entire_space) {
  Eigen::MatrixXd B = Q.entries / (2.0 * pi);
  if (entire_space) B += mass_matrix(Q.grid);
  return B;
}

double constraint_value(const Eigen::VectorXd& c, const StiffnessForm& Q, bool entire_space) {
  return c.dot(constraint_matrix(Q, entire_space) * c);
}

Eigen::VectorXd project_to_ball(const Eigen::VectorXd& c, const StiffnessForm& Q, bool entire_space) {
  const double v = constraint_value(c, Q, entire_space);
  if (v > 1.0) return c / std::sqrt(v);
  return c;
}

Eigen::VectorXd phi_gradient(const SampledFunction& u, const GrowthModel& G) {
  DiscreteLogEnergy energy(u.grid());
  return energy.gradient(to_vector(u.values()), G);
}

MaximizerState maximize(const GrowthModel& G, const Grid1D& grid, const SolverOptions& opts) {
  if (!G.differentiable()) fail(ErrorKind::unsupported_input, "maximize needs a differentiable growth model");
  if (opts.max_iter < 1 || !(opts.tol > 0.0))
    fail(ErrorKind::invalid_argument, "max_iter must be >= 1 and tol > 0");
  if (!(opts.initial_constraint > 0.0 && opts.initial_constraint <= 1.0))
    fail(ErrorKind::invalid_argument, "initial constraint value must lie in (0, 1]");
  if (opts.symmetrize_every > 0 && !grid.symmetric())
    fail(ErrorKind::invalid_argument, "symmetrization needs a symmetric grid");
  if (grid.size() < 5) fail(ErrorKind::invalid_argument, "grid needs at least 5 nodes");

  const Problem P(G, grid, opts.entire_space);
  MaximizerState st;
  st.grid = grid;
  st.growth = G.spec();
  st.entire_space = opts.entire_space;

  Eigen::VectorXd c = initial_guess(P, grid, opts);
  FunctionalReport rep = P.energy.evaluate(c, G);
  double phi = rep.phi;
  st.history.push_back({0, phi, P.constraint(c)});

  auto snapshot = [&](int it) {
    st.coefficients = to_std(c);
    st.phi = phi;
    st.constraint_value = P.constraint(c);
    st.iterations = it;
  };

  auto symmetrize = [&](int it) {
    SymmetrizationRecord rec;
    rec.iteration = it;
    rec.phi_plus_before = P.energy.evaluate(c, G).phi_plus;
    rec.constraint_before = P.constraint(c);
    std::vector<double> a(static_cast<std::size_t>(P.n));
    for (Eigen::Index i = 0; i < P.n; ++i) a[i] = std::abs(c[i]);
    Eigen::VectorXd s = to_vector(schwarz_rearrange_onto(SampledFunction(grid, a), grid).values());
    s[0] = 0.0;
    s[P.n - 1] = 0.0;
    // Rearrangement does not increase the constraint; return to the sphere
    // when that raises Φ.
    const Eigen::VectorXd sph = P.to_sphere(s);
    s = P.to_ball(s);
    FunctionalReport r = P.energy.evaluate(s, G);
    const FunctionalReport rs = P.energy.evaluate(sph, G);
    if (rs.phi > r.phi) {
      s = sph;
      r = rs;
    }
    rec.phi_plus_after = r.phi_plus;
    rec.constraint_after = P.constraint(s);
    if (r.phi >= phi) {
      c = s;
      phi = r.phi;
      rec.accepted = true;
    }
    st.symmetrizations.push_back(rec);
  };

  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const Eigen::VectorXd g = P.gradient(c);
    const ThetaEstimate t = kkt(P, c, g);
    const bool active = std::abs(P.constraint(c) - 1.0) <= 1e-8;
    if (active && t.kkt_residual <= opts.tol) {
      if (opts.symmetrize_every > 0 && evenness_defect(SampledFunction(grid, to_std(c))) > 1e-10) {
        symmetrize(it);
        continue;
      }
      st.converged = true;
      break;
    }
    if (!(t.theta > 0.0)) {
      snapshot(it);
      throw SolverStall("ascent direction undefined: <grad phi, c> <= 0", st);
    }
    const Eigen::VectorXd r = P.solve(g) / (2.0 * t.theta) - c;
    const double slope = g.dot(r);
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
      const Eigen::VectorXd trial = c + step * r;
      // Ball projection, or the sphere when scaling up does not lose Φ.
      Eigen::VectorXd cand = P.to_ball(trial);
      double cand_phi = P.energy.evaluate(cand, G).phi;
      const Eigen::VectorXd sph = P.to_sphere(trial);
      const double sph_phi = P.energy.evaluate(sph, G).phi;
      if (sph_phi > cand_phi) {
        cand = sph;
        cand_phi = sph_phi;
      }
      const double need = kArmijo * step * slope;
      const bool sufficient = cand_phi - phi >= need;
      const bool flat = cand_phi >= phi && need <= 1e-13 * std::abs(phi);
      if (sufficient || flat) {
        c = cand;
        phi = cand_phi;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      snapshot(it);
      std::ostringstream os;
      os << "line search failed after " << kMaxHalvings << " halvings at iteration " << it;
      throw SolverStall(os.str(), st);
    }
    st.history.push_back({it + 1, phi, P.constraint(c)});
    if (opts.symmetrize_every > 0 && (it + 1) % opts.symmetrize_every == 0) symmetrize(it + 1);
  }

  // Maximizers are reported with nonnegative values.
  if (c.sum() < 0.0) c = -c;
  snapshot(it);
  const ThetaEstimate t = kkt(P, c, P.gradient(c));
  st.theta = t.theta;
  st.kkt_residual = t.kkt_residual;
  return st;
}

ThetaEstimate theta_estimate(const MaximizerState& state, const StiffnessForm& Q, const GrowthModel& G) {
  const Eigen::VectorXd c = to_vector(state.coefficients);
  const Eigen::MatrixXd B = constraint_matrix(Q, state.entire_space);
  const double cv = c.dot(B * c);
  if (std::abs(cv - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "constraint is inactive (value " << cv << "); the multiplier is undefined";
    fail(ErrorKind::undefined_multiplier, os.str());
  }
  return kkt_interior(phi_gradient(state.function(), G), c, B);
}

}  // namespace tmlog
