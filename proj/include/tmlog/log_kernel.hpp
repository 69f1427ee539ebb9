#pragma once

#include <array>

#include <Eigen/Dense>

#include "tmlog/function_space.hpp"

namespace tmlog {

/// full: log(1/|t|);  plus: log⁺(1/|t|);  minus: log⁺|t|.  full = plus - minus.
enum class KernelBranch { full, plus, minus };

const char* to_string(KernelBranch b) noexcept;

double log_kernel(KernelBranch b, double t);

/// m-th iterated antiderivative (0 <= m <= 4) of the kernel, C^{m-1} across
/// t = 0 and t = ±1, normalised so that the full branch vanishes at 0.
double kernel_antiderivative(KernelBranch b, int m, double t);

/// ∬ k(x - y) over [a1,a2] x [b1,b2], closed form.
double kernel_box(KernelBranch b, double a1, double a2, double b1, double b2);

/// ∬ k(x - y) φ_p(x) ψ_q(y) for the two linear hats on each cell, closed form.
/// Entry index is 2p + q (p, q = 0 for the left node, 1 for the right node).
std::array<double, 4> kernel_element(KernelBranch b, double a1, double a2, double b1, double b2);

/// Same element for arbitrary relative position of the two cells: exact when
/// the cells are close, Gauss (split along |x - y| = 1 if needed) otherwise.
std::array<double, 4> kernel_pair(KernelBranch b, double a1, double a2, double b1, double b2);

/// Galerkin matrices K_ij = ∬ k(x - y) φ_i(x) φ_j(y) over the hat basis of `grid`.
struct KernelMatrices {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
  Eigen::MatrixXd full() const { return plus - minus; }
};

KernelMatrices assemble_log_kernel(const Grid1D& grid);

/// Cell-by-cell matrix L_ab = ∬_{cell a x cell b} log(1/|x - y|).
Eigen::MatrixXd assemble_cell_log_matrix(const Grid1D& grid);

/// ∫ k(x - y) v(y) dy for piecewise-linear v (exact near x, Gauss far away).
double log_potential(const SampledFunction& v, double x, KernelBranch b = KernelBranch::full);

}  // namespace tmlog
