#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ohmlab/errors.hpp"
#include "ohmlab/graph.hpp"

namespace ohmlab {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// n x m edge-vertex incidence: -1 at the tail, +1 at the head of each edge.
SparseMatrix incidence(const Multigraph& g);

/// B W B^T. Parallel edges accumulate into one off-diagonal entry.
SparseMatrix laplacian(const Multigraph& g);

struct SolveReport {
  Vector solution;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Applies L^+ to vectors without forming it: preconditioned conjugate
/// gradient on the sum-zero subspace with Jacobi preconditioning.
///
/// Holds the assembled Laplacian and preconditioner; solve() is const and can
/// be called from several threads at once.
class LaplacianSolver {
 public:
  /// Throws StructuralError when g is disconnected.
  explicit LaplacianSolver(const Multigraph& g);

  /// Returns x with 1^T x = 0 and ||L x - b||_2 <= tol ||b||_2, b first
  /// projected onto the sum-zero subspace. A component along 1 larger than
  /// 10 tol ||b||_2 is an ArgumentError; hitting the iteration cap is a
  /// ConvergenceError carrying the best iterate.
  SolveReport solve(const Vector& b, double tol = 1e-10) const;

  const SparseMatrix& matrix() const { return laplacian_; }
  int dimension() const { return static_cast<int>(laplacian_.rows()); }
  long iteration_cap() const { return iteration_cap_; }

 private:
  SparseMatrix laplacian_;
  Vector inv_diagonal_;
  long iteration_cap_ = 10000;
};

SolveReport solve_laplacian(const Multigraph& g, const Vector& b, double tol = 1e-10);

// Induced norms -------------------------------------------------------------

/// ||M||_{1->1}: largest absolute column sum.
template <typename Derived>
typename Derived::RealScalar induced_norm_1(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar induced_norm_1(const Eigen::SparseMatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> sums = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(m.cols());
  const auto& mat = m.derived();
  for (Eigen::Index k = 0; k < mat.outerSize(); ++k) {
    for (typename Derived::InnerIterator it(mat, k); it; ++it) sums(it.col()) += std::abs(it.value());
  }
  return sums.size() == 0 ? Real(0) : sums.maxCoeff();
}

/// ||M||_{inf->inf}: largest absolute row sum.
template <typename Derived>
typename Derived::RealScalar induced_norm_inf(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar induced_norm_inf(const Eigen::SparseMatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> sums = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(m.rows());
  const auto& mat = m.derived();
  for (Eigen::Index k = 0; k < mat.outerSize(); ++k) {
    for (typename Derived::InnerIterator it(mat, k); it; ++it) sums(it.row()) += std::abs(it.value());
  }
  return sums.size() == 0 ? Real(0) : sums.maxCoeff();
}

struct PowerIterationOptions {
  double tol = 1e-8;  // relative
  int max_iterations = 200000;
};

namespace detail {

template <typename Derived>
double min_coeff(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.minCoeff());
}

template <typename Derived>
double min_coeff(const Eigen::SparseMatrixBase<Derived>& m) {
  double lo = 0.0;
  const auto& mat = m.derived();
  for (Eigen::Index k = 0; k < mat.outerSize(); ++k) {
    for (typename Derived::InnerIterator it(mat, k); it; ++it) lo = std::min(lo, static_cast<double>(it.value()));
  }
  return lo;
}

// x <- normalize(psi_q(M^T psi_p(M x))) from a positive start. Returns the
// final ||M x||_p and leaves the iterate in x.
template <typename Mat>
double nonneg_power_iteration(const Mat& m, double p, Vector& x, const PowerIterationOptions& opt,
                              int& iterations) {
  const bool euclidean = (p == 2.0);
  auto p_norm = [&](const Vector& v) {
    return euclidean ? v.norm() : std::pow(v.array().pow(p).sum(), 1.0 / p);
  };
  x /= p_norm(x);
  double gamma = 0.0;
  for (iterations = 1; iterations <= opt.max_iterations; ++iterations) {
    Vector y = m * x;
    double next = p_norm(y);
    if (next == 0.0) return 0.0;
    Vector s = y / y.maxCoeff();
    if (!euclidean) s = s.array().pow(p - 1.0).matrix();
    Vector z = m.transpose() * s;
    double zmax = z.maxCoeff();
    if (zmax <= 0.0) return next;
    Vector xn = z / zmax;
    if (!euclidean) xn = xn.array().pow(1.0 / (p - 1.0)).matrix();
    xn /= p_norm(xn);
    double change = (xn - x).cwiseAbs().maxCoeff();
    x = std::move(xn);
    if (iterations > 1 && std::abs(next - gamma) <= 1e-3 * opt.tol * next && change <= std::sqrt(opt.tol)) {
      return next;
    }
    gamma = next;
  }
  throw ConvergenceError("induced p-norm power iteration did not converge", x, gamma);
}

}  // namespace detail

/// ||M||_{p->p} for entrywise-nonnegative M (dense or sparse).
///
/// p = 1 and p = inf use the exact column/row-sum formulas. Otherwise the
/// nonlinear power iteration x <- psi_q(M^T psi_p(M x)) with psi_r(v) = v^(r-1)
/// and q the dual exponent, started from the uniform vector; it increases
/// monotonically to the norm for nonnegative M.
template <typename Mat>
double induced_norm_p_nonneg(const Mat& m, double p, const PowerIterationOptions& opt = {}) {
  if (!(p >= 1.0)) throw ArgumentError("induced norm needs p >= 1");
  if (detail::min_coeff(m) < 0.0) throw ContractError("induced_norm_p_nonneg needs a nonnegative matrix");
  if (p == 1.0) return induced_norm_1(m);
  if (std::isinf(p)) return induced_norm_inf(m);
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (std::abs(p - 2.0) <= 1e-9) p = 2.0;

  Vector x = Vector::Ones(m.cols());
  int iterations = 0;
  double value = detail::nonneg_power_iteration(m, p, x, opt, iterations);
  if (iterations < 50) {
    // Early stall: confirm from a deterministic perturbed start.
    Vector y(m.cols());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = 1.0 + 0.5 * std::abs(std::sin(1.0 + 7.0 * static_cast<double>(i)));
    value = std::max(value, detail::nonneg_power_iteration(m, p, y, opt, iterations));
  }
  return value;
}

// Coordinate text: "rows cols nnz" then one "row col value" triplet per line.
void write_coordinate(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_coordinate(std::istream& in);

}  // namespace ohmlab
