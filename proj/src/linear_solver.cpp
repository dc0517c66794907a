#include "nlmc/linear_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/OrderingMethods>

#include "nlmc/errors.hpp"

namespace nlmc {

SolverKind parse_solver_kind(const std::string& text) {
  if (text == "direct") return SolverKind::Direct;
  if (text == "pcg") return SolverKind::Pcg;
  throw InputError("unknown solver '" + text + "' (expected direct or pcg)");
}

std::string to_string(SolverKind kind) { return kind == SolverKind::Direct ? "direct" : "pcg"; }

int pcg(const SparseMatrix& a, const Vector& b, Vector& x, double rtol, int max_iterations,
        double* achieved) {
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    if (achieved) *achieved = 0.0;
    return 0;
  }
  const Vector inv_diag = a.diagonal().cwiseInverse();
  Vector r = b - a * x;
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  double rz = r.dot(z);
  double res = r.norm() / bnorm;
  int it = 0;
  for (; it < max_iterations && res > rtol; ++it) {
    const Vector q = a * p;
    const double alpha = rz / p.dot(q);
    x += alpha * p;
    r -= alpha * q;
    res = r.norm() / bnorm;
    if (res <= rtol) {
      ++it;
      break;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  // The recurrence residual drifts; report the true one.
  res = (b - a * x).norm() / bnorm;
  if (achieved) *achieved = res;
  if (res > rtol) {
    std::ostringstream msg;
    msg << "PCG did not converge in " << it << " iterations (relative residual " << res
        << ", target " << rtol << ")";
    throw SolverError(msg.str());
  }
  return it;
}

SpdSolver::SpdSolver(SparseMatrix matrix, SolverOptions options)
    : matrix_(std::move(matrix)), options_(options) {
  if (options_.kind == SolverKind::Direct) {
    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>>();
    ldlt_->compute(matrix_);
    if (ldlt_->info() != Eigen::Success) throw SolverError("sparse LDL^T factorization failed");
  }
}

Vector SpdSolver::solve(const Vector& rhs, SolveInfo* info) const {
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    if (info) *info = {};
    return Vector::Zero(rhs.size());
  }
  if (options_.kind == SolverKind::Pcg) {
    Vector x = Vector::Zero(rhs.size());
    const int cap = static_cast<int>(
        std::ceil(options_.iteration_factor * std::sqrt(static_cast<double>(rhs.size()))));
    double res = 0.0;
    const int it = pcg(matrix_, rhs, x, options_.rtol, cap, &res);
    if (info) *info = {res, it};
    return x;
  }

  Vector x = ldlt_->solve(rhs);
  double res = (rhs - matrix_ * x).norm() / bnorm;
  int steps = 0;
  while (res > options_.rtol && steps < options_.max_refinement) {
    x += ldlt_->solve(rhs - matrix_ * x);
    res = (rhs - matrix_ * x).norm() / bnorm;
    ++steps;
  }
  if (info) *info = {res, steps};
  if (res > options_.rtol) {
    std::ostringstream msg;
    msg << "direct solve residual " << res << " above target " << options_.rtol;
    throw SolverError(msg.str());
  }
  return x;
}

SaddlePointSolver::SaddlePointSolver(const SparseMatrix& a, const SparseMatrix& b) : a_(a), b_(b) {
  const auto n = a.rows();
  const auto m = b.rows();
  if (a.cols() != n || b.cols() != n) throw InputError("saddle-point block sizes disagree");

  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> amd;
  Eigen::AMDOrdering<int> ordering;
  SparseMatrix a_sym = a.selfadjointView<Eigen::Lower>();
  ordering(a_sym, amd);
  // AMDOrdering yields the inverse of the symmetric permutation to apply.
  const Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> fill = amd.inverse();
  std::vector<int> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[fill.indices()[i]] = static_cast<int>(i);

  // Each multiplier follows the last primal unknown of its row.
  std::vector<int> remaining(static_cast<std::size_t>(m), 0);
  for (int col = 0; col < b.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(b, col); it; ++it) {
      if (it.value() != 0.0) ++remaining[it.row()];
    }
  }
  for (Eigen::Index r = 0; r < m; ++r) {
    if (remaining[r] == 0) throw SolverError("saddle-point constraint row " + std::to_string(r) + " is empty");
  }
  perm_.resize(n + m);
  int next = 0;
  for (const int index : order) {
    perm_.indices()[index] = next++;
    for (SparseMatrix::InnerIterator it(b, index); it; ++it) {
      if (it.value() != 0.0 && --remaining[it.row()] == 0) perm_.indices()[n + it.row()] = next++;
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(a.nonZeros() + 2 * b.nonZeros()));
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      triplets.emplace_back(perm_.indices()[it.row()], perm_.indices()[it.col()], it.value());
    }
  }
  for (int col = 0; col < b.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(b, col); it; ++it) {
      const int r = perm_.indices()[n + it.row()];
      const int c = perm_.indices()[it.col()];
      triplets.emplace_back(r, c, it.value());
      triplets.emplace_back(c, r, it.value());
    }
  }
  SparseMatrix kkt(n + m, n + m);
  kkt.setFromTriplets(triplets.begin(), triplets.end());

  ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>>>();
  ldlt_->compute(kkt);
  if (ldlt_->info() != Eigen::Success) {
    throw SolverError("saddle-point factorization failed (constraints rank deficient?)");
  }
  const Vector d = ldlt_->vectorD();
  for (Eigen::Index i = 0; i < n + m; ++i) {
    const double pivot = d[perm_.indices()[i]];
    if (!std::isfinite(pivot) || (i < n ? pivot <= 0.0 : pivot >= 0.0)) {
      throw SolverError("saddle-point factorization has a pivot of the wrong sign");
    }
  }
}

Vector SaddlePointSolver::apply_kkt(const Vector& z) const {
  const auto n = a_.rows();
  Vector out(z.size());
  out.head(n) = a_ * z.head(n) + b_.transpose() * z.tail(b_.rows());
  out.tail(b_.rows()) = b_ * z.head(n);
  return out;
}

Vector SaddlePointSolver::solve_permuted(const Vector& rhs) const {
  Vector permuted = perm_ * rhs;
  Vector sol = ldlt_->solve(permuted);
  return perm_.inverse() * sol;
}

SaddlePointSolver::Result SaddlePointSolver::solve(const Vector& f, const Vector& g, double tol,
                                                   int max_refinement) const {
  const auto n = a_.rows();
  Vector rhs(n + b_.rows());
  rhs << f, g;
  Vector z = solve_permuted(rhs);

  Result result;
  auto measure = [&](const Vector& sol) {
    const Vector ax = a_ * sol.head(n);
    const Vector stat = ax + b_.transpose() * sol.tail(b_.rows()) - f;
    const double scale = std::max({ax.norm(), f.norm(), std::numeric_limits<double>::min()});
    result.stationarity_residual = stat.norm() / scale;
    result.constraint_residual =
        b_.rows() ? (b_ * sol.head(n) - g).cwiseAbs().maxCoeff() : 0.0;
  };
  measure(z);
  for (int step = 0; step < max_refinement &&
                     (result.constraint_residual > tol || result.stationarity_residual > tol);
       ++step) {
    z += solve_permuted(rhs - apply_kkt(z));
    measure(z);
  }
  result.primal = z.head(n);
  result.dual = z.tail(b_.rows());
  return result;
}

}  // namespace nlmc
