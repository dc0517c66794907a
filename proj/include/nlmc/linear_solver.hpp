#pragma once

#include <memory>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace nlmc {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

enum class SolverKind { Direct, Pcg };

SolverKind parse_solver_kind(const std::string& text);
std::string to_string(SolverKind kind);

struct SolverOptions {
  SolverKind kind = SolverKind::Direct;
  /// Relative residual target ||b - Ax|| <= rtol ||b||.
  double rtol = 1e-10;
  /// PCG iteration cap is iteration_factor * sqrt(n).
  double iteration_factor = 50.0;
  /// Iterative refinement steps allowed after a direct solve.
  int max_refinement = 3;
};

struct SolveInfo {
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Jacobi-preconditioned conjugate gradients. Starts from x; returns iterations used.
/// Throws SolverError when the cap is reached before ||r|| <= rtol ||b||.
int pcg(const SparseMatrix& a, const Vector& b, Vector& x, double rtol, int max_iterations,
        double* achieved = nullptr);

/// Symmetric positive definite solver: sparse LDL^T with iterative refinement, or PCG.
class SpdSolver {
 public:
  SpdSolver(SparseMatrix matrix, SolverOptions options = {});

  Vector solve(const Vector& rhs, SolveInfo* info = nullptr) const;
  const SparseMatrix& matrix() const { return matrix_; }

 private:
  SparseMatrix matrix_;
  SolverOptions options_;
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>> ldlt_;
};

/// Direct solver for the symmetric indefinite system
///
///   [ A  B^T ] [x]   [f]
///   [ B  0   ] [y] = [g]
///
/// with A symmetric positive definite and B of full row rank. The primal block
/// is ordered by AMD and each multiplier is eliminated right after the last
/// primal unknown of its row, so every leading block is nonsingular and the
/// unpivoted LDL^T has positive primal and negative dual pivots.
class SaddlePointSolver {
 public:
  SaddlePointSolver(const SparseMatrix& a, const SparseMatrix& b);

  struct Result {
    Vector primal;
    Vector dual;
    double constraint_residual = 0.0;    // max |B x - g|
    double stationarity_residual = 0.0;  // ||A x + B^T y - f|| / max(||A x||, ||f||, tiny)
  };

  /// Solves with refinement until both residuals are below tol (or steps run out).
  Result solve(const Vector& f, const Vector& g, double tol, int max_refinement = 3) const;

 private:
  Vector apply_kkt(const Vector& z) const;
  Vector solve_permuted(const Vector& rhs) const;

  SparseMatrix a_;
  SparseMatrix b_;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm_;  // full KKT ordering
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>>> ldlt_;
};

}  // namespace nlmc
