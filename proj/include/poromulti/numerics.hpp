#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <memory>
#include <vector>

namespace poromulti {

/// Direct LU solve; throws NumericalError naming the failing pivot. The relative
/// residual is checked against `residual_tol`.
Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             double residual_tol = 1e-10);

/// Conjugate-gradient path for symmetric positive definite systems.
Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                          double residual_tol = 1e-10);

/// LU factorization that keeps its symbolic analysis across refactorizations
/// with an unchanged sparsity pattern, and skips refactorizing identical matrices.
class SparseLUSolver {
public:
  void factorize(const Eigen::SparseMatrix<double>& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
  using LU = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;
  std::unique_ptr<LU> lu_ = std::make_unique<LU>();
  bool factorized_ = false;
  std::vector<int> outer_;
  std::vector<int> inner_;
  std::vector<double> values_;
};

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, M-orthonormal
};

/// The k smallest pairs of A v = lambda M v for symmetric A and SPD M, via
/// Cholesky reduction to a standard symmetric problem. Each eigenvector is
/// signed so that its first non-negligible entry is positive.
EigenPairs smallest_eigs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M, int k);

/// Sparse variant: shift-and-invert subspace iteration with Rayleigh-Ritz,
/// falling back to the dense path for small problems. Converged when every
/// wanted pair has relative residual below `tol`.
EigenPairs smallest_eigs(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M, int k,
                         double tol = 1e-9);

/// Orthonormal basis of range(X), dropping singular directions below
/// rel_tol * sigma_max.
Eigen::MatrixXd orthonormal_range(const Eigen::MatrixXd& X, double rel_tol = 1e-10);

/// Indices (ascending) of a maximal linearly independent subset of the rows of
/// R, by diagonally pivoted LDL' of the Gram matrix R R'. Pivots below
/// rel_tol * max pivot count as dependent.
std::vector<int> independent_rows(const Eigen::SparseMatrix<double>& R, double rel_tol = 1e-11);

/// Dense copy of Q^T A Q for sparse A.
Eigen::MatrixXd project(const Eigen::SparseMatrix<double>& A, const Eigen::MatrixXd& Q);

}  // namespace poromulti
