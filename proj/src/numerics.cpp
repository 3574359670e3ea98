#include "poromulti/numerics.hpp"

#include "poromulti/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <string>

namespace poromulti {
namespace {

void check_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                    double tol) {
  const double bn = b.norm();
  const double r = (A * x - b).norm();
  if (!std::isfinite(r) || (r > tol * std::max(bn, 1e-300) && r > 1e-300))
    throw NumericalError("linear solve residual " + std::to_string(bn > 0 ? r / bn : r) + " exceeds tolerance");
}

// First non-negligible entry of each column made positive.
void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    auto v = vectors.col(j);
    const double cutoff = 1e-8 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) <= cutoff) continue;
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
}

}  // namespace

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b, double residual_tol) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw std::invalid_argument("solve_sparse: dimension mismatch");
  SparseLUSolver lu;
  lu.factorize(A);
  Eigen::VectorXd x = lu.solve(b);
  check_residual(A, x, b, residual_tol);
  return x;
}

Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b, double residual_tol) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw std::invalid_argument("solve_spd: dimension mismatch");
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setTolerance(residual_tol * 0.1);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * A.rows()));
  cg.compute(A);
  if (cg.info() != Eigen::Success) throw NumericalError("solve_spd: preconditioner setup failed");
  Eigen::VectorXd x = cg.solve(b);
  if (cg.info() != Eigen::Success) throw NumericalError("solve_spd: conjugate gradient did not converge");
  check_residual(A, x, b, residual_tol);
  return x;
}

void SparseLUSolver::factorize(const Eigen::SparseMatrix<double>& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("SparseLUSolver: matrix must be square");
  if (!A.isCompressed()) throw std::invalid_argument("SparseLUSolver: matrix must be compressed");
  const std::span<const int> outer(A.outerIndexPtr(), static_cast<std::size_t>(A.outerSize() + 1));
  const std::span<const int> inner(A.innerIndexPtr(), static_cast<std::size_t>(A.nonZeros()));
  const bool same_pattern = std::equal(outer.begin(), outer.end(), outer_.begin(), outer_.end()) &&
                            std::equal(inner.begin(), inner.end(), inner_.begin(), inner_.end());
  const std::span<const double> values(A.valuePtr(), static_cast<std::size_t>(A.nonZeros()));
  if (same_pattern && factorized_ && std::equal(values.begin(), values.end(), values_.begin(), values_.end()))
    return;
  if (!same_pattern) {
    lu_ = std::make_unique<LU>();
    lu_->analyzePattern(A);
    outer_.assign(outer.begin(), outer.end());
    inner_.assign(inner.begin(), inner.end());
  }
  factorized_ = false;
  lu_->factorize(A);
  if (lu_->info() != Eigen::Success) {
    outer_.clear();
    throw NumericalError("sparse LU factorization failed: " + lu_->lastErrorMessage());
  }
  values_.assign(values.begin(), values.end());
  factorized_ = true;
}

Eigen::VectorXd SparseLUSolver::solve(const Eigen::VectorXd& b) const {
  if (!factorized_) throw std::logic_error("SparseLUSolver: solve before factorize");
  Eigen::VectorXd x = lu_->solve(b);
  if (lu_->info() != Eigen::Success) throw NumericalError("sparse LU solve failed");
  return x;
}

EigenPairs smallest_eigs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M, int k) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || M.rows() != n || M.cols() != n) throw std::invalid_argument("smallest_eigs: shape mismatch");
  if (k < 0 || k > n) throw std::invalid_argument("smallest_eigs: k out of range");

  const Eigen::LLT<Eigen::MatrixXd> chol(M.selfadjointView<Eigen::Lower>());
  if (chol.info() != Eigen::Success) throw NumericalError("smallest_eigs: mass matrix is not SPD (Cholesky failed)");

  // C = L^{-1} A L^{-T}
  Eigen::MatrixXd C = chol.matrixL().solve(A);
  C = chol.matrixL().solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose()).eval();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) throw NumericalError("smallest_eigs: symmetric eigensolver did not converge");

  EigenPairs out;
  out.values = es.eigenvalues().head(k);
  out.vectors = chol.matrixU().solve(es.eigenvectors().leftCols(k));
  fix_signs(out.vectors);
  return out;
}

EigenPairs smallest_eigs(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M, int k,
                         double tol) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || M.rows() != n || M.cols() != n) throw std::invalid_argument("smallest_eigs: shape mismatch");
  if (k < 0 || k > n) throw std::invalid_argument("smallest_eigs: k out of range");
  const Eigen::Index block = std::min<Eigen::Index>(n, 2 * k + 10);
  if (4 * block >= n) return smallest_eigs(Eigen::MatrixXd(A), Eigen::MatrixXd(M), k);

  double trace_a = 0.0, trace_m = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    trace_a += A.coeff(i, i);
    trace_m += M.coeff(i, i);
  }
  if (!(trace_m > 0.0)) throw NumericalError("smallest_eigs: mass matrix is not SPD");
  const double scale = trace_a > 0.0 ? trace_a / trace_m : 1.0;
  const double shift = 1e-3 * scale;

  const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> shifted(A + shift * M);
  if (shifted.info() != Eigen::Success) throw NumericalError("smallest_eigs: shifted factorization failed");

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd X(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = unit(rng);

  for (int it = 0; it < 1000; ++it) {
    const Eigen::MatrixXd Y = shifted.solve(M * X);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Y).householderQ() * Eigen::MatrixXd::Identity(n, block);
    const EigenPairs ritz = smallest_eigs(project(A, Q), project(M, Q), static_cast<int>(block));
    X = Q * ritz.vectors;

    bool converged = true;
    for (int j = 0; j < k && converged; ++j) {
      const Eigen::VectorXd mx = M * X.col(j);
      const double r = (A * X.col(j) - ritz.values[j] * mx).norm();
      converged = r <= tol * (scale + std::abs(ritz.values[j])) * mx.norm();
    }
    if (converged) {
      EigenPairs out;
      out.values = ritz.values.head(k);
      out.vectors = X.leftCols(k);
      fix_signs(out.vectors);
      return out;
    }
  }
  throw NumericalError("smallest_eigs: subspace iteration did not converge");
}

Eigen::MatrixXd orthonormal_range(const Eigen::MatrixXd& X, double rel_tol) {
  if (X.cols() == 0 || X.rows() == 0) return Eigen::MatrixXd(X.rows(), 0);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!(s[0] > 0.0)) return Eigen::MatrixXd(X.rows(), 0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > rel_tol * s[0]) ++rank;
  return svd.matrixU().leftCols(rank);
}

std::vector<int> independent_rows(const Eigen::SparseMatrix<double>& R, double rel_tol) {
  const Eigen::Index n = R.rows();
  if (n == 0) return {};
  const Eigen::MatrixXd gram(Eigen::SparseMatrix<double>(R * R.transpose()));
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd d = ldlt.vectorD();
  Eigen::VectorXi order = Eigen::VectorXi::LinSpaced(n, 0, static_cast<int>(n) - 1);
  order = ldlt.transpositionsP() * order;
  const double top = d.cwiseAbs().maxCoeff();
  std::vector<int> kept;
  if (!(top > 0.0)) return kept;
  for (Eigen::Index k = 0; k < n; ++k)
    if (d[k] > rel_tol * top) kept.push_back(order[k]);
  std::sort(kept.begin(), kept.end());
  return kept;
}

Eigen::MatrixXd project(const Eigen::SparseMatrix<double>& A, const Eigen::MatrixXd& Q) {
  const Eigen::MatrixXd AQ = A * Q;
  Eigen::MatrixXd P = Q.transpose() * AQ;
  return 0.5 * (P + P.transpose());
}

}  // namespace poromulti
