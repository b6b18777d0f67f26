#include "pdcqed/eigensolver.hpp"

#include <Eigen/SparseCholesky>
#include <random>
#include <sstream>

#include "pdcqed/errors.hpp"

namespace pdc {

namespace {

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& v) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  return qr.householderQ() * Eigen::MatrixXd::Identity(v.rows(), v.cols());
}

}  // namespace

SymEigenResult lowest_eigenpairs(const Eigen::SparseMatrix<double>& a, int nev, const SymEigenOptions& opt) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw NumericalError("eigensolver: matrix not square");
  if (nev < 1 || nev > n) throw ConfigError("eigensolver: requested count out of range");

  const Eigen::Index b = std::min<Eigen::Index>(nev + opt.guard, n);
  const Eigen::Index depth = std::max(1, opt.krylov_depth);
  const Eigen::Index m = std::min<Eigen::Index>(b * depth, n);

  Eigen::SparseMatrix<double> shifted = a;
  if (opt.shift != 0.0) {
    Eigen::SparseMatrix<double> id(n, n);
    id.setIdentity();
    shifted -= opt.shift * id;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) throw NumericalError("eigensolver: factorization failed");

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd x(n, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = uni(rng);
  x = thin_q(x);

  SymEigenResult res;
  Eigen::VectorXd residuals(nev);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::MatrixXd v(n, m);
    v.leftCols(b) = x;
    Eigen::Index filled = b;
    Eigen::MatrixXd block = x;
    while (filled < m) {
      const Eigen::Index w = std::min(b, m - filled);
      block = ldlt.solve(block.leftCols(w));
      for (Eigen::Index j = 0; j < w; ++j) block.col(j).normalize();
      v.middleCols(filled, w) = block;
      filled += w;
    }
    v = thin_q(v);

    const Eigen::MatrixXd av = a * v;
    Eigen::MatrixXd s = v.transpose() * av;
    s = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver: projected problem failed");

    x = v * es.eigenvectors().leftCols(b);
    const Eigen::MatrixXd ax = av * es.eigenvectors().leftCols(nev);
    for (int j = 0; j < nev; ++j)
      residuals(j) = (ax.col(j) - es.eigenvalues()(j) * x.col(j)).norm();

    res.iterations = it;
    res.max_residual = residuals.maxCoeff();
    if (res.max_residual <= opt.tol) {
      res.values = es.eigenvalues().head(nev);
      res.vectors = x.leftCols(nev);
      return res;
    }
  }
  std::ostringstream msg;
  msg << "eigensolver did not converge after " << opt.max_iterations
      << " iterations; max residual " << res.max_residual << " (tol " << opt.tol << ")";
  throw NumericalError(msg.str());
}

}  // namespace pdc
