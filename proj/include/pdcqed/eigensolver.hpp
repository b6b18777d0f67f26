#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>

namespace pdc {

struct SymEigenOptions {
  double shift = 0.0;      // eigenvalues closest above the shift are targeted
  double tol = 1e-10;      // on ||A x - theta x|| with ||x|| = 1
  int guard = 6;           // extra block columns beyond the requested count
  int krylov_depth = 4;    // blocks per restart: X, K X, ..., K^(depth-1) X
  int max_iterations = 200;
  std::uint64_t seed = 0x5eed1234ULL;
};

struct SymEigenResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // Euclidean-orthonormal columns
  int iterations = 0;
  double max_residual = 0.0;
};

// Lowest `nev` eigenpairs of a real symmetric sparse matrix (all eigenvalues
// assumed above `shift`) by shift-invert block Krylov with Rayleigh-Ritz on A.
SymEigenResult lowest_eigenpairs(const Eigen::SparseMatrix<double>& a, int nev,
                                 const SymEigenOptions& opt = {});

}  // namespace pdc
