#include "doctest.h"
#include "pdcqed/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <random>

using namespace pdc;

TEST_CASE("lowest eigenpairs of a sparse symmetric matrix match dense diagonalization") {
  const int n = 400;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 + u(rng));
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
    if (i + 20 < n) {
      t.emplace_back(i, i + 20, -0.3);
      t.emplace_back(i + 20, i, -0.3);
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense{Eigen::MatrixXd(a)};

  SymEigenOptions opt;
  opt.shift = dense.eigenvalues()(0) - 1.0;
  const auto r = lowest_eigenpairs(a, 8, opt);
  REQUIRE(r.values.size() == 8);
  for (int k = 0; k < 8; ++k) CHECK(r.values(k) == doctest::Approx(dense.eigenvalues()(k)).epsilon(1e-10));
  CHECK(r.max_residual < 1e-8);
  const Eigen::MatrixXd g = r.vectors.transpose() * r.vectors;
  CHECK((g - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-10);
  for (int k = 0; k < 8; ++k)
    CHECK((a * r.vectors.col(k) - r.values(k) * r.vectors.col(k)).norm() < 1e-8);
}

TEST_CASE("degenerate eigenvalues are resolved") {
  // 2D Laplacian on a square: exact pairwise degeneracies.
  const int m = 20, n = m * m;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int k = i * m + j;
      t.emplace_back(k, k, 4.0);
      if (i + 1 < m) t.emplace_back(k, k + m, -1.0), t.emplace_back(k + m, k, -1.0);
      if (j + 1 < m) t.emplace_back(k, k + 1, -1.0), t.emplace_back(k + 1, k, -1.0);
    }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  const auto r = lowest_eigenpairs(a, 6);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense{Eigen::MatrixXd(a)};
  for (int k = 0; k < 6; ++k) CHECK(r.values(k) == doctest::Approx(dense.eigenvalues()(k)).epsilon(1e-10));
  CHECK(r.values(1) == doctest::Approx(r.values(2)).epsilon(1e-10));
}
