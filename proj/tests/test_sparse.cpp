#include "doctest.h"
#include "pdcqed/errors.hpp"
#include "pdcqed/kernels.hpp"
#include "pdcqed/sparse.hpp"

#include <random>

using namespace pdc;

namespace {

SparseMatrix random_sparse(std::size_t n, double fill, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(u(rng)) < fill) t.push_back({(std::int64_t)i, (std::int64_t)j, {u(rng), u(rng)}});
  return SparseMatrix::from_triplets(n, n, t);
}

CVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST_CASE("parallel kernels reproduce the serial reference") {
  std::mt19937_64 rng(7);
  const std::size_t n = 3000;
  const auto a = random_sparse(n, 0.003, rng);
  const CVector x = random_vector(n, rng);
  CVector y0 = random_vector(n, rng), y1 = y0;
  const int before = kernels::max_threads();
  kernels::set_threads(4);

  kernels::serial::spmv(a.view(), x.data(), y0.data());
  kernels::parallel::spmv(a.view(), x.data(), y1.data());
  CHECK((y0 - y1).norm() == 0.0);

  kernels::serial::spmv_add(a.view(), {0.5, -1.0}, x.data(), y0.data());
  kernels::parallel::spmv_add(a.view(), {0.5, -1.0}, x.data(), y1.data());
  CHECK((y0 - y1).norm() == 0.0);

  const cplx d0 = kernels::serial::dot(n, x.data(), y0.data());
  const cplx d1 = kernels::parallel::dot(n, x.data(), y0.data());
  CHECK(std::abs(d0 - d1) < 1e-10 * std::abs(d0));
  CHECK(kernels::parallel::norm2(n, x.data()) == doctest::Approx(kernels::serial::norm2(n, x.data())).epsilon(1e-13));
  CHECK(kernels::serial::norm2(n, x.data()) == doctest::Approx(x.norm()).epsilon(1e-13));

  kernels::serial::axpy(n, {2.0, 1.0}, x.data(), y0.data());
  kernels::parallel::axpy(n, {2.0, 1.0}, x.data(), y1.data());
  CHECK((y0 - y1).norm() == 0.0);
  kernels::serial::scale(n, {0.0, 3.0}, y0.data());
  kernels::parallel::scale(n, {0.0, 3.0}, y1.data());
  CHECK((y0 - y1).norm() == 0.0);
  kernels::set_threads(before);
}

TEST_CASE("CSR products and sums agree with dense algebra") {
  std::mt19937_64 rng(11);
  const auto a = random_sparse(40, 0.2, rng);
  const auto b = random_sparse(40, 0.2, rng);
  const CMatrix da = a.to_dense(), db = b.to_dense();
  const CVector x = random_vector(40, rng);
  CHECK(((a * x) - da * x).norm() < 1e-12);
  CHECK(((a * b).to_dense() - da * db).norm() < 1e-12);
  CHECK(((a + b).to_dense() - (da + db)).norm() < 1e-14);
  CHECK((a.adjoint().to_dense() - da.adjoint()).norm() == 0.0);
  CHECK((a.scaled({0.0, 2.0}).to_dense() - cplx(0.0, 2.0) * da).norm() < 1e-14);
  CHECK(a.coeff(3, 5) == da(3, 5));
  CHECK((SparseMatrix::from_dense(da).to_dense() - da).norm() == 0.0);
}

TEST_CASE("duplicate triplets are summed and drop tolerance applies") {
  std::vector<Triplet> t{{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 1e-15}, {1, 1, -1.0}};
  const auto m = SparseMatrix::from_triplets(2, 2, t, 1e-12);
  CHECK(m.nnz() == 2);
  CHECK(m.coeff(0, 1) == cplx(3.0));
  CHECK(m.coeff(1, 0) == cplx(0.0));
}

TEST_CASE("row-wise assembly equals triplet assembly") {
  const std::size_t n = 25;
  auto gen = [](std::size_t r, std::vector<RowEntry>& out) {
    out.push_back({(std::int64_t)r, cplx(double(r))});
    out.push_back({(std::int64_t)((r * 7) % 25), cplx(0.0, 1.0)});
    out.push_back({(std::int64_t)((r * 7) % 25), cplx(1.0, 0.0)});
  };
  const auto m = SparseMatrix::assemble_rows(n, n, gen);
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<RowEntry> e;
    gen(r, e);
    for (auto& x : e) t.push_back({(std::int64_t)r, x.col, x.val});
  }
  CHECK((m.to_dense() - SparseMatrix::from_triplets(n, n, t).to_dense()).norm() == 0.0);
}

TEST_CASE("Kronecker product matches the index definition") {
  std::mt19937_64 rng(3);
  const auto a = random_sparse(4, 0.6, rng);
  const auto b = random_sparse(5, 0.6, rng);
  const CMatrix k = kron(a, b).to_dense();
  const CMatrix da = a.to_dense(), db = b.to_dense();
  double err = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int p = 0; p < 5; ++p)
        for (int q = 0; q < 5; ++q) err = std::max(err, std::abs(k(i * 5 + p, j * 5 + q) - da(i, j) * db(p, q)));
  CHECK(err == 0.0);
}

TEST_CASE("Hermitian certification") {
  std::mt19937_64 rng(5);
  const auto a = random_sparse(30, 0.3, rng);
  const auto h = a + a.adjoint();
  CHECK(hermiticity_defect(h) < 1e-15);
  CHECK(hermiticity_defect(a) > 1e-3);
  SparseHermitianOp op(h);
  const CVector x = random_vector(30, rng);
  CHECK(std::abs(op.expectation(x).imag()) < 1e-12);
  CHECK_THROWS_AS(SparseHermitianOp{a}, NonHermitianError);
  CHECK_THROWS_AS(SparseHermitianOp{a}, NumericalError);
}

TEST_CASE("identity and diagonal constructors") {
  const auto i = SparseMatrix::identity(6);
  CHECK((i.to_dense() - CMatrix::Identity(6, 6)).norm() == 0.0);
  const auto d = SparseMatrix::diagonal({1.0, 2.0, cplx(0, 1)});
  CHECK(d.coeff(2, 2) == cplx(0, 1));
  CHECK(d.nnz() == 3);
}
