#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pdcqed/kernels.hpp"

namespace pdc {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

struct Triplet {
  std::int64_t row;
  std::int64_t col;
  cplx val;
};

// Row entries emitted during row-wise assembly; duplicates are summed.
struct RowEntry {
  std::int64_t col;
  cplx val;
};

// Complex CSR matrix with sorted, duplicate-free rows.
class SparseMatrix {
 public:
  SparseMatrix() : row_ptr_(1, 0) {}
  SparseMatrix(std::size_t rows, std::size_t cols);

  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t,
                                    double drop_tol = 0.0);
  static SparseMatrix from_dense(const CMatrix& m, double drop_tol = 0.0);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(const std::vector<cplx>& d);

  // Builds the matrix one row at a time. `gen(row, out)` appends entries for `row`.
  static SparseMatrix assemble_rows(std::size_t rows, std::size_t cols,
                                    const std::function<void(std::size_t, std::vector<RowEntry>&)>& gen,
                                    double drop_tol = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return val_.size(); }

  void apply(const cplx* x, cplx* y) const;
  void apply_add(cplx alpha, const cplx* x, cplx* y) const;
  CVector operator*(const CVector& x) const;

  SparseMatrix operator*(const SparseMatrix& b) const;
  SparseMatrix operator+(const SparseMatrix& b) const;
  SparseMatrix scaled(cplx alpha) const;
  SparseMatrix adjoint() const;

  cplx coeff(std::size_t i, std::size_t j) const;
  CMatrix to_dense() const;
  double max_abs() const;

  kernels::CsrView view() const { return {rows_, row_ptr_.data(), col_.data(), val_.data()}; }
  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::int32_t>& col() const { return col_; }
  const std::vector<cplx>& val() const { return val_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::int32_t> col_;
  std::vector<cplx> val_;
};

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const SparseMatrix& a);

// A square sparse matrix certified Hermitian on construction.
class SparseHermitianOp {
 public:
  SparseHermitianOp() = default;
  // Throws NonHermitianError if the defect exceeds tol * max(1, max|A_ij|).
  explicit SparseHermitianOp(SparseMatrix m, double tol = 1e-12);

  std::size_t dim() const { return m_.rows(); }
  std::size_t nnz() const { return m_.nnz(); }
  double defect() const { return defect_; }
  const SparseMatrix& matrix() const { return m_; }

  void apply(const cplx* x, cplx* y) const { m_.apply(x, y); }
  void apply_add(cplx alpha, const cplx* x, cplx* y) const { m_.apply_add(alpha, x, y); }
  CVector operator*(const CVector& x) const { return m_ * x; }
  cplx expectation(const CVector& psi) const;

 private:
  SparseMatrix m_;
  double defect_ = 0.0;
};

}  // namespace pdc
