#include "pdcqed/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdcqed/errors.hpp"

namespace pdc {

namespace {

void check_index_range(std::size_t n) {
  if (n > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
    throw ResourceError("sparse dimension " + std::to_string(n) + " exceeds 32-bit column index");
}

// Sort, merge duplicates and drop small entries of one row, appending to CSR arrays.
void flush_row(std::vector<RowEntry>& row, double drop_tol, std::vector<std::int32_t>& col,
               std::vector<cplx>& val) {
  std::sort(row.begin(), row.end(), [](const RowEntry& a, const RowEntry& b) { return a.col < b.col; });
  std::size_t k = 0;
  while (k < row.size()) {
    const std::int64_t c = row[k].col;
    cplx s = 0.0;
    while (k < row.size() && row[k].col == c) s += row[k++].val;
    if (std::abs(s) > drop_tol) {
      col.push_back(static_cast<std::int32_t>(c));
      val.push_back(s);
    }
  }
  row.clear();
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {
  check_index_range(cols);
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t,
                                         double drop_tol) {
  check_index_range(cols);
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  std::vector<RowEntry> row;
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    while (k < t.size() && t[k].row == static_cast<std::int64_t>(i)) {
      if (t[k].col < 0 || t[k].col >= static_cast<std::int64_t>(cols))
        throw NumericalError("triplet column out of range");
      row.push_back({t[k].col, t[k].val});
      ++k;
    }
    flush_row(row, drop_tol, m.col_, m.val_);
    m.row_ptr_[i + 1] = static_cast<std::int64_t>(m.val_.size());
  }
  if (k != t.size()) throw NumericalError("triplet row out of range");
  return m;
}

SparseMatrix SparseMatrix::from_dense(const CMatrix& d, double drop_tol) {
  SparseMatrix m(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (std::abs(d(i, j)) > drop_tol) {
        m.col_.push_back(static_cast<std::int32_t>(j));
        m.val_.push_back(d(i, j));
      }
    }
    m.row_ptr_[i + 1] = static_cast<std::int64_t>(m.val_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  return diagonal(std::vector<cplx>(n, 1.0));
}

SparseMatrix SparseMatrix::diagonal(const std::vector<cplx>& d) {
  SparseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] != 0.0) {
      m.col_.push_back(static_cast<std::int32_t>(i));
      m.val_.push_back(d[i]);
    }
    m.row_ptr_[i + 1] = static_cast<std::int64_t>(m.val_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::assemble_rows(
    std::size_t rows, std::size_t cols,
    const std::function<void(std::size_t, std::vector<RowEntry>&)>& gen, double drop_tol) {
  SparseMatrix m(rows, cols);
  std::vector<RowEntry> row;
  for (std::size_t i = 0; i < rows; ++i) {
    gen(i, row);
    for (const auto& e : row)
      if (e.col < 0 || e.col >= static_cast<std::int64_t>(cols))
        throw NumericalError("assembled column out of range");
    flush_row(row, drop_tol, m.col_, m.val_);
    m.row_ptr_[i + 1] = static_cast<std::int64_t>(m.val_.size());
  }
  m.col_.shrink_to_fit();
  m.val_.shrink_to_fit();
  return m;
}

void SparseMatrix::apply(const cplx* x, cplx* y) const { kernels::parallel::spmv(view(), x, y); }

void SparseMatrix::apply_add(cplx alpha, const cplx* x, cplx* y) const {
  kernels::parallel::spmv_add(view(), alpha, x, y);
}

CVector SparseMatrix::operator*(const CVector& x) const {
  if (static_cast<std::size_t>(x.size()) != cols_) throw NumericalError("matvec size mismatch");
  CVector y(rows_);
  apply(x.data(), y.data());
  return y;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& b) const {
  if (cols_ != b.rows_) throw NumericalError("matrix product size mismatch");
  SparseMatrix c(rows_, b.cols_);
  std::vector<cplx> acc(b.cols_, 0.0);
  std::vector<char> used(b.cols_, 0);
  std::vector<std::int32_t> touched;
  for (std::size_t i = 0; i < rows_; ++i) {
    touched.clear();
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const auto r = static_cast<std::size_t>(col_[k]);
      for (auto l = b.row_ptr_[r]; l < b.row_ptr_[r + 1]; ++l) {
        const auto j = b.col_[l];
        if (!used[j]) {
          used[j] = 1;
          touched.push_back(j);
        }
        acc[j] += val_[k] * b.val_[l];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto j : touched) {
      if (acc[j] != 0.0) {
        c.col_.push_back(j);
        c.val_.push_back(acc[j]);
      }
      acc[j] = 0.0;
      used[j] = 0;
    }
    c.row_ptr_[i + 1] = static_cast<std::int64_t>(c.val_.size());
  }
  return c;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw NumericalError("matrix sum size mismatch");
  return assemble_rows(rows_, cols_, [&](std::size_t i, std::vector<RowEntry>& out) {
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.push_back({col_[k], val_[k]});
    for (auto k = b.row_ptr_[i]; k < b.row_ptr_[i + 1]; ++k) out.push_back({b.col_[k], b.val_[k]});
  });
}

SparseMatrix SparseMatrix::scaled(cplx alpha) const {
  SparseMatrix m = *this;
  for (auto& v : m.val_) v *= alpha;
  return m;
}

SparseMatrix SparseMatrix::adjoint() const {
  SparseMatrix t(cols_, rows_);
  std::vector<std::int64_t> count(cols_ + 1, 0);
  for (auto c : col_) ++count[c + 1];
  for (std::size_t j = 0; j < cols_; ++j) count[j + 1] += count[j];
  t.row_ptr_ = count;
  t.col_.resize(nnz());
  t.val_.resize(nnz());
  std::vector<std::int64_t> next(count.begin(), count.end() - 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const auto pos = next[col_[k]]++;
      t.col_[pos] = static_cast<std::int32_t>(i);
      t.val_[pos] = std::conj(val_[k]);
    }
  }
  return t;
}

cplx SparseMatrix::coeff(std::size_t i, std::size_t j) const {
  const auto b = col_.begin() + row_ptr_[i];
  const auto e = col_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(j));
  if (it != e && *it == static_cast<std::int32_t>(j)) return val_[it - col_.begin()];
  return 0.0;
}

CMatrix SparseMatrix::to_dense() const {
  CMatrix d = CMatrix::Zero(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_[k]) = val_[k];
  return d;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : val_) m = std::max(m, std::abs(v));
  return m;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  const auto& ap = a.row_ptr();
  const auto& bp = b.row_ptr();
  return SparseMatrix::assemble_rows(rows, cols, [&](std::size_t r, std::vector<RowEntry>& out) {
    const std::size_t ia = r / b.rows(), ib = r % b.rows();
    for (auto k = ap[ia]; k < ap[ia + 1]; ++k)
      for (auto l = bp[ib]; l < bp[ib + 1]; ++l)
        out.push_back({static_cast<std::int64_t>(a.col()[k]) * static_cast<std::int64_t>(b.cols()) + b.col()[l],
                       a.val()[k] * b.val()[l]});
  });
}

double hermiticity_defect(const SparseMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  const SparseMatrix h = a.adjoint();
  // Both matrices have sorted rows, so a merge per row finds the largest difference.
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto k = a.row_ptr()[i], ke = a.row_ptr()[i + 1];
    auto l = h.row_ptr()[i], le = h.row_ptr()[i + 1];
    while (k < ke || l < le) {
      if (l >= le || (k < ke && a.col()[k] < h.col()[l])) {
        d = std::max(d, std::abs(a.val()[k++]));
      } else if (k >= ke || h.col()[l] < a.col()[k]) {
        d = std::max(d, std::abs(h.val()[l++]));
      } else {
        d = std::max(d, std::abs(a.val()[k++] - h.val()[l++]));
      }
    }
  }
  return d;
}

SparseHermitianOp::SparseHermitianOp(SparseMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw NonHermitianError("Hermitian operator must be square");
  defect_ = hermiticity_defect(m_);
  const double scale = std::max(1.0, m_.max_abs());
  if (!(defect_ <= tol * scale))
    throw NonHermitianError("operator fails Hermiticity check, defect " + std::to_string(defect_));
}

cplx SparseHermitianOp::expectation(const CVector& psi) const {
  const CVector h = m_ * psi;
  return kernels::parallel::dot(dim(), psi.data(), h.data());
}

}  // namespace pdc
