#include "pdcqed/kernels.hpp"

#include <omp.h>

#include <cmath>

namespace pdc::kernels {

namespace {
// Below this length the fork/join overhead dominates.
constexpr std::size_t kParallelMin = 4096;
}  // namespace

namespace serial {

void spmv(const CsrView& a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    cplx s = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

void spmv_add(const CsrView& a, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    cplx s = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] += alpha * s;
  }
}

cplx dot(std::size_t n, const cplx* a, const cplx* b) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx v = std::conj(a[i]) * b[i];
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

double norm2(std::size_t n, const cplx* a) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
  return std::sqrt(s);
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(std::size_t n, cplx alpha, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace serial

namespace parallel {

void spmv(const CsrView& a, const cplx* x, cplx* y) {
  const auto rows = static_cast<std::int64_t>(a.rows);
#pragma omp parallel for schedule(static) if (a.rows >= kParallelMin)
  for (std::int64_t i = 0; i < rows; ++i) {
    cplx s = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

void spmv_add(const CsrView& a, cplx alpha, const cplx* x, cplx* y) {
  const auto rows = static_cast<std::int64_t>(a.rows);
#pragma omp parallel for schedule(static) if (a.rows >= kParallelMin)
  for (std::int64_t i = 0; i < rows; ++i) {
    cplx s = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] += alpha * s;
  }
}

cplx dot(std::size_t n, const cplx* a, const cplx* b) {
  double re = 0.0, im = 0.0;
  const auto m = static_cast<std::int64_t>(n);
#pragma omp parallel for reduction(+ : re, im) schedule(static) if (n >= kParallelMin)
  for (std::int64_t i = 0; i < m; ++i) {
    const cplx v = std::conj(a[i]) * b[i];
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

double norm2(std::size_t n, const cplx* a) {
  double s = 0.0;
  const auto m = static_cast<std::int64_t>(n);
#pragma omp parallel for reduction(+ : s) schedule(static) if (n >= kParallelMin)
  for (std::int64_t i = 0; i < m; ++i) s += std::norm(a[i]);
  return std::sqrt(s);
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const auto m = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::int64_t i = 0; i < m; ++i) y[i] += alpha * x[i];
}

void scale(std::size_t n, cplx alpha, cplx* x) {
  const auto m = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::int64_t i = 0; i < m; ++i) x[i] *= alpha;
}

}  // namespace parallel

int max_threads() { return omp_get_max_threads(); }
void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace pdc::kernels
