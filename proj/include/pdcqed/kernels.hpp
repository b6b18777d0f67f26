#pragma once

// Low-level vector and CSR kernels. `serial` is the reference implementation
// used by the tests; `parallel` is the OpenMP version the solvers call.

#include <complex>
#include <cstddef>
#include <cstdint>

namespace pdc::kernels {

using cplx = std::complex<double>;

struct CsrView {
  std::size_t rows = 0;
  const std::int64_t* row_ptr = nullptr;
  const std::int32_t* col = nullptr;
  const cplx* val = nullptr;
};

namespace serial {
void spmv(const CsrView& a, const cplx* x, cplx* y);                  // y = A x
void spmv_add(const CsrView& a, cplx alpha, const cplx* x, cplx* y);  // y += alpha A x
cplx dot(std::size_t n, const cplx* a, const cplx* b);                // sum conj(a) b
double norm2(std::size_t n, const cplx* a);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
void scale(std::size_t n, cplx alpha, cplx* x);
}  // namespace serial

namespace parallel {
void spmv(const CsrView& a, const cplx* x, cplx* y);
void spmv_add(const CsrView& a, cplx alpha, const cplx* x, cplx* y);
cplx dot(std::size_t n, const cplx* a, const cplx* b);
double norm2(std::size_t n, const cplx* a);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
void scale(std::size_t n, cplx alpha, cplx* x);
}  // namespace parallel

int max_threads();
void set_threads(int n);

}  // namespace pdc::kernels
