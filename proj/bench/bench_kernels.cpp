// Serial reference kernels against the OpenMP versions on the 127 x 127 ring
// Hamiltonian (the largest sparse operator the matter solver touches).
//
//   bench_kernels --benchmark_filter=spmv

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pdcqed/kernels.hpp"
#include "pdcqed/matter.hpp"

namespace {

using pdc::kernels::cplx;

struct Fixture {
  pdc::SparseHermitianOp h;
  std::vector<cplx> x, y;

  Fixture() : h(pdc::build_ring_hamiltonian(pdc::default_grid(), pdc::ring_potential_meV(200.0))) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    x.resize(h.dim());
    y.resize(h.dim());
    for (auto& v : x) v = {g(rng), g(rng)};
    for (auto& v : y) v = {g(rng), g(rng)};
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

template <void (*Spmv)(const pdc::kernels::CsrView&, const cplx*, cplx*)>
void BM_spmv(benchmark::State& st) {
  auto& f = fixture();
  const auto a = f.h.matrix().view();
  for (auto _ : st) {
    Spmv(a, f.x.data(), f.y.data());
    benchmark::DoNotOptimize(f.y.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.h.nnz()));
}

template <cplx (*Dot)(std::size_t, const cplx*, const cplx*)>
void BM_dot(benchmark::State& st) {
  auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(Dot(f.x.size(), f.x.data(), f.y.data()));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.x.size()));
}

template <void (*Axpy)(std::size_t, cplx, const cplx*, cplx*)>
void BM_axpy(benchmark::State& st) {
  auto& f = fixture();
  for (auto _ : st) {
    Axpy(f.x.size(), cplx(1e-9, 0.0), f.x.data(), f.y.data());
    benchmark::DoNotOptimize(f.y.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.x.size()));
}

}  // namespace

BENCHMARK(BM_spmv<pdc::kernels::serial::spmv>)->Name("spmv/serial");
BENCHMARK(BM_spmv<pdc::kernels::parallel::spmv>)->Name("spmv/parallel");
BENCHMARK(BM_dot<pdc::kernels::serial::dot>)->Name("dot/serial");
BENCHMARK(BM_dot<pdc::kernels::parallel::dot>)->Name("dot/parallel");
BENCHMARK(BM_axpy<pdc::kernels::serial::axpy>)->Name("axpy/serial");
BENCHMARK(BM_axpy<pdc::kernels::parallel::axpy>)->Name("axpy/parallel");

BENCHMARK_MAIN();
