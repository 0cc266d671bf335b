// Serial vs OpenMP sector matvec, stored and matrix-free.
//   bench_matvec --benchmark_filter=Csr

#include <map>
#include <memory>

#include <benchmark/benchmark.h>

#include "chiral/hamiltonian.hpp"
#include "chiral/kernels.hpp"

namespace {

using namespace chiral;

struct Fixture {
  std::shared_ptr<const SectorBasis> basis;
  CouplingTable table;
  CsrMatrix csr;
  Eigen::VectorXcd x, y;

  explicit Fixture(int n) {
    const LatticeSpec spec = build_ladder_a(n, true);
    basis = std::make_shared<const SectorBasis>(n, n / 2);
    table = CouplingTable::hamiltonian(spec, 1.5);
    csr = assemble_csr(*basis, table);
    const auto dim = static_cast<Eigen::Index>(basis->size());
    x = Eigen::VectorXcd::Random(dim);
    y = Eigen::VectorXcd::Zero(dim);
  }
  std::span<const cplx> in() const { return {x.data(), static_cast<std::size_t>(x.size())}; }
  std::span<cplx> out() { return {y.data(), static_cast<std::size_t>(y.size())}; }
};

Fixture& fixture(int n) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fixture>(n);
  return *slot;
}

void set_counters(benchmark::State& state, const Fixture& f) {
  state.counters["dim"] = static_cast<double>(f.basis->size());
  state.counters["nnz"] = static_cast<double>(f.csr.nnz());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.csr.nnz()));
}

void BM_CsrSerial(benchmark::State& state) {
  auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    csr_matvec_serial(f.csr, f.in(), f.out());
    benchmark::DoNotOptimize(f.y.data());
  }
  set_counters(state, f);
}

void BM_CsrParallel(benchmark::State& state) {
  auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    csr_matvec(f.csr, f.in(), f.out());
    benchmark::DoNotOptimize(f.y.data());
  }
  set_counters(state, f);
}

void BM_MatrixFreeSerial(benchmark::State& state) {
  auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    term_matvec_serial(*f.basis, f.table, f.in(), f.out());
    benchmark::DoNotOptimize(f.y.data());
  }
  set_counters(state, f);
}

void BM_MatrixFreeParallel(benchmark::State& state) {
  auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    term_matvec(*f.basis, f.table, f.in(), f.out());
    benchmark::DoNotOptimize(f.y.data());
  }
  set_counters(state, f);
}

BENCHMARK(BM_CsrSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CsrParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixFreeSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixFreeParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
