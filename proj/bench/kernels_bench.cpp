// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

// Parallel kernels against their serial twins. Thread count comes from
// OMP_NUM_THREADS / SKQD_THREADS as usual.

#include <numeric>

#include <benchmark/benchmark.h>

#include "skqd/fermion.hpp"
#include "skqd/kernels.hpp"
#include "skqd/linalg.hpp"
#include "skqd/pauli.hpp"

namespace {

using namespace skqd;

void pauli(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const PauliSum h = build_tfim_open(n, 0.1, 0.1);
  const CVector in = linalg::pseudo_random_unit(static_cast<Eigen::Index>(h.dim()), 1);
  CVector out(in.size());
  for (auto _ : state) {
    if (parallel) {
      kernels::pauli_apply(h, in, out);
    } else {
      kernels::pauli_apply_serial(h, in, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.dim()));
}

void sector(benchmark::State& state, bool parallel) {
  const int bath = static_cast<int>(state.range(0));
  const auto h = build_siam_position(SiamParameters::particle_hole_symmetric(bath, 4.0));
  const auto s = half_filling_sector(bath + 1);
  const CVector in = linalg::pseudo_random_unit(static_cast<Eigen::Index>(s->dim()), 2);
  CVector out(in.size());
  for (auto _ : state) {
    if (parallel) {
      kernels::sector_apply(h, *s, in, out);
    } else {
      kernels::sector_apply_serial(h, *s, in, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s->dim()));
}

void projection(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const PauliSum h = build_tfim_open(n, 0.1, 0.1);
  std::vector<ConfigKey> basis(h.dim() / 2);
  std::iota(basis.begin(), basis.end(), ConfigKey{0});
  const kernels::ConnectionFn fn = [&h](ConfigKey k, std::vector<Connection>& out) { h.connections(k, out); };
  for (auto _ : state) {
    auto m = parallel ? kernels::project(fn, basis) : kernels::project_serial(fn, basis);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(basis.size()));
}

void BM_PauliApply(benchmark::State& s) { pauli(s, true); }
void BM_PauliApplySerial(benchmark::State& s) { pauli(s, false); }
void BM_SectorApply(benchmark::State& s) { sector(s, true); }
void BM_SectorApplySerial(benchmark::State& s) { sector(s, false); }
void BM_Project(benchmark::State& s) { projection(s, true); }
void BM_ProjectSerial(benchmark::State& s) { projection(s, false); }

BENCHMARK(BM_PauliApply)->Arg(12)->Arg(16);
BENCHMARK(BM_PauliApplySerial)->Arg(12)->Arg(16);
BENCHMARK(BM_SectorApply)->Arg(7)->Arg(9);
BENCHMARK(BM_SectorApplySerial)->Arg(7)->Arg(9);
BENCHMARK(BM_Project)->Arg(12);
BENCHMARK(BM_ProjectSerial)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
