// Copyright 2026 The smq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "smq/oracle.hpp"
#include "smq/qc.hpp"
#include "smq/sdp.hpp"

using namespace smq;

namespace {

ChoiObject random_hermitian_choi(SpaceList sp, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    int64_t d = total_dim(sp);
    Matrix m(d, d);
    for (int64_t i = 0; i < d; i++) {
        for (int64_t j = 0; j < d; j++) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return ChoiObject(ChoiKind::matrix, std::move(sp), ((m + m.adjoint()) / 2).eval());
}

void bm_link_product(benchmark::State &state) {
    std::mt19937_64 rng(1);
    int64_t d = state.range(0);
    auto a = random_hermitian_choi({{"x", d}, {"y", d}}, rng);
    auto b = random_hermitian_choi({{"y", d}, {"z", d}}, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(link_product(a, b));
    }
}
BENCHMARK(bm_link_product)->Arg(3)->Arg(5)->Arg(9);

void bm_project_subspace(benchmark::State &state) {
    std::mt19937_64 rng(2);
    auto sc = ProcessScenario::query(static_cast<int>(state.range(0)), 2);
    auto w = random_hermitian_choi(sc.slot_spaces(), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_subspace(w, SupermapClass::Gen, sc));
    }
}
BENCHMARK(bm_project_subspace)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void bm_oracle_choi(benchmark::State &state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(phase_oracle_choi(n, 0b1011 & ((1u << n) - 1), 2));
    }
}
BENCHMARK(bm_oracle_choi)->Arg(2)->Arg(3)->Arg(4);

void bm_min_error_small(benchmark::State &state) {
    BooleanFunction f(2, uint64_t{1});
    conic::SolverConfig cfg;
    cfg.tol = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_error(f, 1, SupermapClass::Gen, cfg));
    }
}
BENCHMARK(bm_min_error_small)->Unit(benchmark::kMillisecond);

void bm_qc_process(benchmark::State &state) {
    std::mt19937_64 rng(3);
    auto sc = ProcessScenario::uniform(2, static_cast<int64_t>(state.range(0)), 2, 2);
    auto impl = random_qc_implementation(sc, 2, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_qc_process(impl));
    }
}
BENCHMARK(bm_qc_process)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
