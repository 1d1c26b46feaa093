// Copyright 2026 The elink Authors
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

// Serial reference loop against the OpenMP loop on the event-ready analyzer.
// Run with --benchmark_filter and vary OMP_NUM_THREADS to compare scaling.

#include <benchmark/benchmark.h>

#include "elink/kernels.h"
#include "elink/protocols.h"

namespace {

const elink::BellAnalyzer &analyzer() {
    static const elink::BellAnalyzer instance = [] {
        elink::ProtocolConfig c;
        c.source.p0 = 0.02;
        return elink::BellAnalyzer(elink::event_ready_input(c), "p", "A", elink::DetectorSpec{0.9, 1e-5, false});
    }();
    return instance;
}

void BM_BellTrialsSerial(benchmark::State &state) {
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(elink::sample_bell_trials_serial(analyzer(), 1, trials));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BellTrialsParallel(benchmark::State &state) {
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(elink::sample_bell_trials_parallel(analyzer(), 1, trials));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BuildAnalyzer(benchmark::State &state) {
    elink::ProtocolConfig c;
    c.source.p0 = 0.02;
    c.source.emission_order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            elink::BellAnalyzer(elink::event_ready_input(c), "p", "A", elink::DetectorSpec{}));
    }
}

}  // namespace

BENCHMARK(BM_BellTrialsSerial)->Arg(10000)->Arg(100000);
BENCHMARK(BM_BellTrialsParallel)->Arg(10000)->Arg(100000);
BENCHMARK(BM_BuildAnalyzer)->Arg(1)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
