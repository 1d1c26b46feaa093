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

/**
 * @file
 * Monte Carlo trial loops. Each trial draws from its own TrialStream(seed, i)
 * and writes to slot i, so the serial and OpenMP versions produce identical
 * result vectors. The serial loop is the reference the parallel one is tested
 * against.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "elink/detection.h"

namespace elink {

struct TrialOutcome {
    Herald herald = Herald::kFail;
    std::uint32_t outcome = 0;  // index into the analyzer's outcome table

    bool operator==(const TrialOutcome &) const = default;
};

/// threads <= 0 leaves the OpenMP default in place.
void set_trial_threads(int threads);

template <class Fn>
auto run_trials_serial(std::uint64_t trials, Fn &&fn) {
    std::vector<decltype(fn(std::uint64_t{0}))> out(trials);
    for (std::uint64_t i = 0; i < trials; ++i) {
        out[i] = fn(i);
    }
    return out;
}

template <class Fn>
auto run_trials_parallel(std::uint64_t trials, Fn &&fn) {
    std::vector<decltype(fn(std::uint64_t{0}))> out(trials);
    const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = fn(static_cast<std::uint64_t>(i));
    }
    return out;
}

std::vector<TrialOutcome> sample_bell_trials_serial(const BellAnalyzer &analyzer, std::uint64_t seed,
                                                    std::uint64_t trials);
std::vector<TrialOutcome> sample_bell_trials_parallel(const BellAnalyzer &analyzer, std::uint64_t seed,
                                                      std::uint64_t trials);

/// Raw photon-number outcome indices drawn from a detection model.
std::vector<std::uint32_t> sample_outcomes_serial(const DetectionModel &model, std::uint64_t seed,
                                                  std::uint64_t trials);
std::vector<std::uint32_t> sample_outcomes_parallel(const DetectionModel &model, std::uint64_t seed,
                                                    std::uint64_t trials);

}  // namespace elink
