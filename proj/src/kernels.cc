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

#include "elink/kernels.h"

#include <omp.h>

namespace elink {

void set_trial_threads(int threads) {
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
}

namespace {

auto bell_trial(const BellAnalyzer &analyzer, std::uint64_t seed) {
    return [&analyzer, seed](std::uint64_t i) {
        TrialStream stream(seed, i);
        const auto trial = analyzer.sample(stream);
        return TrialOutcome{trial.herald, static_cast<std::uint32_t>(trial.outcome)};
    };
}

auto outcome_trial(const DetectionModel &model, std::uint64_t seed) {
    return [&model, seed](std::uint64_t i) {
        TrialStream stream(seed, i);
        return static_cast<std::uint32_t>(model.sample(stream).outcome);
    };
}

}  // namespace

std::vector<TrialOutcome> sample_bell_trials_serial(const BellAnalyzer &analyzer, std::uint64_t seed,
                                                    std::uint64_t trials) {
    return run_trials_serial(trials, bell_trial(analyzer, seed));
}

std::vector<TrialOutcome> sample_bell_trials_parallel(const BellAnalyzer &analyzer, std::uint64_t seed,
                                                      std::uint64_t trials) {
    return run_trials_parallel(trials, bell_trial(analyzer, seed));
}

std::vector<std::uint32_t> sample_outcomes_serial(const DetectionModel &model, std::uint64_t seed,
                                                  std::uint64_t trials) {
    return run_trials_serial(trials, outcome_trial(model, seed));
}

std::vector<std::uint32_t> sample_outcomes_parallel(const DetectionModel &model, std::uint64_t seed,
                                                    std::uint64_t trials) {
    return run_trials_parallel(trials, outcome_trial(model, seed));
}

}  // namespace elink
