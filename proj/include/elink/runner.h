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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "elink/config.h"
#include "elink/report.h"

namespace elink {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitRuntime = 3,
};

/// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<RunMode> mode;
    std::optional<std::uint64_t> trials;
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::optional<int> threads;
    bool serial = false;
};

/// Seed precedence: --seed, then ELINK_SEED (passed as `env_seed`, may be
/// null), then the config file. Throws ConfigError on a malformed ELINK_SEED.
void apply_overrides(ExperimentConfig &config, const Overrides &overrides, const char *env_seed);

/// Element strings of the optical chain the protocol runs.
Json pipeline_json(Protocol protocol, const ProtocolConfig &run);

/// Validates, runs and assembles the full report. Single runs carry
/// `summary` (and `records` when requested); sweeps carry `points`.
Json run_experiment(const ExperimentConfig &config);

std::string render(const Json &report, OutputFormat format);

}  // namespace elink
