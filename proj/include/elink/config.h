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
 * Experiment configuration files.
 *
 * The format is sectioned key/value text:
 *
 *     # event-ready run, sampled
 *     [experiment]
 *     protocol = event-ready
 *     mode = sampled
 *     trials = 100000
 *     seed = 7
 *
 *     [source]
 *     p0 = 0.02
 *
 * Sections: experiment, source, detectors, memory, sweep, output. Every key is
 * optional except `seed` in sampled mode and the sweep keys for a sweep.
 * Unknown sections and keys are errors. Complex amplitudes are written as
 * `0.6+0.8i`, `-0.5i` or `0.7071`.
 *
 * [source] t is a shorthand for the pass ratio on ensemble-1 light: it sets
 * alpha = sqrt(t / (1 + t)), beta = sqrt(1 / (1 + t)) and cannot be combined
 * with alpha or beta.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "elink/protocols.h"

namespace elink {

/// A configuration problem. `line` is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string &message, int line = 0);
    int line() const { return line_; }

  private:
    int line_;
};

enum class Protocol { kGenerate, kEventReady, kMemory, kSweep };
enum class OutputFormat { kJson, kCsv };

std::string_view to_string(Protocol protocol);
std::string_view to_string(RunMode mode);
std::string_view to_string(ChannelSource channel);
std::string_view to_string(OutputFormat format);
std::optional<Protocol> parse_protocol(std::string_view text);

inline constexpr const char *kSweepParameters[] = {"p0", "theta", "phi", "t", "eta", "dark_prob", "emission_order"};

struct SweepSpec {
    Protocol target = Protocol::kEventReady;
    std::string parameter;
    std::vector<double> values;
};

struct ExperimentConfig {
    Protocol protocol = Protocol::kEventReady;
    ProtocolConfig run;
    std::optional<std::uint64_t> seed;
    int threads = 0;  // 0 keeps the OpenMP default
    std::optional<SweepSpec> sweep;
    std::string output_path;  // empty writes to stdout
    OutputFormat format = OutputFormat::kJson;

    /// Cross-field checks. Throws ConfigError.
    void validate() const;

    /// The protocol that actually runs: the sweep target for sweeps.
    Protocol effective_protocol() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string &path);

/// Sets one sweep parameter on a run. `eta` is the detector efficiency and
/// `t` the ensemble-1 pass ratio. Throws ConfigError on unknown names or
/// out-of-range values.
void apply_parameter(ProtocolConfig &run, std::string_view parameter, double value);

/// One run per sweep value, in declared order.
std::vector<ProtocolConfig> expand_sweep(const ExperimentConfig &config);

}  // namespace elink
