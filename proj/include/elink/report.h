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
 * Report documents and their byte-stable encodings.
 *
 * Reports are ordered JSON objects. dump_json writes floats with 17
 * significant digits (%.17g) and non-finite values as null, so two equal
 * reports always encode to the same bytes. Summaries are flat objects; the CSV
 * encoding writes exactly the same formatted values.
 */

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "elink/config.h"
#include "elink/protocols.h"

namespace elink {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char *kToolName = "elink";
inline constexpr const char *kToolVersion = "0.1.0";

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const Json &value);

/// One scalar formatted as in dump_json; strings are written unquoted.
std::string format_scalar(const Json &value);

Json generation_summary(const GenerationReport &report, const ProtocolConfig &config);
Json event_ready_summary(const EventReadyReport &report, const ProtocolConfig &config);
Json memory_summary(const MemoryReport &report, const ProtocolConfig &config);
Json records_json(const std::vector<TrialRecord> &records);

/// Configuration echo. Output location and thread count are left out because
/// they do not change results.
Json config_json(const ExperimentConfig &config);

/// Header line plus one line per row. Every row must have the header's keys.
std::string rows_csv(const std::vector<std::string> &leading, const std::vector<std::vector<Json>> &leading_values,
                     const std::vector<Json> &summaries);

}  // namespace elink
