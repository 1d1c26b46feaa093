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

#include "elink/runner.h"

#include <charconv>
#include <cstring>

#include "elink/kernels.h"
#include "elink/optics.h"

namespace elink {

void apply_overrides(ExperimentConfig &config, const Overrides &overrides, const char *env_seed) {
    if (env_seed != nullptr && *env_seed != '\0') {
        std::uint64_t seed = 0;
        const char *end = env_seed + std::strlen(env_seed);
        const auto [ptr, ec] = std::from_chars(env_seed, end, seed);
        if (ec != std::errc() || ptr != end) {
            throw ConfigError(std::string("ELINK_SEED = '") + env_seed + "' is not a non-negative integer");
        }
        config.seed = seed;
    }
    if (overrides.seed) {
        config.seed = overrides.seed;
    }
    if (overrides.mode) {
        config.run.mode = *overrides.mode;
    }
    if (overrides.trials) {
        if (*overrides.trials < 1) {
            throw ConfigError("--trials must be at least 1");
        }
        config.run.trials = *overrides.trials;
    }
    if (overrides.out) {
        config.output_path = *overrides.out;
    }
    if (overrides.format) {
        config.format = *overrides.format;
    }
    if (overrides.threads) {
        config.threads = *overrides.threads;
    }
    if (overrides.serial) {
        config.run.parallel = false;
    }
}

namespace {

std::string element(ElementKind kind, std::vector<std::string> targets, std::optional<double> param = std::nullopt) {
    return to_string(ElementSpec{kind, std::move(targets), param});
}

Json analyzer_pipeline(const std::string &p, const std::string &a) {
    return Json{element(ElementKind::kBeamSplitter, {p, a}, 0.5),
                element(ElementKind::kPolSplitter, {p, kDetectorH, kDetectorV}),
                element(ElementKind::kPolSplitter, {a, kDetectorHPrime, kDetectorVPrime})};
}

std::string visibility_text(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "epr_pair(A, B; v=%.17g)", v);
    return buf;
}

struct PointResult {
    Json summary;
    std::vector<TrialRecord> records;
};

PointResult run_point(Protocol protocol, const ProtocolConfig &run) {
    switch (protocol) {
        case Protocol::kGenerate: {
            const auto report = generate_entanglement(run);
            return {generation_summary(report, run), {}};
        }
        case Protocol::kEventReady: {
            auto report = event_ready_generation(run);
            return {event_ready_summary(report, run), std::move(report.records)};
        }
        case Protocol::kMemory: {
            auto report = memory_store(run);
            return {memory_summary(report, run), std::move(report.records)};
        }
        case Protocol::kSweep:
            break;
    }
    throw ConfigError("a sweep cannot target another sweep");
}

}  // namespace

Json pipeline_json(Protocol protocol, const ProtocolConfig &run) {
    Json out = Json::object();
    out["source"] = dual_ensemble_pipeline(run.source);
    if (protocol == Protocol::kEventReady || (protocol == Protocol::kMemory && run.channel == ChannelSource::kEventReady)) {
        out["ancilla"] = Json::array({visibility_text(run.source.epr_visibility)});
        out["herald"] = analyzer_pipeline("p", "A");
        out["herald_correction"] = Json::array(
            {"psi_plus: " + element(ElementKind::kPhaseShift, {"B.H"}, 3.141592653589793)});
    }
    if (protocol == Protocol::kMemory) {
        if (run.channel == ChannelSource::kIdeal) {
            out.erase("source");
            out["channel"] = Json::array({"psi_minus(S1, S2; B)"});
        }
        out["input"] = Json::array({"input_qubit(q)"});
        out["store"] = analyzer_pipeline("q", "B");
        out["store_correction"] =
            Json::array({"psi_plus: " + element(ElementKind::kPhaseShift, {"S2"}, 3.141592653589793)});
        out["readout"] = Json::array({"relabel(S1 -> r.H, S2 -> r.V)"});
    }
    return out;
}

Json run_experiment(const ExperimentConfig &config) {
    config.validate();
    set_trial_threads(config.threads);
    ProtocolConfig base = config.run;
    base.seed = config.seed.value_or(0);
    const Protocol protocol = config.effective_protocol();

    Json report = Json::object();
    report["schema_version"] = kReportSchemaVersion;
    report["tool"] = kToolName;
    report["version"] = kToolVersion;
    report["protocol"] = std::string(to_string(config.protocol));
    report["mode"] = std::string(to_string(base.mode));
    report["seed"] = config.seed ? Json(*config.seed) : Json();
    report["config"] = config_json(config);
    report["pipeline"] = pipeline_json(protocol, base);

    if (!config.sweep) {
        PointResult result = run_point(protocol, base);
        report["summary"] = std::move(result.summary);
        if (base.keep_records) {
            report["records"] = records_json(result.records);
        }
        return report;
    }

    ExperimentConfig with_seed = config;
    with_seed.run = base;
    const auto runs = expand_sweep(with_seed);
    Json points = Json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        PointResult result = run_point(protocol, runs[i]);
        Json point = Json::object();
        point["index"] = i;
        point["value"] = config.sweep->values[i];
        point["summary"] = std::move(result.summary);
        if (base.keep_records) {
            point["records"] = records_json(result.records);
        }
        points.push_back(std::move(point));
    }
    report["sweep_target"] = std::string(to_string(protocol));
    report["sweep_parameter"] = config.sweep->parameter;
    report["points"] = std::move(points);
    return report;
}

std::string render(const Json &report, OutputFormat format) {
    if (format == OutputFormat::kJson) {
        return dump_json(report);
    }
    const Json protocol = report.at("protocol");
    const Json mode = report.at("mode");
    if (!report.contains("points")) {
        return rows_csv({"protocol", "mode"}, {{protocol, mode}}, {report.at("summary")});
    }
    std::vector<std::vector<Json>> leading;
    std::vector<Json> summaries;
    for (const auto &point : report.at("points")) {
        leading.push_back({report.at("sweep_target"), mode, report.at("sweep_parameter"), point.at("value")});
        summaries.push_back(point.at("summary"));
    }
    return rows_csv({"protocol", "mode", "parameter", "value"}, leading, summaries);
}

}  // namespace elink
