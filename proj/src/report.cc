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

#include "elink/report.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace elink {

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write(std::string &out, const Json &value, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close_pad(2 * depth, ' ');
    switch (value.type()) {
        case Json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto &[key, item] : value.items()) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += pad + Json(key).dump() + ": ";
                write(out, item, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (i > 0) {
                    out += ",\n";
                }
                out += pad;
                write(out, value[i], depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(value.get<double>());
            return;
        default:
            out += value.dump();
    }
}

Json complex_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

void add_sampled(Json &summary, const std::optional<SampledSummary> &sampled) {
    if (!sampled) {
        return;
    }
    summary["trials"] = sampled->estimate.trials;
    summary["successes"] = sampled->estimate.successes;
    summary["success_rate"] = sampled->estimate.rate;
    summary["wilson_low"] = sampled->estimate.wilson_low;
    summary["wilson_high"] = sampled->estimate.wilson_high;
    summary["psi_minus_count"] = sampled->psi_minus;
    summary["psi_plus_count"] = sampled->psi_plus;
    summary["mean_fidelity"] = sampled->mean_fidelity;
}

}  // namespace

std::string dump_json(const Json &value) {
    std::string out;
    write(out, value, 0);
    out += "\n";
    return out;
}

std::string format_scalar(const Json &value) {
    switch (value.type()) {
        case Json::value_t::null:
            return "";
        case Json::value_t::string:
            return value.get<std::string>();
        case Json::value_t::number_float:
            return std::isfinite(value.get<double>()) ? format_double(value.get<double>()) : "";
        case Json::value_t::object:
        case Json::value_t::array:
            throw std::invalid_argument("CSV cells must be scalars");
        default:
            return value.dump();
    }
}

Json generation_summary(const GenerationReport &report, const ProtocolConfig &config) {
    Json s = Json::object();
    s["p0"] = config.source.p0;
    s["vacuum_weight"] = report.vacuum_weight;
    s["entangled_weight"] = report.entangled_weight;
    s["residual_weight"] = report.residual_weight;
    s["purity"] = report.purity;
    s["entanglement_measure"] = "concurrence";
    s["concurrence"] = report.concurrence;
    s["entanglement_entropy"] = report.entanglement_entropy;
    s["target_fidelity"] = report.target_fidelity;
    s["truncation_loss"] = report.truncation_loss;
    return s;
}

Json event_ready_summary(const EventReadyReport &report, const ProtocolConfig &config) {
    Json s = Json::object();
    s["p0"] = config.source.p0;
    s["success_probability"] = report.success_probability;
    s["success_probability_leading_order"] = report.leading_order;
    s["success_probability_closed_form"] = report.closed_form;
    s["psi_minus_probability"] = report.psi_minus_probability;
    s["psi_plus_probability"] = report.psi_plus_probability;
    s["fidelity"] = report.fidelity;
    s["truncation_loss"] = report.truncation_loss;
    add_sampled(s, report.sampled);
    return s;
}

Json memory_summary(const MemoryReport &report, const ProtocolConfig &config) {
    Json s = Json::object();
    s["theta"] = config.memory.theta;
    s["phi"] = config.memory.phi;
    s["success_probability"] = report.success_probability;
    s["psi_minus_probability"] = report.psi_minus_probability;
    s["psi_plus_probability"] = report.psi_plus_probability;
    s["channel_fidelity"] = report.channel_fidelity;
    s["stored_fidelity"] = report.stored_fidelity;
    s["readout_fidelity"] = report.readout_fidelity;
    add_sampled(s, report.sampled);
    return s;
}

Json records_json(const std::vector<TrialRecord> &records) {
    Json out = Json::array();
    for (const auto &r : records) {
        out.push_back(Json{{"index", r.index},
                           {"herald", std::string(to_string(r.herald))},
                           {"success", r.success},
                           {"fidelity", r.fidelity},
                           {"weight", r.weight}});
    }
    return out;
}

Json config_json(const ExperimentConfig &config) {
    const ProtocolConfig &run = config.run;
    Json out = Json::object();
    out["experiment"] = Json{{"protocol", std::string(to_string(config.protocol))},
                             {"mode", std::string(to_string(run.mode))},
                             {"trials", run.trials},
                             {"seed", config.seed ? Json(*config.seed) : Json()},
                             {"cutoff", run.cutoff},
                             {"records", run.keep_records}};
    out["source"] = Json{{"p0", run.source.p0},
                         {"emission_order", run.source.emission_order},
                         {"alpha", complex_json(run.source.alpha)},
                         {"beta", complex_json(run.source.beta)},
                         {"epr_visibility", run.source.epr_visibility}};
    out["detectors"] = Json{{"efficiency", run.detectors.efficiency},
                            {"dark_prob", run.detectors.dark_prob},
                            {"resolving", run.detectors.resolving},
                            {"herald_rule", run.herald_rule.to_string()}};
    out["memory"] = Json{{"theta", run.memory.theta},
                         {"phi", run.memory.phi},
                         {"channel", std::string(to_string(run.channel))},
                         {"retrieval_efficiency", run.retrieval_efficiency}};
    if (config.sweep) {
        out["sweep"] = Json{{"target", std::string(to_string(config.sweep->target))},
                            {"parameter", config.sweep->parameter},
                            {"values", config.sweep->values}};
    }
    return out;
}

std::string rows_csv(const std::vector<std::string> &leading, const std::vector<std::vector<Json>> &leading_values,
                     const std::vector<Json> &summaries) {
    if (summaries.empty() || leading_values.size() != summaries.size()) {
        throw std::invalid_argument("CSV needs one leading row per summary");
    }
    std::vector<std::string> keys = leading;
    for (const auto &[key, value] : summaries.front().items()) {
        keys.push_back(key);
    }
    std::string out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        out += (i ? "," : "") + keys[i];
    }
    out += "\n";
    for (std::size_t row = 0; row < summaries.size(); ++row) {
        std::size_t column = 0;
        for (const auto &cell : leading_values[row]) {
            out += (column++ ? "," : "") + format_scalar(cell);
        }
        for (std::size_t i = leading.size(); i < keys.size(); ++i) {
            if (!summaries[row].contains(keys[i])) {
                throw std::invalid_argument("CSV row lacks column '" + keys[i] + "'");
            }
            out += (column++ ? "," : "") + format_scalar(summaries[row].at(keys[i]));
        }
        out += "\n";
    }
    return out;
}

}  // namespace elink
