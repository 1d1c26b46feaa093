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

#include "elink/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace elink {

namespace {

std::string located(const std::string &message, int line) {
    return line > 0 ? "line " + std::to_string(line) + ": " + message : message;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

ConfigError::ConfigError(const std::string &message, int line)
    : std::runtime_error(located(message, line)), line_(line) {}

std::string_view to_string(Protocol protocol) {
    switch (protocol) {
        case Protocol::kGenerate:
            return "generate";
        case Protocol::kEventReady:
            return "event-ready";
        case Protocol::kMemory:
            return "memory";
        case Protocol::kSweep:
            break;
    }
    return "sweep";
}

std::string_view to_string(RunMode mode) { return mode == RunMode::kExact ? "exact" : "sampled"; }

std::string_view to_string(ChannelSource channel) {
    return channel == ChannelSource::kIdeal ? "ideal" : "event-ready";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::kJson ? "json" : "csv"; }

std::optional<Protocol> parse_protocol(std::string_view text) {
    for (auto p : {Protocol::kGenerate, Protocol::kEventReady, Protocol::kMemory, Protocol::kSweep}) {
        if (text == to_string(p)) {
            return p;
        }
    }
    return std::nullopt;
}

namespace {

struct Entry {
    std::string_view key;
    std::string_view value;
    int line;
};

[[noreturn]] void bad_value(const Entry &e, const std::string &expected) {
    throw ConfigError(std::string(e.key) + " = '" + std::string(e.value) + "' is not " + expected, e.line);
}

double parse_real(const Entry &e) {
    double v = 0.0;
    const auto *end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        bad_value(e, "a real number");
    }
    return v;
}

double parse_range(const Entry &e, double lo, double hi, bool hi_open = false) {
    const double v = parse_real(e);
    if (v < lo || v > hi || (hi_open && v == hi)) {
        throw ConfigError(std::string(e.key) + " = " + std::string(e.value) + " is out of range [" + format_number(lo) +
                              ", " + format_number(hi) + (hi_open ? ")" : "]"),
                          e.line);
    }
    return v;
}

std::uint64_t parse_unsigned(const Entry &e) {
    std::uint64_t v = 0;
    const auto *end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        bad_value(e, "a non-negative integer");
    }
    return v;
}

std::uint64_t parse_unsigned_range(const Entry &e, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t v = parse_unsigned(e);
    if (v < lo || v > hi) {
        throw ConfigError(std::string(e.key) + " = " + std::string(e.value) + " is out of range [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]",
                          e.line);
    }
    return v;
}

bool parse_bool(const Entry &e) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") {
        return true;
    }
    if (e.value == "false" || e.value == "no" || e.value == "0") {
        return false;
    }
    bad_value(e, "a boolean (true/false)");
}

// Accepts "a", "bi", "a+bi", "a-bi" and "i".
Complex parse_complex(const Entry &e) {
    std::string s;
    for (char c : e.value) {
        if (c != ' ') {
            s.push_back(c);
        }
    }
    auto real_of = [&](std::string_view text) {
        if (text.empty() || text == "+") {
            return 1.0;
        }
        if (text == "-") {
            return -1.0;
        }
        if (text.front() == '+') {
            text.remove_prefix(1);
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            bad_value(e, "a complex number like 0.6+0.8i");
        }
        return v;
    };
    if (s.empty()) {
        bad_value(e, "a complex number like 0.6+0.8i");
    }
    if (s.back() != 'i') {
        return {real_of(s), 0.0};
    }
    s.pop_back();
    // Split at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        return {0.0, real_of(s)};
    }
    return {real_of(std::string_view(s).substr(0, split)), real_of(std::string_view(s).substr(split))};
}

std::vector<double> parse_list(const Entry &e) {
    std::vector<double> out;
    std::string_view rest = e.value;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        out.push_back(parse_real(Entry{e.key, item, e.line}));
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    if (out.empty()) {
        bad_value(e, "a non-empty comma-separated list");
    }
    return out;
}

std::pair<Complex, Complex> amplitudes_from_pass_ratio(double t) {
    return {std::sqrt(t / (1.0 + t)), std::sqrt(1.0 / (1.0 + t))};
}

struct ParseState {
    ExperimentConfig config;
    std::optional<int> alpha_line;
    std::optional<int> beta_line;
    std::optional<int> t_line;
    std::optional<int> order_line;
    std::optional<int> sweep_line;
    std::optional<Protocol> sweep_target;
    std::optional<std::string> sweep_parameter;
    std::optional<std::vector<double>> sweep_values;
};

using Handler = std::function<void(ParseState &, const Entry &)>;

const std::map<std::string, std::map<std::string, Handler>> &handlers() {
    static const std::map<std::string, std::map<std::string, Handler>> table = {
        {"experiment",
         {
             {"protocol",
              [](ParseState &s, const Entry &e) {
                  const auto p = parse_protocol(e.value);
                  if (!p) {
                      bad_value(e, "one of generate, event-ready, memory, sweep");
                  }
                  s.config.protocol = *p;
              }},
             {"mode",
              [](ParseState &s, const Entry &e) {
                  if (e.value == "exact") {
                      s.config.run.mode = RunMode::kExact;
                  } else if (e.value == "sampled") {
                      s.config.run.mode = RunMode::kSampled;
                  } else {
                      bad_value(e, "exact or sampled");
                  }
              }},
             {"trials",
              [](ParseState &s, const Entry &e) {
                  s.config.run.trials = parse_unsigned_range(e, 1, std::uint64_t{1} << 40);
              }},
             {"seed", [](ParseState &s, const Entry &e) { s.config.seed = parse_unsigned(e); }},
             {"cutoff",
              [](ParseState &s, const Entry &e) { s.config.run.cutoff = static_cast<int>(parse_unsigned_range(e, 2, 16)); }},
             {"threads",
              [](ParseState &s, const Entry &e) {
                  s.config.threads = static_cast<int>(parse_unsigned_range(e, 0, 1024));
              }},
             {"records", [](ParseState &s, const Entry &e) { s.config.run.keep_records = parse_bool(e); }},
         }},
        {"source",
         {
             {"p0", [](ParseState &s, const Entry &e) { s.config.run.source.p0 = parse_range(e, 0.0, 0.2); }},
             {"emission_order",
              [](ParseState &s, const Entry &e) {
                  s.config.run.source.emission_order = static_cast<int>(parse_unsigned_range(e, 1, 8));
                  s.order_line = e.line;
              }},
             {"alpha",
              [](ParseState &s, const Entry &e) {
                  s.config.run.source.alpha = parse_complex(e);
                  s.alpha_line = e.line;
              }},
             {"beta",
              [](ParseState &s, const Entry &e) {
                  s.config.run.source.beta = parse_complex(e);
                  s.beta_line = e.line;
              }},
             {"t",
              [](ParseState &s, const Entry &e) {
                  std::tie(s.config.run.source.alpha, s.config.run.source.beta) =
                      amplitudes_from_pass_ratio(parse_range(e, 0.0, 1.0));
                  s.t_line = e.line;
              }},
             {"epr_visibility",
              [](ParseState &s, const Entry &e) { s.config.run.source.epr_visibility = parse_range(e, 0.0, 1.0); }},
         }},
        {"detectors",
         {
             {"efficiency",
              [](ParseState &s, const Entry &e) { s.config.run.detectors.efficiency = parse_range(e, 0.0, 1.0); }},
             {"dark_prob",
              [](ParseState &s, const Entry &e) {
                  s.config.run.detectors.dark_prob = parse_range(e, 0.0, 1.0, true);
              }},
             {"resolving", [](ParseState &s, const Entry &e) { s.config.run.detectors.resolving = parse_bool(e); }},
             {"herald_rule",
              [](ParseState &s, const Entry &e) {
                  try {
                      s.config.run.herald_rule = HeraldRule::parse(e.value);
                  } catch (const ValidationError &err) {
                      throw ConfigError(std::string("herald_rule: ") + err.what(), e.line);
                  }
              }},
         }},
        {"memory",
         {
             {"theta",
              [](ParseState &s, const Entry &e) { s.config.run.memory.theta = parse_range(e, 0.0, std::numbers::pi); }},
             {"phi",
              [](ParseState &s, const Entry &e) {
                  s.config.run.memory.phi = parse_range(e, 0.0, 2.0 * std::numbers::pi, true);
              }},
             {"channel",
              [](ParseState &s, const Entry &e) {
                  if (e.value == "ideal") {
                      s.config.run.channel = ChannelSource::kIdeal;
                  } else if (e.value == "event-ready") {
                      s.config.run.channel = ChannelSource::kEventReady;
                  } else {
                      bad_value(e, "ideal or event-ready");
                  }
              }},
             {"retrieval_efficiency",
              [](ParseState &s, const Entry &e) { s.config.run.retrieval_efficiency = parse_range(e, 0.0, 1.0); }},
         }},
        {"sweep",
         {
             {"target",
              [](ParseState &s, const Entry &e) {
                  const auto p = parse_protocol(e.value);
                  if (!p || *p == Protocol::kSweep) {
                      bad_value(e, "one of generate, event-ready, memory");
                  }
                  s.sweep_target = *p;
                  s.sweep_line = e.line;
              }},
             {"parameter",
              [](ParseState &s, const Entry &e) {
                  const auto *it = std::find(std::begin(kSweepParameters), std::end(kSweepParameters), e.value);
                  if (it == std::end(kSweepParameters)) {
                      bad_value(e, "one of p0, theta, phi, t, eta, dark_prob, emission_order");
                  }
                  s.sweep_parameter = std::string(e.value);
                  s.sweep_line = e.line;
              }},
             {"values",
              [](ParseState &s, const Entry &e) {
                  s.sweep_values = parse_list(e);
                  s.sweep_line = e.line;
              }},
         }},
        {"output",
         {
             {"path", [](ParseState &s, const Entry &e) { s.config.output_path = std::string(e.value); }},
             {"format",
              [](ParseState &s, const Entry &e) {
                  if (e.value == "json") {
                      s.config.format = OutputFormat::kJson;
                  } else if (e.value == "csv") {
                      s.config.format = OutputFormat::kCsv;
                  } else {
                      bad_value(e, "json or csv");
                  }
              }},
         }},
    };
    return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ParseState state;
    std::string section;
    std::set<std::string> seen;
    int line_no = 0;
    std::string_view rest = text;
    while (!rest.empty()) {
        ++line_no;
        const auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty() || line.front() == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header '" + std::string(line) + "'", line_no);
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!handlers().contains(section)) {
                throw ConfigError("unknown section [" + section + "]", line_no);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError("key '" + std::string(key) + "' appears before any section", line_no);
        }
        const auto &keys = handlers().at(section);
        const auto handler = keys.find(std::string(key));
        if (handler == keys.end()) {
            throw ConfigError("unknown key '" + std::string(key) + "' in [" + section + "]", line_no);
        }
        if (!seen.insert(section + "." + std::string(key)).second) {
            throw ConfigError("duplicate key '" + std::string(key) + "' in [" + section + "]", line_no);
        }
        if (value.empty()) {
            throw ConfigError("key '" + std::string(key) + "' has no value", line_no);
        }
        handler->second(state, Entry{key, value, line_no});
    }

    ExperimentConfig &config = state.config;
    if (state.t_line && (state.alpha_line || state.beta_line)) {
        throw ConfigError("t cannot be combined with alpha or beta", *state.t_line);
    }
    if (state.alpha_line || state.beta_line) {
        if (state.alpha_line.has_value() != state.beta_line.has_value()) {
            throw ConfigError("alpha and beta must be given together", state.alpha_line.value_or(state.beta_line.value_or(0)));
        }
        const double norm = std::norm(config.run.source.alpha) + std::norm(config.run.source.beta);
        if (std::abs(norm - 1.0) > 1e-12) {
            throw ConfigError("alpha and beta must satisfy |alpha|^2 + |beta|^2 = 1 (got " + format_number(norm) + ")",
                              *state.beta_line);
        }
    }
    if (state.order_line && 2 * config.run.source.emission_order > config.run.cutoff) {
        throw ConfigError("emission_order " + std::to_string(config.run.source.emission_order) +
                              " needs cutoff >= " + std::to_string(2 * config.run.source.emission_order),
                          *state.order_line);
    }
    if (state.sweep_line) {
        if (!state.sweep_target || !state.sweep_parameter || !state.sweep_values) {
            throw ConfigError("[sweep] needs target, parameter and values", *state.sweep_line);
        }
        config.sweep = SweepSpec{*state.sweep_target, *state.sweep_parameter, *state.sweep_values};
    }
    if (config.protocol == Protocol::kSweep && !config.sweep) {
        throw ConfigError("protocol = sweep needs a [sweep] section");
    }
    if (config.protocol != Protocol::kSweep && config.sweep) {
        throw ConfigError("[sweep] is only valid with protocol = sweep", *state.sweep_line);
    }
    if (config.sweep) {
        try {
            expand_sweep(config);
        } catch (const ConfigError &err) {
            throw ConfigError(err.what(), *state.sweep_line);
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

Protocol ExperimentConfig::effective_protocol() const { return sweep ? sweep->target : protocol; }

void ExperimentConfig::validate() const {
    if (run.mode == RunMode::kSampled && !seed) {
        throw ConfigError("sampled mode needs a seed (config, ELINK_SEED or --seed)");
    }
    try {
        if (sweep) {
            for (const auto &point : expand_sweep(*this)) {
                point.validate();
            }
        } else {
            run.validate();
        }
    } catch (const ValidationError &err) {
        throw ConfigError(err.what());
    }
}

void apply_parameter(ProtocolConfig &run, std::string_view parameter, double value) {
    const std::string shown = format_number(value);
    auto check = [&](double lo, double hi, bool hi_open = false) {
        if (!(value >= lo && value <= hi) || (hi_open && value == hi)) {
            throw ConfigError("sweep value " + std::string(parameter) + " = " + shown + " is out of range [" +
                              format_number(lo) + ", " + format_number(hi) + (hi_open ? ")" : "]"));
        }
    };
    if (parameter == "p0") {
        check(0.0, 0.2);
        run.source.p0 = value;
    } else if (parameter == "theta") {
        check(0.0, std::numbers::pi);
        run.memory.theta = value;
    } else if (parameter == "phi") {
        check(0.0, 2.0 * std::numbers::pi, true);
        run.memory.phi = value;
    } else if (parameter == "t") {
        check(0.0, 1.0);
        std::tie(run.source.alpha, run.source.beta) = amplitudes_from_pass_ratio(value);
    } else if (parameter == "eta") {
        check(0.0, 1.0);
        run.detectors.efficiency = value;
    } else if (parameter == "dark_prob") {
        check(0.0, 1.0, true);
        run.detectors.dark_prob = value;
    } else if (parameter == "emission_order") {
        if (value != std::floor(value) || value < 1.0 || 2.0 * value > run.cutoff) {
            throw ConfigError("sweep value emission_order = " + shown + " must be an integer in [1, " +
                              std::to_string(run.cutoff / 2) + "]");
        }
        run.source.emission_order = static_cast<int>(value);
    } else {
        throw ConfigError("unknown sweep parameter '" + std::string(parameter) + "'");
    }
}

std::vector<ProtocolConfig> expand_sweep(const ExperimentConfig &config) {
    if (!config.sweep) {
        return {config.run};
    }
    std::vector<ProtocolConfig> runs;
    for (double v : config.sweep->values) {
        ProtocolConfig run = config.run;
        apply_parameter(run, config.sweep->parameter, v);
        runs.push_back(std::move(run));
    }
    return runs;
}

}  // namespace elink
