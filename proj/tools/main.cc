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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "elink/runner.h"

namespace {

using elink::ConfigError;
using elink::ExperimentConfig;
using elink::Protocol;

struct Args {
    std::string config_path;
    elink::Overrides overrides;
};

void add_common(CLI::App *cmd, Args &args, bool config_required) {
    auto *config = cmd->add_option("--config", args.config_path, "Experiment config file");
    if (config_required) {
        config->required();
    }
    cmd->add_option("--seed", args.overrides.seed, "Master seed (overrides ELINK_SEED and the config)");
    cmd->add_option("--mode", args.overrides.mode, "exact or sampled")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, elink::RunMode>{{"exact", elink::RunMode::kExact},
                                                  {"sampled", elink::RunMode::kSampled}}));
    cmd->add_option("--trials", args.overrides.trials, "Number of sampled trials")->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.overrides.out, "Report path (default: stdout)");
    cmd->add_option("--format", args.overrides.format, "json or csv")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, elink::OutputFormat>{{"json", elink::OutputFormat::kJson},
                                                       {"csv", elink::OutputFormat::kCsv}}));
    cmd->add_option("--threads", args.overrides.threads, "OpenMP threads for trial loops (0 = default)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--serial", args.overrides.serial, "Use the serial reference trial loop");
}

ExperimentConfig load(const Args &args, std::optional<Protocol> forced) {
    ExperimentConfig config = args.config_path.empty() ? ExperimentConfig{} : elink::load_config(args.config_path);
    if (forced) {
        if (config.sweep) {
            throw ConfigError("config has a [sweep] section; use the sweep subcommand");
        }
        config.protocol = *forced;
    } else if (!config.sweep) {
        throw ConfigError("the sweep subcommand needs a config with a [sweep] section");
    }
    elink::apply_overrides(config, args.overrides, std::getenv("ELINK_SEED"));
    config.validate();
    return config;
}

void emit(const ExperimentConfig &config, const std::string &text) {
    if (config.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write report to '" + config.output_path + "'");
    }
    out << text;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator for heralded photon/atomic-ensemble entanglement and photon memory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", elink::kToolVersion);

    Args args;
    std::map<CLI::App *, std::optional<Protocol>> commands;
    commands[app.add_subcommand("generate", "Post-selected source state and its entanglement")] =
        Protocol::kGenerate;
    commands[app.add_subcommand("event-ready", "Heralded entanglement with an ancilla pair")] =
        Protocol::kEventReady;
    commands[app.add_subcommand("memory", "Teleportation-based photon storage and readout")] = Protocol::kMemory;
    commands[app.add_subcommand("sweep", "Run the config's [sweep] over its values")] = std::nullopt;
    for (auto &[cmd, protocol] : commands) {
        add_common(cmd, args, !protocol.has_value());
    }
    auto *validate = app.add_subcommand("validate", "Check a config file and exit");
    validate->add_option("--config", args.config_path, "Experiment config file")->required();
    validate->add_option("--seed", args.overrides.seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? elink::kExitOk : elink::kExitUsage;
    }

    try {
        if (validate->parsed()) {
            ExperimentConfig config = elink::load_config(args.config_path);
            elink::apply_overrides(config, args.overrides, std::getenv("ELINK_SEED"));
            config.validate();
            std::cout << "ok: " << to_string(config.protocol) << ", " << to_string(config.run.mode) << "\n";
            return elink::kExitOk;
        }
        for (const auto &[cmd, protocol] : commands) {
            if (cmd->parsed()) {
                const ExperimentConfig config = load(args, protocol);
                emit(config, elink::render(elink::run_experiment(config), config.format));
                return elink::kExitOk;
            }
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return elink::kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return elink::kExitRuntime;
    }
    return elink::kExitUsage;
}
