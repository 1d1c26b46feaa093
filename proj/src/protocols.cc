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

#include "elink/protocols.h"

#include <cmath>
#include <numbers>

#include "elink/kernels.h"
#include "elink/optics.h"

namespace elink {

void ProtocolConfig::validate() const {
    source.validate(cutoff);
    detectors.validate();
    if (trials < 1) {
        throw ValidationError("trials must be at least 1");
    }
    if (!(memory.theta >= 0.0 && memory.theta <= std::numbers::pi)) {
        throw ValidationError("theta must lie in [0, pi]");
    }
    if (!(memory.phi >= 0.0 && memory.phi < 2.0 * std::numbers::pi)) {
        throw ValidationError("phi must lie in [0, 2 pi)");
    }
    if (!(retrieval_efficiency >= 0.0 && retrieval_efficiency <= 1.0)) {
        throw ValidationError("retrieval_efficiency must lie in [0, 1]");
    }
}

SuccessEstimate estimate_success(std::uint64_t successes, std::uint64_t trials) {
    SuccessEstimate e;
    e.trials = trials;
    e.successes = successes;
    if (trials == 0) {
        return e;
    }
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    e.rate = p;
    e.wilson_low = std::max(0.0, centre - half);
    e.wilson_high = std::min(1.0, centre + half);
    return e;
}

namespace {

// Weighted union of mixed states over one registry.
MixedState mix(const std::vector<std::pair<double, const MixedState *>> &parts) {
    std::vector<Branch> branches;
    double total = 0.0;
    for (const auto &[w, state] : parts) {
        if (w <= 0.0 || state == nullptr) {
            continue;
        }
        for (const auto &b : state->branches()) {
            branches.push_back({w * b.weight, b.state});
            total += w * b.weight;
        }
    }
    for (auto &b : branches) {
        b.weight /= total;
    }
    return MixedState(std::move(branches));
}

MixedState flip_phase(const MixedState &state, const char *mode) {
    return state.map([mode](const PureState &s) { return phase_shift(s, mode, std::numbers::pi); });
}

struct HeraldSummary {
    BellAnalyzer::ClassResult minus;
    BellAnalyzer::ClassResult plus;
    std::optional<MixedState> plus_corrected;
    std::optional<MixedState> combined;
};

HeraldSummary summarize_heralds(const BellAnalyzer &analyzer, const char *correction_mode) {
    HeraldSummary s{analyzer.exact(Herald::kPsiMinus), analyzer.exact(Herald::kPsiPlus), std::nullopt, std::nullopt};
    if (s.plus.conditional) {
        s.plus_corrected = flip_phase(*s.plus.conditional, correction_mode);
    }
    if (s.minus.probability + s.plus.probability > 0.0) {
        s.combined = mix({{s.minus.probability, s.minus.conditional ? &*s.minus.conditional : nullptr},
                          {s.plus.probability, s.plus_corrected ? &*s.plus_corrected : nullptr}});
    }
    return s;
}

// Fidelity of each outcome's conditional state after the correction its herald calls for.
struct OutcomeFidelities {
    std::vector<double> as_minus;
    std::vector<double> as_plus;

    double operator()(std::uint32_t outcome, Herald herald) const {
        switch (herald) {
            case Herald::kPsiMinus:
                return as_minus[outcome];
            case Herald::kPsiPlus:
                return as_plus[outcome];
            case Herald::kFail:
                break;
        }
        return 0.0;
    }
};

OutcomeFidelities outcome_fidelities(const DetectionModel &model, const PureState &target,
                                     const char *correction_mode) {
    OutcomeFidelities f;
    for (const auto &outcome : model.outcomes()) {
        f.as_minus.push_back(fidelity(target, outcome.conditional));
        f.as_plus.push_back(fidelity(target, flip_phase(outcome.conditional, correction_mode)));
    }
    return f;
}

std::vector<TrialRecord> exact_records(const BellAnalyzer &analyzer, const OutcomeFidelities &fids) {
    std::vector<TrialRecord> records;
    const auto &outcomes = analyzer.model().outcomes();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Herald h = analyzer.ideal_herald(i);
        records.push_back({i, h, h != Herald::kFail, fids(static_cast<std::uint32_t>(i), h), outcomes[i].probability});
    }
    return records;
}

SampledSummary run_sampled(const ProtocolConfig &config, const BellAnalyzer &analyzer, const PureState &target,
                           const char *correction_mode, std::vector<TrialRecord> *records) {
    const auto fids = outcome_fidelities(analyzer.model(), target, correction_mode);
    const auto trials = config.parallel ? sample_bell_trials_parallel(analyzer, config.seed, config.trials)
                                        : sample_bell_trials_serial(analyzer, config.seed, config.trials);
    SampledSummary summary;
    double fidelity_sum = 0.0;
    for (std::uint64_t i = 0; i < trials.size(); ++i) {
        const auto &t = trials[i];
        const bool success = t.herald != Herald::kFail;
        const double f = fids(t.outcome, t.herald);
        if (t.herald == Herald::kPsiMinus) {
            ++summary.psi_minus;
        } else if (t.herald == Herald::kPsiPlus) {
            ++summary.psi_plus;
        }
        if (success) {
            fidelity_sum += f;
        }
        if (records != nullptr) {
            records->push_back({i, t.herald, success, f, 1.0});
        }
    }
    const std::uint64_t successes = summary.psi_minus + summary.psi_plus;
    summary.estimate = estimate_success(successes, config.trials);
    summary.mean_fidelity = successes > 0 ? fidelity_sum / static_cast<double>(successes) : 0.0;
    return summary;
}

}  // namespace

PureState entangled_target(const RegistryPtr &registry, Complex alpha, Complex beta) {
    const ModeRegistry &r = *registry;
    return PureState(registry, {{occupation(r, {{"S1", 1}, {"p.H", 1}}), alpha},
                                {occupation(r, {{"S2", 1}, {"p.V", 1}}), beta}});
}

GenerationReport generate_entanglement(const ProtocolConfig &config) {
    config.validate();
    const PureState source = dual_ensemble_source(config.source, config.cutoff);
    const ModeRegistry &registry = source.registry();
    const std::size_t h = registry.index_of("p.H");
    const std::size_t v = registry.index_of("p.V");
    std::vector<std::size_t> loss;
    for (std::size_t i = 0; i < registry.size(); ++i) {
        if (registry.mode(i).kind == ModeKind::kLoss) {
            loss.push_back(i);
        }
    }

    // Sector key: photons in p, then each loss occupation.
    std::map<Occupation, PureState::Amplitudes> sectors;
    for (const auto &[occ, amp] : source.amplitudes()) {
        Occupation key{static_cast<std::uint8_t>(occ[h] + occ[v])};
        for (auto l : loss) {
            key.push_back(occ[l]);
        }
        sectors[key].emplace(occ, amp);
    }
    const Occupation vacuum_key(1 + loss.size(), 0);
    Occupation one_key = vacuum_key;
    one_key[0] = 1;

    std::vector<PureState> parts;
    std::optional<PureState> entangled;
    const double total = source.norm_squared();
    double vacuum_weight = 0.0;
    double entangled_weight = 0.0;
    for (auto &[key, amps] : sectors) {
        PureState part(source.registry_ptr(), std::move(amps), source.truncation_loss());
        if (key == vacuum_key) {
            vacuum_weight = part.norm_squared() / total;
        } else if (key == one_key) {
            entangled_weight = part.norm_squared() / total;
            entangled = part.normalized();
        }
        parts.push_back(std::move(part));
    }

    GenerationReport report{.state = MixedState::from_unnormalized(parts)};
    report.vacuum_weight = vacuum_weight;
    report.entangled_weight = entangled_weight;
    report.residual_weight = std::max(0.0, 1.0 - vacuum_weight - entangled_weight);
    std::vector<std::string> all;
    for (const auto &m : registry.modes()) {
        all.push_back(m.name);
    }
    report.purity = purity(reduced_density(report.state, all, 4096).rho);
    report.truncation_loss = source.truncation_loss();
    if (entangled) {
        const MixedState branch = MixedState::pure(*entangled);
        report.concurrence = concurrence(two_qubit_density(branch, QubitEncoding::dual_rail("S1", "S2"),
                                                           QubitEncoding::dual_rail("p.H", "p.V")));
        report.entanglement_entropy = entropy(*entangled, {"S1", "S2"});
        report.target_fidelity =
            fidelity(entangled_target(source.registry_ptr(), config.source.alpha, config.source.beta), branch);
    }
    return report;
}

std::string_view to_string(BellState state) {
    switch (state) {
        case BellState::kPhiPlus:
            return "phi_plus";
        case BellState::kPhiMinus:
            return "phi_minus";
        case BellState::kPsiPlus:
            return "psi_plus";
        case BellState::kPsiMinus:
            break;
    }
    return "psi_minus";
}

BellDecomposition bell_decompose(const PureState &state, const QubitEncoding &a, const QubitEncoding &b) {
    a.validate();
    b.validate();
    const ModeRegistry &registry = state.registry();
    std::vector<std::size_t> modes_a;
    std::vector<std::size_t> modes_b;
    for (const auto &m : a.modes) {
        modes_a.push_back(registry.index_of(m));
    }
    for (const auto &m : b.modes) {
        modes_b.push_back(registry.index_of(m));
    }

    auto logical = [](const Occupation &occ, const std::vector<std::size_t> &modes, const QubitEncoding &enc) {
        Occupation part;
        for (auto m : modes) {
            part.push_back(occ[m]);
        }
        if (part == enc.zero) {
            return 0;
        }
        if (part == enc.one) {
            return 1;
        }
        throw ValidationError("state leaves the encoded qubit sector");
    };
    auto embed = [&](Occupation rest, int x, int y) {
        for (std::size_t i = 0; i < modes_a.size(); ++i) {
            rest[modes_a[i]] = (x == 0 ? a.zero : a.one)[i];
        }
        for (std::size_t i = 0; i < modes_b.size(); ++i) {
            rest[modes_b[i]] = (y == 0 ? b.zero : b.one)[i];
        }
        return rest;
    };

    // Split psi(x, y, rest) by the logical pair.
    std::array<std::array<PureState::Amplitudes, 2>, 2> split;
    for (const auto &[occ, amp] : state.amplitudes()) {
        const int x = logical(occ, modes_a, a);
        const int y = logical(occ, modes_b, b);
        Occupation rest = occ;
        for (auto m : modes_a) {
            rest[m] = 0;
        }
        for (auto m : modes_b) {
            rest[m] = 0;
        }
        split[x][y][rest] += amp;
    }

    const double s = kInvSqrt2;
    // Bell amplitudes B[x][y] for Phi+, Phi-, Psi+, Psi-.
    const std::array<std::array<std::array<double, 2>, 2>, 4> bell{{
        {{{s, 0.0}, {0.0, s}}},
        {{{s, 0.0}, {0.0, -s}}},
        {{{0.0, s}, {s, 0.0}}},
        {{{0.0, s}, {-s, 0.0}}},
    }};
    const std::array<BellState, 4> names{BellState::kPhiPlus, BellState::kPhiMinus, BellState::kPsiPlus,
                                         BellState::kPsiMinus};

    BellDecomposition out;
    PureState::Amplitudes reconstruction;
    for (std::size_t k = 0; k < 4; ++k) {
        PureState::Amplitudes rest;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                if (bell[k][x][y] == 0.0) {
                    continue;
                }
                for (const auto &[occ, amp] : split[x][y]) {
                    rest[occ] += bell[k][x][y] * amp;
                }
            }
        }
        PureState rest_state(state.registry_ptr(), std::move(rest));
        BellComponent component{names[k], Complex{}, PureState::vacuum(state.registry_ptr()).scaled(0.0)};
        if (!rest_state.empty()) {
            const Complex first = rest_state.amplitudes().begin()->second;
            component.coefficient = std::sqrt(rest_state.norm_squared()) * std::polar(1.0, std::arg(first));
            component.rest = rest_state.scaled(1.0 / component.coefficient);
            for (const auto &[occ, amp] : rest_state.amplitudes()) {
                for (int x = 0; x < 2; ++x) {
                    for (int y = 0; y < 2; ++y) {
                        if (bell[k][x][y] != 0.0) {
                            reconstruction[embed(occ, x, y)] += bell[k][x][y] * amp;
                        }
                    }
                }
            }
        }
        out.components.push_back(std::move(component));
    }
    PureState rebuilt(state.registry_ptr(), std::move(reconstruction));
    out.reconstruction_error = std::sqrt((state + rebuilt.scaled(-1.0)).norm_squared());
    return out;
}

PureState psi_minus_target(const RegistryPtr &registry) {
    const ModeRegistry &r = *registry;
    return PureState(registry, {{occupation(r, {{"S1", 1}, {"B.V", 1}}), kInvSqrt2},
                                {occupation(r, {{"S2", 1}, {"B.H", 1}}), -kInvSqrt2}});
}

MixedState event_ready_input(const ProtocolConfig &config) {
    const PureState source = dual_ensemble_source(config.source, config.cutoff);
    const MixedState pair = werner_pair(config.source.epr_visibility, "A", "B", config.cutoff);
    return trace_out_kind(tensor(MixedState::pure(source), pair), ModeKind::kLoss);
}

EventReadyReport event_ready_generation(const ProtocolConfig &config) {
    config.validate();
    const MixedState input = event_ready_input(config);
    EventReadyReport report;
    report.truncation_loss = input.truncation_loss();
    report.leading_order = config.source.p0 / 2.0;
    report.closed_form = config.source.p0 / (2.0 * (1.0 + config.source.p0));

    const BellAnalyzer exact(input, "p", "A", DetectorSpec::ideal(), config.herald_rule);
    const HeraldSummary heralds = summarize_heralds(exact, "B.H");
    report.psi_minus_probability = heralds.minus.probability;
    report.psi_plus_probability = heralds.plus.probability;
    report.success_probability = heralds.minus.probability + heralds.plus.probability;
    report.psi_minus_state = heralds.minus.conditional;
    report.psi_plus_corrected = heralds.plus_corrected;
    report.heralded = heralds.combined;

    const PureState target = psi_minus_target(exact.model().outcomes().front().conditional.registry_ptr());
    if (report.heralded) {
        report.fidelity = fidelity(target, *report.heralded);
    }

    if (config.mode == RunMode::kExact) {
        if (config.keep_records) {
            report.records = exact_records(exact, outcome_fidelities(exact.model(), target, "B.H"));
        }
    } else {
        const BellAnalyzer sampler(input, "p", "A", config.detectors, config.herald_rule);
        report.sampled = run_sampled(config, sampler, target, "B.H", config.keep_records ? &report.records : nullptr);
    }
    return report;
}

PureState input_qubit(const MemoryInput &input, std::string_view path, int cutoff) {
    ModeRegistry registry(cutoff);
    registry.add(photonic_mode(std::string(path), Polarization::kH));
    registry.add(photonic_mode(std::string(path), Polarization::kV));
    const std::string p(path);
    return encoded_qubit(make_registry(std::move(registry)), p + ".H", p + ".V", input);
}

PureState encoded_qubit(const RegistryPtr &registry, std::string_view first, std::string_view second,
                        const MemoryInput &input) {
    const ModeRegistry &r = *registry;
    return PureState(registry, {{occupation(r, {{first, 1}}), std::cos(input.theta)},
                                {occupation(r, {{second, 1}}), std::polar(std::sin(input.theta), input.phi)}});
}

namespace {

MixedState ideal_channel(int cutoff) {
    ModeRegistry registry(cutoff);
    registry.add(atomic_mode("S1"));
    registry.add(atomic_mode("S2"));
    registry.add(photonic_mode("B", Polarization::kH));
    registry.add(photonic_mode("B", Polarization::kV));
    return MixedState::pure(psi_minus_target(make_registry(std::move(registry))));
}

}  // namespace

MemoryReport memory_store(const ProtocolConfig &config) {
    config.validate();
    MemoryReport report;
    std::optional<MixedState> channel;
    if (config.channel == ChannelSource::kIdeal) {
        channel = ideal_channel(config.cutoff);
    } else {
        ProtocolConfig herald_config = config;
        herald_config.mode = RunMode::kExact;
        herald_config.keep_records = false;
        auto heralded = event_ready_generation(herald_config).heralded;
        if (!heralded) {
            throw ValidationError("event-ready channel was never heralded (p0 = 0?)");
        }
        channel = std::move(heralded);
    }
    report.channel_fidelity = fidelity(psi_minus_target(channel->registry_ptr()), *channel);

    const MixedState input = tensor(*channel, MixedState::pure(input_qubit(config.memory, "q", config.cutoff)));
    const BellAnalyzer exact(input, "q", "B", DetectorSpec::ideal(), config.herald_rule);
    const HeraldSummary heralds = summarize_heralds(exact, "S2");
    report.psi_minus_probability = heralds.minus.probability;
    report.psi_plus_probability = heralds.plus.probability;
    report.success_probability = heralds.minus.probability + heralds.plus.probability;
    report.stored = heralds.combined;

    const RegistryPtr atomic_registry = exact.model().outcomes().front().conditional.registry_ptr();
    const PureState target = encoded_qubit(atomic_registry, "S1", "S2", config.memory);
    if (report.stored) {
        report.stored_fidelity = fidelity(target, *report.stored);
        const MixedState readout = memory_readout(*report.stored, config.retrieval_efficiency);
        report.readout_fidelity =
            fidelity_report(encoded_qubit(readout.registry_ptr(), "r.H", "r.V", config.memory), readout);
    }

    if (config.mode == RunMode::kExact) {
        if (config.keep_records) {
            report.records = exact_records(exact, outcome_fidelities(exact.model(), target, "S2"));
        }
    } else {
        const BellAnalyzer sampler(input, "q", "B", config.detectors, config.herald_rule);
        report.sampled = run_sampled(config, sampler, target, "S2", config.keep_records ? &report.records : nullptr);
    }
    return report;
}

MixedState memory_readout(const MixedState &atomic, double efficiency, std::string_view path) {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw ValidationError("retrieval efficiency must lie in [0, 1]");
    }
    const ModeRegistry &registry = atomic.registry();
    const std::size_t s1 = registry.index_of("S1");
    const std::size_t s2 = registry.index_of("S2");
    for (const auto &b : atomic.branches()) {
        for (const auto &[occ, amp] : b.state.amplitudes()) {
            if (occ[s1] + occ[s2] > 1) {
                throw ValidationError("readout needs at most one collective excitation");
            }
        }
    }
    const std::string p(path);
    const MixedState photonic = atomic.map([&](const PureState &s) {
        PureState out = relabel_modes(s, {{s1, photonic_mode(p, Polarization::kH)},
                                          {s2, photonic_mode(p, Polarization::kV)}});
        out = attenuate(out, p + ".H", efficiency);
        return attenuate(out, p + ".V", efficiency);
    });
    return trace_out_kind(photonic, ModeKind::kLoss);
}

double fidelity_report(const PureState &before, const MixedState &after) {
    if (!(before.registry() == after.registry())) {
        throw ValidationError("fidelity needs matching qubit sectors");
    }
    return fidelity(before, after);
}

}  // namespace elink
