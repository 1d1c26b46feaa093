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

#include "elink/sources.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "elink/optics.h"

namespace elink {

void SourceParams::validate(int cutoff) const {
    if (!(p0 >= 0.0 && p0 <= 0.2)) {
        throw ValidationError("p0 must lie in [0, 0.2]");
    }
    if (emission_order < 1) {
        throw ValidationError("emission_order must be at least 1");
    }
    if (2 * emission_order > cutoff) {
        throw ValidationError("emission_order " + std::to_string(emission_order) + " exceeds the excitation cutoff " +
                              std::to_string(cutoff));
    }
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12) {
        throw ValidationError("alpha and beta must satisfy |alpha|^2 + |beta|^2 = 1");
    }
    if (!(epr_visibility >= 0.0 && epr_visibility <= 1.0)) {
        throw ValidationError("epr_visibility must lie in [0, 1]");
    }
}

PureState two_mode_emission(const PureState &state, std::string_view ensemble, std::string_view stokes,
                            Complex amplitude, int order) {
    const ModeRegistry &registry = state.registry();
    const std::size_t e = registry.index_of(ensemble);
    const std::size_t s = registry.index_of(stokes);
    if (order < 0) {
        throw ValidationError("emission order must be non-negative");
    }
    if (2 * order > registry.cutoff()) {
        throw ValidationError("emission order exceeds the excitation cutoff");
    }
    double factor_norm = 0.0;
    for (int n = 0; n <= order; ++n) {
        factor_norm += std::pow(std::norm(amplitude), n);
    }
    const double scale = 1.0 / std::sqrt(factor_norm);

    PureState::Amplitudes out;
    double dropped = 0.0;
    for (const auto &[occ, amp] : state.amplitudes()) {
        if (occ[e] != 0 || occ[s] != 0) {
            throw ValidationError("emission modes '" + std::string(ensemble) + "' and '" + std::string(stokes) +
                                  "' must be empty");
        }
        const int base = total_excitations(occ);
        Complex power = scale;
        for (int n = 0; n <= order; ++n) {
            const Complex c = amp * power;
            power *= amplitude;
            if (base + 2 * n > registry.cutoff()) {
                dropped += std::norm(c);
                continue;
            }
            Occupation next = occ;
            next[e] = static_cast<std::uint8_t>(n);
            next[s] = static_cast<std::uint8_t>(n);
            out.emplace(std::move(next), c);
        }
    }
    return PureState(state.registry_ptr(), std::move(out), state.truncation_loss() + dropped);
}

PureState raman_emit(const PureState &state, std::string_view ensemble, std::string_view stokes, double p0,
                     int order) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw ValidationError("emission probability must lie in [0, 1]");
    }
    return two_mode_emission(state, ensemble, stokes, std::sqrt(p0), order);
}

PureState truncate_emission(const PureState &state, const std::vector<std::string> &modes, int order) {
    std::vector<std::size_t> indices;
    for (const auto &m : modes) {
        indices.push_back(state.registry().index_of(m));
    }
    PureState::Amplitudes kept;
    for (const auto &[occ, amp] : state.amplitudes()) {
        int n = 0;
        for (auto i : indices) {
            n += occ[i];
        }
        if (n <= order) {
            kept.emplace_hint(kept.end(), occ, amp);
        }
    }
    const double total = state.norm_squared();
    PureState out(state.registry_ptr(), std::move(kept));
    const double fraction = total > 0.0 ? 1.0 - out.norm_squared() / total : 0.0;
    return out.normalized().with_truncation_loss(state.truncation_loss() + std::max(fraction, 0.0));
}

AmplitudeSetting compile_amplitudes(const SourceParams &params) {
    const double a2 = std::norm(params.alpha);
    const double b2 = std::norm(params.beta);
    AmplitudeSetting setting;
    setting.pump_probability = params.p0 * std::max(a2, b2);
    if (a2 <= b2) {
        setting.t_ensemble1 = b2 > 0.0 ? a2 / b2 : 1.0;
    } else {
        setting.t_ensemble2 = b2 / a2;
    }
    if (a2 > 0.0 && b2 > 0.0) {
        setting.relative_phase = std::arg(params.beta) - std::arg(params.alpha);
    }
    return setting;
}

PureState dual_ensemble_source(const SourceParams &params, int cutoff) {
    params.validate(cutoff);
    const AmplitudeSetting setting = compile_amplitudes(params);
    const int order = params.emission_order;

    ModeRegistry registry(cutoff);
    registry.add(atomic_mode("S1"));
    registry.add(atomic_mode("S2"));
    registry.add(photonic_mode("p", Polarization::kL));
    registry.add(photonic_mode("p", Polarization::kR));

    PureState psi = PureState::vacuum(make_registry(std::move(registry)));
    psi = raman_emit(psi, "S1", "p.R", setting.pump_probability, order);
    psi = half_wave(psi, "p");
    psi = pbs_attenuator(psi, "p", setting.t_ensemble1);
    psi = raman_emit(psi, "S2", "p.R", setting.pump_probability, order);
    psi = attenuate(psi, "p.R", setting.t_ensemble2);
    psi = phase_shift(psi, "p.R", setting.relative_phase);
    psi = frequency_filter(psi, "p");
    psi = quarter_wave(psi, "p");
    return truncate_emission(psi, {"S1", "S2"}, order);
}

std::vector<std::string> dual_ensemble_pipeline(const SourceParams &params) {
    const AmplitudeSetting setting = compile_amplitudes(params);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", setting.pump_probability);
    const std::string emit_p = buf;
    std::snprintf(buf, sizeof(buf), "%.17g", setting.t_ensemble2);
    const std::string t2 = buf;
    return {
        "raman_emit(S1, p.R; p=" + emit_p + ")",
        to_string(ElementSpec{ElementKind::kHalfWave, {"p"}, std::nullopt}),
        to_string(ElementSpec{ElementKind::kPbsAttenuator, {"p"}, setting.t_ensemble1}),
        "raman_emit(S2, p.R; p=" + emit_p + ")",
        "attenuate(p.R; t=" + t2 + ")",
        to_string(ElementSpec{ElementKind::kPhaseShift, {"p.R"}, setting.relative_phase}),
        to_string(ElementSpec{ElementKind::kFilter, {"p"}, std::nullopt}),
        to_string(ElementSpec{ElementKind::kQuarterWave, {"p"}, std::nullopt}),
    };
}

PureState single_ensemble_source(const SourceParams &params, int cutoff) {
    params.validate(cutoff);
    ModeRegistry registry(cutoff);
    registry.add(atomic_mode("E.r"));
    registry.add(atomic_mode("E.l"));
    registry.add(photonic_mode("p", Polarization::kR));
    registry.add(photonic_mode("p", Polarization::kL));
    const double root = std::sqrt(params.p0);
    PureState psi = PureState::vacuum(make_registry(std::move(registry)));
    psi = two_mode_emission(psi, "E.r", "p.R", root * params.alpha, params.emission_order);
    psi = two_mode_emission(psi, "E.l", "p.L", root * params.beta, params.emission_order);
    return truncate_emission(psi, {"E.r", "E.l"}, params.emission_order);
}

namespace {

RegistryPtr pair_registry(std::string_view path_a, std::string_view path_b, int cutoff) {
    ModeRegistry registry(cutoff);
    registry.add(photonic_mode(std::string(path_a), Polarization::kH));
    registry.add(photonic_mode(std::string(path_a), Polarization::kV));
    registry.add(photonic_mode(std::string(path_b), Polarization::kH));
    registry.add(photonic_mode(std::string(path_b), Polarization::kV));
    return make_registry(std::move(registry));
}

}  // namespace

PureState epr_pair(std::string_view path_a, std::string_view path_b, int cutoff) {
    auto registry = pair_registry(path_a, path_b, cutoff);
    return PureState(registry, {{{1, 0, 1, 0}, kInvSqrt2}, {{0, 1, 0, 1}, kInvSqrt2}});
}

MixedState werner_pair(double visibility, std::string_view path_a, std::string_view path_b, int cutoff) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw ValidationError("visibility must lie in [0, 1]");
    }
    auto registry = pair_registry(path_a, path_b, cutoff);
    std::vector<Branch> branches;
    if (visibility > 0.0) {
        branches.push_back({visibility, PureState(registry, {{{1, 0, 1, 0}, kInvSqrt2}, {{0, 1, 0, 1}, kInvSqrt2}})});
    }
    if (visibility < 1.0) {
        const double w = (1.0 - visibility) / 4.0;
        for (const Occupation &occ : {Occupation{1, 0, 1, 0}, Occupation{1, 0, 0, 1}, Occupation{0, 1, 1, 0},
                                      Occupation{0, 1, 0, 1}}) {
            branches.push_back({w, PureState::basis(registry, occ)});
        }
    }
    return MixedState(std::move(branches));
}

}  // namespace elink
