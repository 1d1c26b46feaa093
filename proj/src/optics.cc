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

#include "elink/optics.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <utility>

namespace elink {

namespace {

std::size_t require_mode(const ModeRegistry &registry, std::string_view path, Polarization pol) {
    auto index = registry.find(path, pol);
    if (!index) {
        throw ValidationError("path '" + std::string(path) + "' has no " + polarization_char(pol) + " mode");
    }
    return *index;
}

bool is_circular(const ModeRegistry &registry, std::string_view path) {
    return registry.find(path, Polarization::kR) || registry.find(path, Polarization::kL);
}

bool is_linear(const ModeRegistry &registry, std::string_view path) {
    return registry.find(path, Polarization::kH) || registry.find(path, Polarization::kV);
}

void check_probability(double value, const char *name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
}

PureState relabel_path(const PureState &state, std::string_view path,
                       std::initializer_list<std::pair<Polarization, Polarization>> map) {
    std::vector<std::pair<std::size_t, ModeId>> replacements;
    for (const auto &[from, to] : map) {
        replacements.emplace_back(require_mode(state.registry(), path, from),
                                  photonic_mode(std::string(path), to));
    }
    return relabel_modes(state, replacements);
}

}  // namespace

PureState half_wave(const PureState &state, std::string_view path) {
    const std::array<std::size_t, 2> modes{require_mode(state.registry(), path, Polarization::kR),
                                           require_mode(state.registry(), path, Polarization::kL)};
    Eigen::MatrixXcd swap(2, 2);
    swap << 0.0, 1.0, 1.0, 0.0;
    return apply_mode_unitary(state, modes, swap);
}

PureState quarter_wave(const PureState &state, std::string_view path) {
    if (is_linear(state.registry(), path)) {
        throw ValidationError("path '" + std::string(path) + "' is already in the linear basis");
    }
    return relabel_path(state, path, {{Polarization::kL, Polarization::kH}, {Polarization::kR, Polarization::kV}});
}

PureState quarter_wave_inverse(const PureState &state, std::string_view path) {
    if (is_circular(state.registry(), path)) {
        throw ValidationError("path '" + std::string(path) + "' is already in the circular basis");
    }
    return relabel_path(state, path, {{Polarization::kH, Polarization::kL}, {Polarization::kV, Polarization::kR}});
}

PureState attenuate(const PureState &state, std::string_view mode, double t) {
    check_probability(t, "transmissivity t");
    const std::size_t target = state.registry().index_of(mode);
    const std::string prefix = "loss:" + std::string(mode) + "#";
    int k = 0;
    while (state.registry().find(prefix + std::to_string(k))) {
        ++k;
    }
    PureState extended = extend(state, loss_mode(prefix + std::to_string(k)));
    const std::array<std::size_t, 2> modes{target, extended.registry().size() - 1};
    const double tau = std::sqrt(t);
    const double rho = std::sqrt(1.0 - t);
    Eigen::MatrixXcd u(2, 2);
    u << tau, -rho, rho, tau;
    return apply_mode_unitary(extended, modes, u);
}

PureState pbs_attenuator(const PureState &state, std::string_view path, double t) {
    const std::size_t l = require_mode(state.registry(), path, Polarization::kL);
    return attenuate(state, state.registry().mode(l).name, t);
}

PureState phase_shift(const PureState &state, std::string_view mode, double phi) {
    const std::array<std::size_t, 1> modes{state.registry().index_of(mode)};
    Eigen::MatrixXcd u(1, 1);
    u(0, 0) = std::polar(1.0, phi);
    return apply_mode_unitary(state, modes, u);
}

PureState beam_splitter(const PureState &state, std::string_view path_a, std::string_view path_b,
                        double r) {
    check_probability(r, "reflectivity r");
    const ModeRegistry &registry = state.registry();
    std::set<Polarization> pols_a;
    std::set<Polarization> pols_b;
    for (auto i : registry.modes_on_path(path_a)) {
        pols_a.insert(registry.mode(i).pol);
    }
    for (auto i : registry.modes_on_path(path_b)) {
        pols_b.insert(registry.mode(i).pol);
    }
    if (pols_a.empty() || pols_a != pols_b) {
        throw ValidationError("beam splitter paths '" + std::string(path_a) + "' and '" + std::string(path_b) +
                              "' do not share a polarization basis");
    }
    const double c = std::sqrt(1.0 - r);
    const double s = std::sqrt(r);
    Eigen::MatrixXcd u(2, 2);
    u << c, s, s, -c;
    PureState out = state;
    for (auto pol : pols_a) {
        const std::array<std::size_t, 2> modes{*registry.find(path_a, pol), *registry.find(path_b, pol)};
        out = apply_mode_unitary(out, modes, u);
    }
    return out;
}

PureState pol_splitter(const PureState &state, std::string_view path, std::string_view out_h,
                       std::string_view out_v) {
    if (is_circular(state.registry(), path)) {
        throw ValidationError("polarization splitter needs a linear-basis input on '" + std::string(path) + "'");
    }
    const std::size_t h = require_mode(state.registry(), path, Polarization::kH);
    const std::size_t v = require_mode(state.registry(), path, Polarization::kV);
    return relabel_modes(state, {{h, photonic_mode(std::string(out_h), Polarization::kH)},
                                 {v, photonic_mode(std::string(out_v), Polarization::kV)}});
}

PureState frequency_filter(const PureState &state, std::string_view path) {
    if (state.registry().modes_on_path(path).empty()) {
        throw ValidationError("filter path '" + std::string(path) + "' carries no modes");
    }
    return state;
}

namespace {

struct KindName {
    ElementKind kind;
    const char *name;
    std::size_t targets;
    const char *param;  // nullptr when the element has no parameter
};

constexpr std::array<KindName, 7> kKinds{{
    {ElementKind::kHalfWave, "half_wave", 1, nullptr},
    {ElementKind::kQuarterWave, "quarter_wave", 1, nullptr},
    {ElementKind::kPbsAttenuator, "pbs_attenuator", 1, "t"},
    {ElementKind::kBeamSplitter, "beam_splitter", 2, "r"},
    {ElementKind::kPolSplitter, "pol_splitter", 3, nullptr},
    {ElementKind::kFilter, "filter", 1, nullptr},
    {ElementKind::kPhaseShift, "phase_shift", 1, "phi"},
}};

const KindName &lookup(ElementKind kind) {
    for (const auto &k : kKinds) {
        if (k.kind == kind) {
            return k;
        }
    }
    throw ValidationError("unknown element kind");
}

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t");
    return std::string(s.substr(begin, end - begin + 1));
}

}  // namespace

void ElementSpec::validate() const {
    const KindName &k = lookup(kind);
    if (targets.size() != k.targets) {
        throw ValidationError(std::string(k.name) + " expects " + std::to_string(k.targets) + " target(s)");
    }
    if (k.param == nullptr && param) {
        throw ValidationError(std::string(k.name) + " takes no parameter");
    }
    if (kind == ElementKind::kPbsAttenuator || kind == ElementKind::kBeamSplitter) {
        if (param) {
            check_probability(*param, k.param);
        }
    }
    if (kind == ElementKind::kPbsAttenuator && !param) {
        throw ValidationError("pbs_attenuator requires t");
    }
    if (kind == ElementKind::kPhaseShift && !param) {
        throw ValidationError("phase_shift requires phi");
    }
}

std::string to_string(const ElementSpec &spec) {
    const KindName &k = lookup(spec.kind);
    std::string out = std::string(k.name) + "(";
    for (std::size_t i = 0; i < spec.targets.size(); ++i) {
        out += (i ? ", " : "") + spec.targets[i];
    }
    if (spec.param) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.17g", *spec.param);
        out += std::string("; ") + k.param + "=" + buf;
    }
    return out + ")";
}

ElementSpec parse_element(std::string_view text) {
    const std::string s = trim(text);
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') {
        throw ValidationError("malformed element '" + s + "'");
    }
    const std::string name = trim(std::string_view(s).substr(0, open));
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    ElementSpec spec;
    const KindName *kind = nullptr;
    for (const auto &k : kKinds) {
        if (name == k.name) {
            kind = &k;
        }
    }
    if (kind == nullptr) {
        throw ValidationError("unknown element '" + name + "'");
    }
    spec.kind = kind->kind;
    std::string params;
    if (auto semi = inner.find(';'); semi != std::string::npos) {
        params = trim(std::string_view(inner).substr(semi + 1));
        inner = inner.substr(0, semi);
    }
    std::size_t start = 0;
    while (start <= inner.size()) {
        auto comma = inner.find(',', start);
        std::string target = trim(std::string_view(inner).substr(start, comma - start));
        if (!target.empty()) {
            spec.targets.push_back(target);
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    if (!params.empty()) {
        const auto eq = params.find('=');
        if (eq == std::string::npos || kind->param == nullptr || trim(params.substr(0, eq)) != kind->param) {
            throw ValidationError("bad parameter '" + params + "' for " + name);
        }
        const std::string value = trim(params.substr(eq + 1));
        char *end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0') {
            throw ValidationError("bad numeric value '" + value + "' for " + name);
        }
        spec.param = v;
    }
    spec.validate();
    return spec;
}

PureState apply(const PureState &state, const ElementSpec &spec) {
    spec.validate();
    const auto &t = spec.targets;
    switch (spec.kind) {
        case ElementKind::kHalfWave:
            return half_wave(state, t[0]);
        case ElementKind::kQuarterWave:
            return quarter_wave(state, t[0]);
        case ElementKind::kPbsAttenuator:
            return pbs_attenuator(state, t[0], *spec.param);
        case ElementKind::kBeamSplitter:
            return beam_splitter(state, t[0], t[1], spec.param.value_or(0.5));
        case ElementKind::kPolSplitter:
            return pol_splitter(state, t[0], t[1], t[2]);
        case ElementKind::kFilter:
            return frequency_filter(state, t[0]);
        case ElementKind::kPhaseShift:
            return phase_shift(state, t[0], *spec.param);
    }
    throw ValidationError("unknown element kind");
}

}  // namespace elink
