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
 * Linear optical elements acting on the photonic modes of a path.
 *
 * A path is the set of photonic modes sharing a path label; its polarization
 * basis is either circular {R, L} or linear {H, V}. Elements that only change
 * the basis (quarter-wave plate, polarization splitter) relabel modes in the
 * registry; everything else is a mode unitary. Attenuation is a beam-splitter
 * dilation onto a fresh loss mode.
 */

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elink/fock.h"

namespace elink {

/// Swaps R and L on the path.
PureState half_wave(const PureState &state, std::string_view path);

/// Relabels L -> H and R -> V with no extra phase.
PureState quarter_wave(const PureState &state, std::string_view path);

/// Relabels H -> L and V -> R.
PureState quarter_wave_inverse(const PureState &state, std::string_view path);

/// Couples one mode to a new loss mode with amplitude transmissivity sqrt(t).
/// The loss mode is named "loss:<mode>#<k>" with k counting earlier attenuators.
PureState attenuate(const PureState &state, std::string_view mode, double t);

/// Tunable pass ratio on the L mode of the path.
PureState pbs_attenuator(const PureState &state, std::string_view path, double t);

/// Multiplies the mode's creation operator by exp(i phi).
PureState phase_shift(const PureState &state, std::string_view mode, double phi);

/// Per polarization: [[sqrt(1-r), sqrt(r)], [sqrt(r), -sqrt(1-r)]] on (A, B).
PureState beam_splitter(const PureState &state, std::string_view path_a, std::string_view path_b,
                        double r = 0.5);

/// Routes H to path out_h and V to path out_v.
PureState pol_splitter(const PureState &state, std::string_view path, std::string_view out_h,
                       std::string_view out_v);

/// Pump rejection. The pump is classical and never registered, so this only
/// checks that the path holds Stokes modes and passes the state through.
PureState frequency_filter(const PureState &state, std::string_view path);

enum class ElementKind {
    kHalfWave,
    kQuarterWave,
    kPbsAttenuator,
    kBeamSplitter,
    kPolSplitter,
    kFilter,
    kPhaseShift,
};

/// Canonical text: `kind(target, ...; key=value)`, e.g.
/// `pbs_attenuator(p; t=0.5)` or `beam_splitter(p, A; r=0.5)`.
struct ElementSpec {
    ElementKind kind = ElementKind::kFilter;
    std::vector<std::string> targets;
    std::optional<double> param;  // t, r or phi depending on kind

    void validate() const;
    bool operator==(const ElementSpec &) const = default;
};

std::string to_string(const ElementSpec &spec);
ElementSpec parse_element(std::string_view text);
PureState apply(const PureState &state, const ElementSpec &spec);

}  // namespace elink
