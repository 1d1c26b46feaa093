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
 * Raman Stokes sources, the two-ensemble and single-ensemble entangling
 * sources, and the ancilla polarization pair.
 *
 * Emission follows the two-mode-squeezed expansion: amplitude p0^{n/2} on
 * |n excitations, n Stokes photons>, truncated at `emission_order` and
 * renormalized. For the joint sources the order bounds the total number of
 * Stokes photons, so order 1 is exactly vacuum + sqrt(p0) * one-photon sector.
 *
 * Canonical registration orders:
 *   dual_ensemble_source:   S1, S2, p.H, p.V, loss:p.L#0, loss:p.R#0
 *   single_ensemble_source: E.r, E.l, p.R, p.L
 *   epr_pair:               A.H, A.V, B.H, B.V
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "elink/fock.h"

namespace elink {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

struct SourceParams {
    double p0 = 0.01;
    int emission_order = 1;
    Complex alpha{kInvSqrt2, 0.0};
    Complex beta{kInvSqrt2, 0.0};
    double epr_visibility = 1.0;

    /// Throws ValidationError naming the offending field.
    void validate(int cutoff = kDefaultCutoff) const;
};

/// Multiplies the state by the normalized sum_{n<=order} amplitude^n |n>_ensemble |n>_stokes.
/// Both modes must be empty in every term of the input.
PureState two_mode_emission(const PureState &state, std::string_view ensemble, std::string_view stokes,
                            Complex amplitude, int order);

/// Two-mode emission with amplitude sqrt(p0).
PureState raman_emit(const PureState &state, std::string_view ensemble, std::string_view stokes, double p0,
                     int order);

/// Keeps terms whose summed occupation over `modes` is at most `order`, then
/// renormalizes. The dropped weight fraction is added to the truncation loss.
PureState truncate_emission(const PureState &state, const std::vector<std::string> &modes, int order);

/// How (alpha, beta) are realized: equal pump on both ensembles, with one
/// branch attenuated and the relative phase put on ensemble 2's light.
struct AmplitudeSetting {
    double pump_probability = 0.0;  // per ensemble
    double t_ensemble1 = 1.0;       // pbs_attenuator on the L light of ensemble 1
    double t_ensemble2 = 1.0;       // attenuator on the R light of ensemble 2
    double relative_phase = 0.0;    // arg(beta / alpha)
};

AmplitudeSetting compile_amplitudes(const SourceParams &params);

/// Two ensembles pumped in turn into one forward path: emit S1, half-wave,
/// pass-ratio attenuator, emit S2, phase plate, filter, quarter-wave.
PureState dual_ensemble_source(const SourceParams &params, int cutoff = kDefaultCutoff);

/// Element chain used by dual_ensemble_source, in canonical text form.
std::vector<std::string> dual_ensemble_pipeline(const SourceParams &params);

/// One ensemble with collective modes E.r and E.l emitting R and L Stokes light.
PureState single_ensemble_source(const SourceParams &params, int cutoff = kDefaultCutoff);

/// (|H>_A|H>_B + |V>_A|V>_B)/sqrt(2) on the given paths.
PureState epr_pair(std::string_view path_a = "A", std::string_view path_b = "B", int cutoff = kDefaultCutoff);

/// Werner form v |Phi+><Phi+| + (1 - v) I/4; v = 1 gives the pure pair.
MixedState werner_pair(double visibility, std::string_view path_a = "A", std::string_view path_b = "B",
                       int cutoff = kDefaultCutoff);

}  // namespace elink
