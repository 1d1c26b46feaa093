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
 * End-to-end procedures: post-selected photon/ensemble entanglement, the
 * heralded (event-ready) variant using an ancilla pair, and the
 * teleportation-based photon memory with readout.
 *
 * Exact mode evaluates every detector outcome with ideal detectors. Sampled
 * mode draws `trials` independent windows with the configured detectors; trial
 * i always uses TrialStream(seed, i).
 *
 * Herald corrections:
 *   event-ready, Psi+ on (p, A): pi phase on B.H maps the (B, atoms) state to Psi-.
 *   memory, Psi+ on (q, B): pi phase on S2. Psi- needs no correction.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "elink/detection.h"
#include "elink/metrics.h"
#include "elink/sources.h"

namespace elink {

enum class RunMode { kExact, kSampled };
enum class ChannelSource { kIdeal, kEventReady };

struct MemoryInput {
    double theta = 0.0;
    double phi = 0.0;
};

struct ProtocolConfig {
    SourceParams source;
    DetectorSpec detectors;
    HeraldRule herald_rule = HeraldRule::standard();
    std::uint64_t trials = 1;
    RunMode mode = RunMode::kExact;
    std::uint64_t seed = 0;
    MemoryInput memory;
    ChannelSource channel = ChannelSource::kIdeal;
    double retrieval_efficiency = 1.0;
    int cutoff = kDefaultCutoff;
    bool parallel = true;
    bool keep_records = false;

    void validate() const;
};

struct TrialRecord {
    std::uint64_t index = 0;
    Herald herald = Herald::kFail;
    bool success = false;
    double fidelity = 0.0;  // of the corrected conditional state; 0 on failure
    double weight = 1.0;    // outcome probability in exact mode, 1 per sampled trial
};

struct SuccessEstimate {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double rate = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
};

/// Wilson score interval at 95%.
SuccessEstimate estimate_success(std::uint64_t successes, std::uint64_t trials);

struct SampledSummary {
    SuccessEstimate estimate;
    std::uint64_t psi_minus = 0;
    std::uint64_t psi_plus = 0;
    double mean_fidelity = 0.0;  // over successful trials
};

struct GenerationReport {
    MixedState state;  // one branch per (photon number in p, loss pattern) sector
    double vacuum_weight = 0.0;
    double entangled_weight = 0.0;  // exactly one photon in p, nothing lost
    double residual_weight = 0.0;
    double purity = 0.0;
    double concurrence = 0.0;  // of the one-photon branch
    double entanglement_entropy = 0.0;
    double target_fidelity = 0.0;  // one-photon branch vs alpha|S1,H> + beta|S2,V>
    double truncation_loss = 0.0;
};

GenerationReport generate_entanglement(const ProtocolConfig &config);

/// alpha|S1>|H>_p + beta|S2>|V>_p on the given registry.
PureState entangled_target(const RegistryPtr &registry, Complex alpha, Complex beta);

enum class BellState { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

std::string_view to_string(BellState state);

struct BellComponent {
    BellState which = BellState::kPhiPlus;
    Complex coefficient;
    PureState rest;  // normalized, pair modes empty; first amplitude real positive
};

struct BellDecomposition {
    std::vector<BellComponent> components;  // Phi+, Phi-, Psi+, Psi-
    double reconstruction_error = 0.0;
};

/// Expands a state in the Bell basis of two encoded qubits (0 = first pattern).
/// Throws ValidationError if any term leaves the qubit sector of either pair.
BellDecomposition bell_decompose(const PureState &state, const QubitEncoding &a, const QubitEncoding &b);

/// (|V>_B|S1> - |H>_B|S2>)/sqrt(2) on the given registry.
PureState psi_minus_target(const RegistryPtr &registry);

/// The heralding input: dual-ensemble source times the ancilla pair, losses traced.
MixedState event_ready_input(const ProtocolConfig &config);

struct EventReadyReport {
    double success_probability = 0.0;
    double psi_minus_probability = 0.0;
    double psi_plus_probability = 0.0;
    double leading_order = 0.0;  // p0 / 2
    double closed_form = 0.0;    // p0 / (2 (1 + p0)), the order-1 value
    std::optional<MixedState> heralded;            // success-conditioned, corrected
    std::optional<MixedState> psi_minus_state;     // Psi- branch
    std::optional<MixedState> psi_plus_corrected;  // Psi+ branch after correction
    double fidelity = 0.0;                         // heralded vs Psi-_aB
    double truncation_loss = 0.0;
    std::optional<SampledSummary> sampled;
    std::vector<TrialRecord> records;
};

EventReadyReport event_ready_generation(const ProtocolConfig &config);

/// cos(theta)|H> + e^{i phi} sin(theta)|V> on path `path`.
PureState input_qubit(const MemoryInput &input, std::string_view path = "q", int cutoff = kDefaultCutoff);

/// cos(theta)|first> + e^{i phi} sin(theta)|second> on an existing registry.
PureState encoded_qubit(const RegistryPtr &registry, std::string_view first, std::string_view second,
                        const MemoryInput &input);

struct MemoryReport {
    double success_probability = 0.0;
    double psi_minus_probability = 0.0;
    double psi_plus_probability = 0.0;
    double channel_fidelity = 1.0;  // of the channel vs Psi-_aB
    std::optional<MixedState> stored;  // atomic state, success-conditioned, corrected
    double stored_fidelity = 0.0;
    double readout_fidelity = 0.0;
    std::optional<SampledSummary> sampled;
    std::vector<TrialRecord> records;
};

MemoryReport memory_store(const ProtocolConfig &config);

/// Maps S1 -> r.H and S2 -> r.V, then applies retrieval efficiency as loss.
/// Throws ValidationError if any term has more than one atomic excitation.
MixedState memory_readout(const MixedState &atomic, double efficiency = 1.0, std::string_view path = "r");

/// <before| rho_after |before>; both must live on the same registry.
double fidelity_report(const PureState &before, const MixedState &after);

}  // namespace elink
