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

#include <array>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "elink/optics.h"

using namespace elink;

namespace {

using Qubit3 = std::array<Complex, 8>;  // index = 4 q + 2 b + a, with H/S1 = 0 and V/S2 = 1

// Teleportation with plain three-qubit amplitudes: input on q, singlet on (a, B).
Qubit3 teleport_input(double theta, double phi) {
    const Complex c0 = std::cos(theta);
    const Complex c1 = std::polar(std::sin(theta), phi);
    const double s = 1.0 / std::sqrt(2.0);
    // (|S1>|V>_B - |S2>|H>_B)/sqrt(2)
    std::array<Complex, 4> channel{};  // index = 2 b + a
    channel[2 * 1 + 0] = s;
    channel[2 * 0 + 1] = -s;
    Qubit3 out{};
    for (int q = 0; q < 2; ++q) {
        for (int ba = 0; ba < 4; ++ba) {
            out[4 * q + ba] = (q == 0 ? c0 : c1) * channel[ba];
        }
    }
    return out;
}

// Unnormalized atomic state after projecting (q, B) onto (|01> + sign |10>)/sqrt(2).
std::array<Complex, 2> project_psi(const Qubit3 &psi, double sign) {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<Complex, 2> atom{};
    for (int a = 0; a < 2; ++a) {
        atom[a] = s * (psi[4 * 0 + 2 * 1 + a] + sign * psi[4 * 1 + 2 * 0 + a]);
    }
    return atom;
}

double overlap_sq(const std::array<Complex, 2> &x, Complex c0, Complex c1) {
    const double nx = std::norm(x[0]) + std::norm(x[1]);
    return std::norm(std::conj(c0) * x[0] + std::conj(c1) * x[1]) / nx;
}

ProtocolConfig exact_config(double p0 = 0.01) {
    ProtocolConfig c;
    c.source.p0 = p0;
    c.detectors = DetectorSpec::ideal();
    return c;
}

}  // namespace

TEST(TeleportationOracle, CorrectionTable) {
    for (double theta : {0.0, 0.4, 1.1, std::numbers::pi / 2}) {
        for (double phi : {0.0, 1.0, 4.0}) {
            const Qubit3 psi = teleport_input(theta, phi);
            const Complex c0 = std::cos(theta);
            const Complex c1 = std::polar(std::sin(theta), phi);
            const auto minus = project_psi(psi, -1.0);
            const auto plus = project_psi(psi, 1.0);
            EXPECT_NEAR(std::norm(minus[0]) + std::norm(minus[1]), 0.25, 1e-14);
            EXPECT_NEAR(std::norm(plus[0]) + std::norm(plus[1]), 0.25, 1e-14);
            // Psi-: identity. Psi+: pi phase on S2.
            EXPECT_NEAR(overlap_sq(minus, c0, c1), 1.0, 1e-12);
            EXPECT_NEAR(overlap_sq({plus[0], -plus[1]}, c0, c1), 1.0, 1e-12);
        }
    }
}

TEST(Generation, BranchWeightsAndPurity) {
    for (double p0 : {0.001, 0.01, 0.05, 0.1}) {
        const GenerationReport r = generate_entanglement(exact_config(p0));
        EXPECT_NEAR(r.vacuum_weight, 1.0 / (1.0 + p0), 1e-10);
        EXPECT_NEAR(r.entangled_weight, p0 / (1.0 + p0), 1e-10);
        EXPECT_NEAR(r.purity, (1.0 + p0 * p0) / ((1.0 + p0) * (1.0 + p0)), 1e-10);
        EXPECT_NEAR(r.target_fidelity, 1.0, 1e-10);
        EXPECT_NEAR(r.entanglement_entropy, 1.0, 1e-10);
        EXPECT_NEAR(r.concurrence, 1.0, 1e-10);
    }
}

TEST(Generation, VacuumSourceIsPure) {
    const GenerationReport r = generate_entanglement(exact_config(0.0));
    EXPECT_NEAR(r.vacuum_weight, 1.0, 1e-15);
    EXPECT_EQ(r.entangled_weight, 0.0);
    EXPECT_NEAR(r.purity, 1.0, 1e-15);
}

TEST(Generation, TunableDegree) {
    ProtocolConfig c = exact_config();
    c.source.alpha = std::sqrt(0.9);
    c.source.beta = std::sqrt(0.1);
    const GenerationReport r = generate_entanglement(c);
    EXPECT_NEAR(r.concurrence, 2.0 * std::sqrt(0.09), 1e-10);
    EXPECT_NEAR(r.entanglement_entropy, -0.9 * std::log2(0.9) - 0.1 * std::log2(0.1), 1e-10);
    EXPECT_NEAR(r.target_fidelity, 1.0, 1e-10);
}

TEST(BellDecompose, SourceTimesAncillaPair) {
    const MixedState input = event_ready_input(exact_config());
    // Single-Stokes term of the joint state.
    PureState::Amplitudes amps;
    const PureState &full = input.branches().front().state;
    const ModeRegistry &reg = full.registry();
    for (const auto &[occ, a] : full.amplitudes()) {
        if (occ[reg.index_of("p.H")] + occ[reg.index_of("p.V")] == 1) {
            amps.emplace(occ, a);
        }
    }
    const PureState term = PureState(full.registry_ptr(), std::move(amps)).normalized();
    const BellDecomposition d =
        bell_decompose(term, QubitEncoding::dual_rail("p.H", "p.V"), QubitEncoding::dual_rail("A.H", "A.V"));
    ASSERT_EQ(d.components.size(), 4u);
    for (const auto &c : d.components) {
        EXPECT_NEAR(std::norm(c.coefficient), 0.25, 1e-10);
        EXPECT_NEAR(c.rest.norm_squared(), 1.0, 1e-10);
    }
    EXPECT_LT(d.reconstruction_error, 1e-10);
}

TEST(BellDecompose, TrivialInputsAndErrors) {
    ModeRegistry r;
    r.add(photonic_mode("x", Polarization::kH));
    r.add(photonic_mode("x", Polarization::kV));
    r.add(photonic_mode("y", Polarization::kH));
    r.add(photonic_mode("y", Polarization::kV));
    auto reg = make_registry(std::move(r));
    const auto a = QubitEncoding::dual_rail("x.H", "x.V");
    const auto b = QubitEncoding::dual_rail("y.H", "y.V");
    const PureState phi(reg, {{occupation(*reg, {{"x.H", 1}, {"y.H", 1}}), kInvSqrt2},
                              {occupation(*reg, {{"x.V", 1}, {"y.V", 1}}), kInvSqrt2}});
    BellDecomposition d = bell_decompose(phi, a, b);
    EXPECT_NEAR(std::abs(d.components[0].coefficient), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(d.components[1].coefficient) + std::abs(d.components[2].coefficient) +
                    std::abs(d.components[3].coefficient),
                0.0, 1e-12);
    const PureState singlet(reg, {{occupation(*reg, {{"x.H", 1}, {"y.V", 1}}), kInvSqrt2},
                                  {occupation(*reg, {{"x.V", 1}, {"y.H", 1}}), -kInvSqrt2}});
    d = bell_decompose(singlet, a, b);
    EXPECT_EQ(d.components[3].which, BellState::kPsiMinus);
    EXPECT_NEAR(std::abs(d.components[3].coefficient), 1.0, 1e-12);
    const PureState two(reg, {{occupation(*reg, {{"x.H", 2}}), 1.0}});
    EXPECT_THROW(bell_decompose(two, a, b), ValidationError);
}

TEST(EventReady, ExactSuccessProbabilityAndFidelity) {
    for (double p0 : {0.005, 0.01, 0.02}) {
        const EventReadyReport r = event_ready_generation(exact_config(p0));
        EXPECT_NEAR(r.success_probability, p0 / (2.0 * (1.0 + p0)), 1e-12);
        EXPECT_NEAR(r.closed_form, p0 / (2.0 * (1.0 + p0)), 1e-15);
        EXPECT_NEAR(r.leading_order, p0 / 2.0, 1e-15);
        EXPECT_NEAR(r.psi_minus_probability, r.psi_plus_probability, 1e-12);
        EXPECT_NEAR(r.fidelity, 1.0, 1e-9);
    }
}

TEST(EventReady, CorrectedPsiPlusMatchesPsiMinus) {
    const EventReadyReport r = event_ready_generation(exact_config());
    ASSERT_TRUE(r.psi_minus_state && r.psi_plus_corrected);
    // One branch per detector pattern; every branch must be the same ray.
    for (const auto &plus : r.psi_plus_corrected->branches()) {
        for (const auto &minus : r.psi_minus_state->branches()) {
            EXPECT_NEAR(std::abs(inner_product(plus.state, minus.state)), 1.0, 1e-9);
        }
    }
    // Without the correction the branches are orthogonal.
    const auto uncorrected = r.psi_plus_corrected->map(
        [](const PureState &s) { return phase_shift(s, "B.H", std::numbers::pi); });
    EXPECT_NEAR(std::abs(inner_product(uncorrected.branches()[0].state, r.psi_minus_state->branches()[0].state)), 0.0,
                1e-9);
}

TEST(EventReady, AncillaVisibilityCarriesThrough) {
    for (double v : {0.5, 0.8}) {
        ProtocolConfig c = exact_config();
        c.source.epr_visibility = v;
        const EventReadyReport r = event_ready_generation(c);
        EXPECT_NEAR(r.fidelity, (1.0 + 3.0 * v) / 4.0, 1e-10);
    }
}

TEST(EventReady, HigherOrderContaminationGrowsWithP0) {
    double previous = -1.0;
    for (double p0 : {0.01, 0.02, 0.05, 0.1}) {
        ProtocolConfig c = exact_config(p0);
        c.source.emission_order = 2;
        const double deficit = 1.0 - event_ready_generation(c).fidelity;
        EXPECT_GT(deficit, previous);
        EXPECT_LT(deficit / p0, 2.0);
        previous = deficit;
    }
}

TEST(EventReady, RecordsRecomputeSummary) {
    ProtocolConfig c = exact_config(0.02);
    c.keep_records = true;
    const EventReadyReport exact = event_ready_generation(c);
    double p = 0.0;
    double f = 0.0;
    for (const auto &rec : exact.records) {
        if (rec.success) {
            p += rec.weight;
            f += rec.weight * rec.fidelity;
        }
    }
    EXPECT_NEAR(p, exact.success_probability, 1e-12);
    EXPECT_NEAR(f / p, exact.fidelity, 1e-12);

    c.mode = RunMode::kSampled;
    c.trials = 20000;
    c.seed = 17;
    c.detectors = DetectorSpec{};
    const EventReadyReport sampled = event_ready_generation(c);
    ASSERT_TRUE(sampled.sampled);
    ASSERT_EQ(sampled.records.size(), c.trials);
    std::uint64_t successes = 0;
    double fsum = 0.0;
    for (const auto &rec : sampled.records) {
        successes += rec.success;
        fsum += rec.success ? rec.fidelity : 0.0;
    }
    EXPECT_EQ(successes, sampled.sampled->estimate.successes);
    EXPECT_EQ(successes, sampled.sampled->psi_minus + sampled.sampled->psi_plus);
    EXPECT_NEAR(fsum / static_cast<double>(successes), sampled.sampled->mean_fidelity, 1e-12);
}

TEST(EventReady, SerialAndParallelSamplesAgree) {
    ProtocolConfig c = exact_config(0.02);
    c.mode = RunMode::kSampled;
    c.trials = 5000;
    c.seed = 3;
    c.keep_records = true;
    const EventReadyReport par = event_ready_generation(c);
    c.parallel = false;
    const EventReadyReport ser = event_ready_generation(c);
    ASSERT_EQ(par.records.size(), ser.records.size());
    for (std::size_t i = 0; i < par.records.size(); ++i) {
        EXPECT_EQ(par.records[i].herald, ser.records[i].herald);
        EXPECT_EQ(par.records[i].fidelity, ser.records[i].fidelity);
    }
}

TEST(Memory, StoredFidelityOverGrid) {
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            ProtocolConfig c = exact_config();
            c.memory.theta = std::numbers::pi * i / 4.0;
            c.memory.phi = 2.0 * std::numbers::pi * j / 5.0;
            const MemoryReport r = memory_store(c);
            EXPECT_NEAR(r.success_probability, 0.5, 1e-12);
            EXPECT_NEAR(r.stored_fidelity, 1.0, 1e-9);
            EXPECT_NEAR(r.readout_fidelity, 1.0, 1e-9);
        }
    }
}

TEST(Memory, BasisInputAndEventReadyChannel) {
    ProtocolConfig c = exact_config();
    MemoryReport r = memory_store(c);
    ASSERT_TRUE(r.stored);
    const PureState s1 = PureState::basis(r.stored->registry_ptr(), occupation(r.stored->registry(), {{"S1", 1}}));
    EXPECT_NEAR(fidelity(s1, *r.stored), 1.0, 1e-12);

    c.channel = ChannelSource::kEventReady;
    c.memory.theta = 0.7;
    r = memory_store(c);
    EXPECT_NEAR(r.channel_fidelity, 1.0, 1e-9);
    EXPECT_NEAR(r.stored_fidelity, 1.0, 1e-9);

    c.source.p0 = 0.0;
    EXPECT_THROW(memory_store(c), ValidationError);
}

TEST(Memory, SampledSuccessIsInputIndependent) {
    for (double theta : {0.0, 0.8, std::numbers::pi / 2}) {
        ProtocolConfig c = exact_config();
        c.memory.theta = theta;
        c.mode = RunMode::kSampled;
        c.trials = 4000;
        c.seed = 11;
        const MemoryReport r = memory_store(c);
        ASSERT_TRUE(r.sampled);
        EXPECT_NEAR(r.sampled->estimate.rate, 0.5, 3.0 * std::sqrt(0.25 / 4000.0));
        EXPECT_NEAR(r.sampled->mean_fidelity, 1.0, 1e-9);
    }
}

TEST(Memory, ReadoutMapsAndThins) {
    ModeRegistry reg;
    reg.add(atomic_mode("S1"));
    reg.add(atomic_mode("S2"));
    auto ptr = make_registry(std::move(reg));
    const PureState s1 = PureState::basis(ptr, {1, 0});
    const MixedState out = memory_readout(MixedState::pure(s1));
    EXPECT_EQ(out.registry().mode(0).name, "r.H");
    EXPECT_NEAR(fidelity(PureState::basis(out.registry_ptr(), {1, 0}), out), 1.0, 1e-15);

    const MixedState lossy = memory_readout(MixedState::pure(s1), 0.8);
    EXPECT_NEAR(fidelity(PureState::basis(lossy.registry_ptr(), {1, 0}), lossy), 0.8, 1e-12);

    const MixedState diag = memory_readout(MixedState::pure(PureState(ptr, {{Occupation{1, 0}, kInvSqrt2}, {Occupation{0, 1}, kInvSqrt2}})));
    const PureState plus = encoded_qubit(diag.registry_ptr(), "r.H", "r.V", {std::numbers::pi / 4, 0.0});
    EXPECT_NEAR(fidelity_report(plus, diag), 1.0, 1e-12);

    EXPECT_THROW(memory_readout(MixedState::pure(PureState::basis(ptr, {1, 1}))), ValidationError);
    EXPECT_THROW(memory_readout(MixedState::pure(s1), 1.2), ValidationError);
    EXPECT_THROW(fidelity_report(s1, out), ValidationError);
}

TEST(FidelityReport, MaximallyMixedQubitGivesOneHalf) {
    ModeRegistry reg;
    reg.add(photonic_mode("r", Polarization::kH));
    reg.add(photonic_mode("r", Polarization::kV));
    auto ptr = make_registry(std::move(reg));
    const MixedState mixed({{0.5, PureState::basis(ptr, {1, 0})}, {0.5, PureState::basis(ptr, {0, 1})}});
    EXPECT_NEAR(fidelity_report(encoded_qubit(ptr, "r.H", "r.V", {0.3, 1.2}), mixed), 0.5, 1e-15);
}

TEST(Wilson, KnownInterval) {
    const SuccessEstimate e = estimate_success(5, 100);
    EXPECT_NEAR(e.rate, 0.05, 1e-15);
    EXPECT_NEAR(e.wilson_low, 0.02154, 1e-4);
    EXPECT_NEAR(e.wilson_high, 0.11175, 1e-4);
    const SuccessEstimate zero = estimate_success(0, 10);
    EXPECT_EQ(zero.wilson_low, 0.0);
    EXPECT_GT(zero.wilson_high, 0.0);
}

TEST(ProtocolConfig, Validation) {
    ProtocolConfig c;
    c.trials = 0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = ProtocolConfig{};
    c.memory.theta = 4.0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = ProtocolConfig{};
    c.memory.phi = 2.0 * std::numbers::pi;
    EXPECT_THROW(c.validate(), ValidationError);
    c = ProtocolConfig{};
    c.retrieval_efficiency = -0.1;
    EXPECT_THROW(c.validate(), ValidationError);
}
