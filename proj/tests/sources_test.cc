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

#include <cmath>

#include <gtest/gtest.h>

#include "elink/metrics.h"

using namespace elink;

namespace {

// One Stokes photon in p and no loss, renormalized.
PureState one_photon_branch(const PureState &s) {
    const ModeRegistry &r = s.registry();
    PureState::Amplitudes kept;
    for (const auto &[occ, a] : s.amplitudes()) {
        int loss = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r.mode(i).kind == ModeKind::kLoss) {
                loss += occ[i];
            }
        }
        if (loss == 0 && occ[r.index_of("p.H")] + occ[r.index_of("p.V")] == 1) {
            kept.emplace(occ, a);
        }
    }
    return PureState(s.registry_ptr(), std::move(kept)).normalized();
}

Complex amp(const PureState &s, std::initializer_list<std::pair<std::string_view, int>> counts) {
    return s.amplitude(occupation(s.registry(), counts));
}

}  // namespace

TEST(RamanEmit, AmplitudeRatiosAreRootP0) {
    ModeRegistry r;
    r.add(atomic_mode("E"));
    r.add(photonic_mode("p", Polarization::kR));
    const double p0 = 0.04;
    const PureState s = raman_emit(PureState::vacuum(make_registry(r)), "E", "p.R", p0, 3);
    for (int n = 0; n < 3; ++n) {
        const Complex c0 = amp(s, {{"E", n}, {"p.R", n}});
        const Complex c1 = amp(s, {{"E", n + 1}, {"p.R", n + 1}});
        EXPECT_NEAR(std::abs(c1 / c0), std::sqrt(p0), 1e-14);
    }
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-14);
}

TEST(DualSource, RegistrationOrder) {
    const PureState s = dual_ensemble_source(SourceParams{});
    std::vector<std::string> names;
    for (const auto &m : s.registry().modes()) {
        names.push_back(m.name);
    }
    EXPECT_EQ(names, (std::vector<std::string>{"S1", "S2", "p.H", "p.V", "loss:p.L#0", "loss:p.R#0"}));
}

TEST(DualSource, VacuumAndOnePhotonSectorsAtOrderOne) {
    for (double p0 : {0.001, 0.01, 0.1}) {
        SourceParams params;
        params.p0 = p0;
        const PureState s = dual_ensemble_source(params);
        EXPECT_NEAR(std::abs(amp(s, {})), 1.0 / std::sqrt(1.0 + p0), 1e-12);
        const PureState branch = one_photon_branch(s);
        const PureState target(s.registry_ptr(), {{occupation(s.registry(), {{"S1", 1}, {"p.H", 1}}), kInvSqrt2},
                                                  {occupation(s.registry(), {{"S2", 1}, {"p.V", 1}}), kInvSqrt2}});
        EXPECT_NEAR(std::norm(inner_product(target, branch)), 1.0, 1e-10);
    }
}

TEST(DualSource, AmplitudeRoundTrip) {
    const std::vector<std::pair<Complex, Complex>> targets{
        {std::sqrt(0.9), std::sqrt(0.1)},
        {std::sqrt(0.1), std::sqrt(0.9)},
        {0.6, Complex(0.0, 0.8)},
        {Complex(0.0, 0.8), std::polar(0.6, -2.0)},
        {1.0, 0.0},
    };
    for (const auto &[alpha, beta] : targets) {
        SourceParams params;
        params.alpha = alpha;
        params.beta = beta;
        const PureState branch = one_photon_branch(dual_ensemble_source(params));
        const Complex a = amp(branch, {{"S1", 1}, {"p.H", 1}});
        const Complex b = amp(branch, {{"S2", 1}, {"p.V", 1}});
        // Equal up to one global phase.
        const Complex phase = std::abs(a) > 1e-6 ? a / alpha : b / beta;
        EXPECT_NEAR(std::abs(phase), 1.0, 1e-10);
        EXPECT_NEAR(std::abs(a - phase * alpha), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(b - phase * beta), 0.0, 1e-10);
    }
}

TEST(DualSource, CompiledSettingAttenuatesTheStrongerBranch) {
    SourceParams params;
    params.alpha = std::sqrt(0.2);
    params.beta = std::sqrt(0.8);
    AmplitudeSetting s = compile_amplitudes(params);
    EXPECT_NEAR(s.t_ensemble1, 0.25, 1e-12);
    EXPECT_EQ(s.t_ensemble2, 1.0);
    std::swap(params.alpha, params.beta);
    s = compile_amplitudes(params);
    EXPECT_EQ(s.t_ensemble1, 1.0);
    EXPECT_NEAR(s.t_ensemble2, 0.25, 1e-12);
    EXPECT_NEAR(s.pump_probability, 0.8 * params.p0, 1e-15);
}

TEST(DualSource, HigherOrderTruncation) {
    SourceParams params;
    params.p0 = 0.05;
    params.emission_order = 2;
    const PureState s = dual_ensemble_source(params);
    int most = 0;
    for (const auto &[occ, a] : s.amplitudes()) {
        most = std::max(most, occ[0] + occ[1]);
    }
    EXPECT_EQ(most, 2);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    EXPECT_GT(s.truncation_loss(), 0.0);
}

TEST(SourceParams, Validation) {
    SourceParams p;
    p.p0 = 0.3;
    EXPECT_THROW(p.validate(), ValidationError);
    p = SourceParams{};
    p.emission_order = 4;
    EXPECT_THROW(p.validate(6), ValidationError);
    EXPECT_NO_THROW(p.validate(8));
    p = SourceParams{};
    p.alpha = 0.5;
    EXPECT_THROW(p.validate(), ValidationError);
    p = SourceParams{};
    p.epr_visibility = 1.1;
    EXPECT_THROW(p.validate(), ValidationError);
}

TEST(SingleEnsemble, AmplitudesFollowAlphaBeta) {
    SourceParams params;
    params.p0 = 0.02;
    params.alpha = 0.6;
    params.beta = Complex(0.0, 0.8);
    const PureState s = single_ensemble_source(params);
    EXPECT_NEAR(std::abs(amp(s, {{"E.r", 1}, {"p.R", 1}}) * std::sqrt(1.0 + params.p0) - std::sqrt(0.02) * 0.6), 0.0,
                1e-12);
    EXPECT_NEAR(std::abs(amp(s, {{"E.l", 1}, {"p.L", 1}}) * std::sqrt(1.0 + params.p0) -
                         std::sqrt(0.02) * Complex(0.0, 0.8)),
                0.0, 1e-12);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(EprPair, PhiPlusProperties) {
    const PureState pair = epr_pair();
    EXPECT_NEAR(pair.norm_squared(), 1.0, 1e-15);
    for (const auto &[occ, a] : pair.amplitudes()) {
        EXPECT_EQ(total_excitations(occ), 2);
    }
    const Projection h = project(pair, pattern(pair.registry(), {{"A.H", 1}}));
    EXPECT_NEAR(h.probability, 0.5, 1e-15);
    EXPECT_NEAR(std::abs(amp(h.state, {{"A.H", 1}, {"B.H", 1}})), 1.0, 1e-15);
    const Eigen::MatrixXcd rho = two_qubit_density(MixedState::pure(pair), QubitEncoding::dual_rail("A.H", "A.V"),
                                                   QubitEncoding::dual_rail("B.H", "B.V"));
    EXPECT_NEAR(concurrence(rho), 1.0, 1e-10);
}

TEST(EprPair, WernerFidelity) {
    for (double v : {0.0, 0.5, 0.9, 1.0}) {
        const MixedState w = werner_pair(v);
        EXPECT_NEAR(fidelity(epr_pair(), w), v + (1.0 - v) / 4.0, 1e-12);
    }
    EXPECT_THROW(werner_pair(1.5), ValidationError);
}
