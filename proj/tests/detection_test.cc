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

#include "elink/detection.h"

#include <cmath>

#include <gtest/gtest.h>

#include "elink/optics.h"

using namespace elink;

namespace {

RegistryPtr pa_registry() {
    ModeRegistry r;
    r.add(photonic_mode("p", Polarization::kH));
    r.add(photonic_mode("p", Polarization::kV));
    r.add(photonic_mode("A", Polarization::kH));
    r.add(photonic_mode("A", Polarization::kV));
    return make_registry(std::move(r));
}

// (|x_p y_A> + sign |y_p x_A>) / sqrt(2) with x, y in {H, V}.
PureState two_photon_bell(bool same_polarization, double sign) {
    auto reg = pa_registry();
    const ModeRegistry &r = *reg;
    const double s = 1.0 / std::sqrt(2.0);
    if (same_polarization) {
        return PureState(reg, {{occupation(r, {{"p.H", 1}, {"A.H", 1}}), s},
                               {occupation(r, {{"p.V", 1}, {"A.V", 1}}), sign * s}});
    }
    return PureState(reg, {{occupation(r, {{"p.H", 1}, {"A.V", 1}}), s},
                           {occupation(r, {{"p.V", 1}, {"A.H", 1}}), sign * s}});
}

ClickPattern clicks(std::initializer_list<const char *> ids) {
    ClickPattern p;
    for (const char *id : ids) {
        p.counts[id] = 1;
    }
    return p;
}

// Threshold click probability for n photons.
double click_oracle(int n, double eta, double dark) { return 1.0 - std::pow(1.0 - eta, n) * (1.0 - dark); }

}  // namespace

TEST(DetectorSpec, Validation) {
    EXPECT_NO_THROW(DetectorSpec{}.validate());
    EXPECT_THROW((DetectorSpec{1.2, 0.0, false}.validate()), ValidationError);
    EXPECT_THROW((DetectorSpec{1.0, 1.0, false}.validate()), ValidationError);
    EXPECT_THROW((DetectorSpec{1.0, -0.1, false}.validate()), ValidationError);
}

TEST(HeraldRule, StandardTable) {
    const HeraldRule rule = HeraldRule::standard();
    const std::vector<const char *> ids{kDetectorH, kDetectorV, kDetectorHPrime, kDetectorVPrime};
    int minus = 0;
    int plus = 0;
    for (int mask = 0; mask < 16; ++mask) {
        ClickPattern p;
        for (int i = 0; i < 4; ++i) {
            if (mask & (1 << i)) {
                p.counts[ids[i]] = 1;
            }
        }
        const Herald h = rule.classify(p);
        minus += h == Herald::kPsiMinus;
        plus += h == Herald::kPsiPlus;
    }
    EXPECT_EQ(minus, 2);
    EXPECT_EQ(plus, 2);
    EXPECT_EQ(rule.classify(clicks({"D_H", "D_V'"})), Herald::kPsiMinus);
    EXPECT_EQ(rule.classify(clicks({"D_V", "D_H'"})), Herald::kPsiMinus);
    EXPECT_EQ(rule.classify(clicks({"D_H", "D_V"})), Herald::kPsiPlus);
    EXPECT_EQ(rule.classify(clicks({"D_H'", "D_V'"})), Herald::kPsiPlus);
    ClickPattern doubled = clicks({"D_H", "D_V'"});
    doubled.counts["D_H"] = 2;
    EXPECT_EQ(rule.classify(doubled), Herald::kFail);
}

TEST(HeraldRule, TextRoundTripAndErrors) {
    const HeraldRule rule = HeraldRule::standard();
    const HeraldRule again = HeraldRule::parse(rule.to_string());
    EXPECT_EQ(again.to_string(), rule.to_string());
    const HeraldRule custom = HeraldRule::parse("psi_minus: D_H+D_V'");
    EXPECT_EQ(custom.classify(clicks({"D_H", "D_V'"})), Herald::kPsiMinus);
    EXPECT_EQ(custom.classify(clicks({"D_V", "D_H'"})), Herald::kFail);
    EXPECT_THROW(HeraldRule::parse("phi_plus: D_H+D_V"), ValidationError);
    EXPECT_THROW(HeraldRule::parse("psi_minus: D_H+D_V; psi_plus: D_V+D_H"), ValidationError);
    EXPECT_THROW(HeraldRule::parse("D_H+D_V"), ValidationError);
}

TEST(OutcomeDistribution, HongOuMandel) {
    auto reg = pa_registry();
    const PureState in = PureState::basis(reg, occupation(*reg, {{"p.H", 1}, {"A.H", 1}}));
    const PureState out = beam_splitter(in, "p", "A");
    const auto dist = exact_outcome_distribution(out, {"p.H", "A.H"});
    double coincidence = 0.0;
    double total = 0.0;
    for (const auto &o : dist) {
        total += o.probability;
        if (o.photons == Occupation{1, 1}) {
            coincidence += o.probability;
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_NEAR(coincidence, 0.0, 1e-14);
    EXPECT_EQ(dist.size(), 2u);
}

TEST(DetectionModel, ReadingProbabilitiesMatchThinningOracle) {
    auto reg = pa_registry();
    const double eta = 0.7;
    const double dark = 0.01;
    for (int n : {0, 1, 2}) {
        const PureState in = PureState::basis(reg, occupation(*reg, {{"p.H", n}}));
        const DetectionModel model(MixedState::pure(in), {{"d", "p.H", {eta, dark, false}}});
        ASSERT_EQ(model.outcomes().size(), 1u);
        EXPECT_NEAR(model.reading_probability(0, clicks({"d"})), click_oracle(n, eta, dark), 1e-14);
        EXPECT_NEAR(model.reading_probability(0, ClickPattern{}), 1.0 - click_oracle(n, eta, dark), 1e-14);
    }
}

TEST(DetectionModel, ResolvingCountsAddDarkClicks) {
    auto reg = pa_registry();
    const PureState in = PureState::basis(reg, occupation(*reg, {{"p.H", 2}}));
    const DetectionModel model(MixedState::pure(in), {{"d", "p.H", {0.5, 0.1, true}}});
    ClickPattern three;
    three.counts["d"] = 3;
    ClickPattern two;
    two.counts["d"] = 2;
    EXPECT_NEAR(model.reading_probability(0, three), 0.25 * 0.1, 1e-14);
    EXPECT_NEAR(model.reading_probability(0, two), 0.25 * 0.9 + 0.5 * 0.1, 1e-14);
    double total = 0.0;
    for (const auto &[p, prob] : model.readings(0)) {
        total += prob;
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(DetectionModel, DarkCountsOnVacuum) {
    auto reg = pa_registry();
    const double d = 1e-3;
    const PureState vac = PureState::vacuum(reg);
    const MixedState routed = bell_network(MixedState::pure(vac), "p", "A");
    const DetectionModel model(routed, bell_detectors({1.0, d, false}));
    const auto dist = model.pattern_distribution();
    double total = 0.0;
    for (const auto &[p, prob] : dist) {
        total += prob;
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_NEAR(dist.at(clicks({"D_H", "D_V'"})), d * d * (1 - d) * (1 - d), 1e-18);
}

TEST(BellAnalyzer, DistinguishesPsiStatesOnly) {
    struct Case {
        bool same;
        double sign;
        Herald expected;
    };
    const std::vector<Case> cases{{false, -1.0, Herald::kPsiMinus},
                                  {false, 1.0, Herald::kPsiPlus},
                                  {true, 1.0, Herald::kFail},
                                  {true, -1.0, Herald::kFail}};
    for (const auto &c : cases) {
        const BellAnalyzer analyzer(MixedState::pure(two_photon_bell(c.same, c.sign)), "p", "A",
                                    DetectorSpec::ideal());
        for (Herald h : {Herald::kPsiMinus, Herald::kPsiPlus, Herald::kFail}) {
            EXPECT_NEAR(analyzer.exact(h).probability, h == c.expected ? 1.0 : 0.0, 1e-14)
                << "same=" << c.same << " sign=" << c.sign << " herald=" << to_string(h);
        }
    }
}

TEST(BellAnalyzer, ProductInputHeraldsHalfTheTime) {
    // |H>_p |V>_A is an equal mix of Psi+ and Psi-.
    auto reg = pa_registry();
    const PureState in = PureState::basis(reg, occupation(*reg, {{"p.H", 1}, {"A.V", 1}}));
    const BellAnalyzer analyzer(MixedState::pure(in), "p", "A", DetectorSpec::ideal());
    EXPECT_NEAR(analyzer.exact(Herald::kPsiMinus).probability, 0.5, 1e-14);
    EXPECT_NEAR(analyzer.exact(Herald::kPsiPlus).probability, 0.5, 1e-14);
}

TEST(BellAnalyzer, SamplingIsReproducible) {
    const BellAnalyzer analyzer(MixedState::pure(two_photon_bell(false, -1.0)), "p", "A", DetectorSpec{0.9, 0.01, false});
    for (std::uint64_t i = 0; i < 50; ++i) {
        TrialStream a(42, i);
        TrialStream b(42, i);
        const auto ta = analyzer.sample(a);
        const auto tb = analyzer.sample(b);
        EXPECT_EQ(ta.herald, tb.herald);
        EXPECT_EQ(ta.pattern, tb.pattern);
        EXPECT_EQ(ta.herald, analyzer.rule().classify(ta.pattern));
    }
}

TEST(Measure, ConditionalStateDropsMeasuredModes) {
    const PureState in = two_photon_bell(true, 1.0);
    TrialStream stream(1, 0);
    const Measurement m = measure(MixedState::pure(in), {{"d", "p.H", DetectorSpec::ideal()}}, stream);
    EXPECT_FALSE(m.conditional.registry().find("p.H").has_value());
    EXPECT_NEAR(m.probability, 0.5, 1e-14);
    const ModeRegistry &r = m.conditional.registry();
    const PureState &left = m.conditional.branches().front().state;
    const Occupation expected = m.pattern.clicked("d") ? occupation(r, {{"A.H", 1}})
                                                       : occupation(r, {{"p.V", 1}, {"A.V", 1}});
    EXPECT_NEAR(std::norm(left.amplitude(expected)), 1.0, 1e-14);
}
