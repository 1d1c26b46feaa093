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
 * Photon detection: Born-rule outcome tables, detector imperfections, and the
 * four-detector Bell-state analyzer.
 *
 * A detector sees the photon number n of its mode. Efficiency thins each photon
 * independently before the click decision, then a dark click is OR-ed in
 * (threshold) or added (resolving). Conditional states are always conditioned
 * on the true photon numbers, with the measured modes removed.
 */

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "elink/fock.h"
#include "elink/rng.h"

namespace elink {

struct DetectorSpec {
    double efficiency = 1.0;
    double dark_prob = 1e-5;
    bool resolving = false;

    void validate() const;
    static DetectorSpec ideal() { return {1.0, 0.0, false}; }
    bool operator==(const DetectorSpec &) const = default;
};

struct Detector {
    std::string id;
    std::string mode;
    DetectorSpec spec;
};

using DetectorMap = std::vector<Detector>;

/// Detector readings; only detectors that fired are stored.
struct ClickPattern {
    std::map<std::string, int> counts;

    bool clicked(std::string_view id) const { return counts.find(std::string(id)) != counts.end(); }
    std::set<std::string> detectors() const;
    std::string to_string() const;

    auto operator<=>(const ClickPattern &) const = default;
};

enum class Herald { kPsiMinus, kPsiPlus, kFail };

std::string_view to_string(Herald herald);

/// Maps exact detector sets to outcomes. A pattern matches a class only if it
/// fired exactly those detectors, each once; everything else is kFail.
class HeraldRule {
  public:
    struct Class {
        std::set<std::string> detectors;
        Herald outcome = Herald::kFail;
    };

    explicit HeraldRule(std::vector<Class> classes);

    /// {D_H, D_V'} and {D_V, D_H'} herald Psi-; {D_H, D_V} and {D_H', D_V'} herald Psi+.
    static HeraldRule standard();

    /// Text form: `psi_minus: D_H+D_V', D_V+D_H'; psi_plus: D_H+D_V, D_H'+D_V'`.
    static HeraldRule parse(std::string_view text);
    std::string to_string() const;

    Herald classify(const ClickPattern &pattern) const;
    const std::vector<Class> &classes() const { return classes_; }

  private:
    std::vector<Class> classes_;
};

Herald classify(const ClickPattern &pattern, const HeraldRule &rule);

struct OutcomeProbability {
    Occupation photons;  // one entry per measured mode, in the order given
    double probability = 0.0;
};

/// Exhaustive Born distribution over the photon numbers of the measured modes.
/// Throws ValidationError if there are more than max_outcomes distinct outcomes.
std::vector<OutcomeProbability> exact_outcome_distribution(const MixedState &state,
                                                           const std::vector<std::string> &measured,
                                                           std::size_t max_outcomes = 4096);
std::vector<OutcomeProbability> exact_outcome_distribution(const PureState &state,
                                                           const std::vector<std::string> &measured,
                                                           std::size_t max_outcomes = 4096);

/// Outcome table of one state under one detector set, built once and sampled
/// many times.
class DetectionModel {
  public:
    struct Outcome {
        Occupation photons;
        double probability = 0.0;
        MixedState conditional;
    };

    struct Sample {
        std::size_t outcome = 0;
        ClickPattern pattern;
    };

    DetectionModel(const MixedState &state, DetectorMap detectors);

    const std::vector<Outcome> &outcomes() const { return outcomes_; }
    const DetectorMap &detectors() const { return detectors_; }

    Sample sample(TrialStream &stream) const;

    /// P(readings | photon numbers of the given outcome).
    double reading_probability(std::size_t outcome, const ClickPattern &pattern) const;

    /// Every reachable pattern of one outcome with its conditional probability.
    std::map<ClickPattern, double> readings(std::size_t outcome) const;

    /// Exact distribution of observed patterns, imperfections included.
    std::map<ClickPattern, double> pattern_distribution() const;

  private:
    DetectorMap detectors_;
    std::vector<Outcome> outcomes_;
    std::vector<double> cumulative_;
};

struct Measurement {
    ClickPattern pattern;
    MixedState conditional;  // conditioned on the true photon numbers
    double probability = 0.0;  // total probability of the observed pattern
};

Measurement measure(const MixedState &state, const DetectorMap &detectors, TrialStream &stream);

inline constexpr const char *kDetectorH = "D_H";
inline constexpr const char *kDetectorV = "D_V";
inline constexpr const char *kDetectorHPrime = "D_H'";
inline constexpr const char *kDetectorVPrime = "D_V'";

/// 50/50 beam splitter on (p, a) followed by a polarization splitter on each
/// output: the p side feeds D_H / D_V, the a side feeds D_H' / D_V'.
MixedState bell_network(const MixedState &state, std::string_view path_p, std::string_view path_a);

/// The four analyzer detectors with one shared spec.
DetectorMap bell_detectors(const DetectorSpec &spec);

class BellAnalyzer {
  public:
    struct ClassResult {
        double probability = 0.0;
        std::optional<MixedState> conditional;
    };

    struct Trial {
        Herald herald = Herald::kFail;
        std::size_t outcome = 0;
        ClickPattern pattern;
    };

    BellAnalyzer(const MixedState &state, std::string_view path_p, std::string_view path_a,
                 const DetectorSpec &spec, HeraldRule rule = HeraldRule::standard());

    const DetectionModel &model() const { return model_; }
    const HeraldRule &rule() const { return rule_; }

    /// Exact probability of a herald class and the state conditioned on it.
    ClassResult exact(Herald herald) const;

    /// Herald class of each true outcome read by ideal detectors.
    Herald ideal_herald(std::size_t outcome) const;

    Trial sample(TrialStream &stream) const;

  private:
    DetectionModel model_;
    HeraldRule rule_;
};

struct BellResult {
    Herald outcome = Herald::kFail;
    std::optional<MixedState> conditional;
    double probability = 0.0;  // probability of the returned outcome class
};

/// Samples one trial through the analyzer. Exact class probabilities come from
/// BellAnalyzer::exact.
BellResult bell_analyzer(const MixedState &state, std::string_view path_p, std::string_view path_a,
                         const DetectorSpec &spec, TrialStream &stream,
                         const HeraldRule &rule = HeraldRule::standard());

}  // namespace elink
