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

#include <algorithm>
#include <cmath>
#include <functional>

#include "elink/optics.h"

namespace elink {

void DetectorSpec::validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw ValidationError("detector efficiency must lie in [0, 1]");
    }
    if (!(dark_prob >= 0.0 && dark_prob < 1.0)) {
        throw ValidationError("dark_prob must lie in [0, 1)");
    }
}

std::set<std::string> ClickPattern::detectors() const {
    std::set<std::string> out;
    for (const auto &[id, n] : counts) {
        out.insert(id);
    }
    return out;
}

std::string ClickPattern::to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto &[id, n] : counts) {
        out += (first ? "" : ", ") + id;
        if (n > 1) {
            out += "x" + std::to_string(n);
        }
        first = false;
    }
    return out + "}";
}

std::string_view to_string(Herald herald) {
    switch (herald) {
        case Herald::kPsiMinus:
            return "psi_minus";
        case Herald::kPsiPlus:
            return "psi_plus";
        case Herald::kFail:
            break;
    }
    return "fail";
}

HeraldRule::HeraldRule(std::vector<Class> classes) : classes_(std::move(classes)) {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (classes_[i].detectors.empty()) {
            throw ValidationError("herald class with no detectors");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (classes_[i].detectors == classes_[j].detectors) {
                throw ValidationError("herald classes must be disjoint");
            }
        }
    }
}

HeraldRule HeraldRule::standard() {
    return HeraldRule({
        {{kDetectorH, kDetectorVPrime}, Herald::kPsiMinus},
        {{kDetectorV, kDetectorHPrime}, Herald::kPsiMinus},
        {{kDetectorH, kDetectorV}, Herald::kPsiPlus},
        {{kDetectorHPrime, kDetectorVPrime}, Herald::kPsiPlus},
    });
}

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

}  // namespace

HeraldRule HeraldRule::parse(std::string_view text) {
    std::vector<Class> classes;
    for (const auto &section : split(text, ';')) {
        if (section.empty()) {
            continue;
        }
        const auto colon = section.find(':');
        if (colon == std::string::npos) {
            throw ValidationError("herald rule section '" + section + "' lacks an outcome label");
        }
        const std::string label = trim(std::string_view(section).substr(0, colon));
        Herald outcome;
        if (label == "psi_minus") {
            outcome = Herald::kPsiMinus;
        } else if (label == "psi_plus") {
            outcome = Herald::kPsiPlus;
        } else {
            throw ValidationError("unknown herald outcome '" + label + "'");
        }
        for (const auto &entry : split(std::string_view(section).substr(colon + 1), ',')) {
            Class c{{}, outcome};
            for (const auto &det : split(entry, '+')) {
                if (det.empty()) {
                    throw ValidationError("empty detector name in herald rule");
                }
                c.detectors.insert(det);
            }
            classes.push_back(std::move(c));
        }
    }
    return HeraldRule(std::move(classes));
}

std::string HeraldRule::to_string() const {
    std::string out;
    for (Herald h : {Herald::kPsiMinus, Herald::kPsiPlus}) {
        std::string entries;
        for (const auto &c : classes_) {
            if (c.outcome != h) {
                continue;
            }
            std::string set;
            for (const auto &d : c.detectors) {
                set += (set.empty() ? "" : "+") + d;
            }
            entries += (entries.empty() ? "" : ", ") + set;
        }
        if (!entries.empty()) {
            out += (out.empty() ? "" : "; ") + std::string(elink::to_string(h)) + ": " + entries;
        }
    }
    return out;
}

Herald HeraldRule::classify(const ClickPattern &pattern) const {
    for (const auto &[id, n] : pattern.counts) {
        if (n != 1) {
            return Herald::kFail;
        }
    }
    const auto fired = pattern.detectors();
    for (const auto &c : classes_) {
        if (c.detectors == fired) {
            return c.outcome;
        }
    }
    return Herald::kFail;
}

Herald classify(const ClickPattern &pattern, const HeraldRule &rule) { return rule.classify(pattern); }

namespace {

std::vector<std::size_t> resolve_modes(const ModeRegistry &registry, const std::vector<std::string> &names) {
    std::vector<std::size_t> out;
    for (const auto &n : names) {
        out.push_back(registry.index_of(n));
    }
    return out;
}

Occupation measured_part(const Occupation &occ, const std::vector<std::size_t> &modes) {
    Occupation key;
    key.reserve(modes.size());
    for (auto m : modes) {
        key.push_back(occ[m]);
    }
    return key;
}

// Reading distribution of one detector given n incident photons.
std::vector<double> reading_distribution(const DetectorSpec &spec, int photons) {
    const double eta = spec.efficiency;
    const double d = spec.dark_prob;
    if (!spec.resolving) {
        const double none = std::pow(1.0 - eta, photons) * (1.0 - d);
        return {none, 1.0 - none};
    }
    std::vector<double> binom(photons + 1, 0.0);
    for (int k = 0; k <= photons; ++k) {
        double c = 1.0;
        for (int j = 1; j <= k; ++j) {
            c = c * (photons - k + j) / j;
        }
        binom[k] = c * std::pow(eta, k) * std::pow(1.0 - eta, photons - k);
    }
    std::vector<double> out(photons + 2, 0.0);
    for (int k = 0; k <= photons; ++k) {
        out[k] += binom[k] * (1.0 - d);
        out[k + 1] += binom[k] * d;
    }
    return out;
}

}  // namespace

std::vector<OutcomeProbability> exact_outcome_distribution(const MixedState &state,
                                                           const std::vector<std::string> &measured,
                                                           std::size_t max_outcomes) {
    const auto modes = resolve_modes(state.registry(), measured);
    std::map<Occupation, double> table;
    for (const auto &branch : state.branches()) {
        const double n2 = branch.state.norm_squared();
        for (const auto &[occ, amp] : branch.state.amplitudes()) {
            table[measured_part(occ, modes)] += branch.weight * std::norm(amp) / n2;
            if (table.size() > max_outcomes) {
                throw ValidationError("measured subspace exceeds " + std::to_string(max_outcomes) + " outcomes");
            }
        }
    }
    std::vector<OutcomeProbability> out;
    for (auto &[occ, p] : table) {
        out.push_back({occ, p});
    }
    return out;
}

std::vector<OutcomeProbability> exact_outcome_distribution(const PureState &state,
                                                           const std::vector<std::string> &measured,
                                                           std::size_t max_outcomes) {
    return exact_outcome_distribution(MixedState::pure(state), measured, max_outcomes);
}

DetectionModel::DetectionModel(const MixedState &state, DetectorMap detectors) : detectors_(std::move(detectors)) {
    std::vector<std::string> names;
    for (const auto &d : detectors_) {
        d.spec.validate();
        names.push_back(d.mode);
    }
    const auto modes = resolve_modes(state.registry(), names);

    // Per outcome, the (sqrt-weight scaled) projection of every branch.
    std::map<Occupation, std::vector<PureState::Amplitudes>> groups;
    const auto &branches = state.branches();
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const double scale = std::sqrt(branches[b].weight / branches[b].state.norm_squared());
        for (const auto &[occ, amp] : branches[b].state.amplitudes()) {
            auto &per_branch = groups[measured_part(occ, modes)];
            per_branch.resize(branches.size());
            per_branch[b].emplace(occ, amp * scale);
        }
    }
    double running = 0.0;
    for (auto &[photons, per_branch] : groups) {
        std::vector<PureState> parts;
        double p = 0.0;
        for (std::size_t b = 0; b < per_branch.size(); ++b) {
            if (per_branch[b].empty()) {
                continue;
            }
            PureState part(state.registry_ptr(), std::move(per_branch[b]), branches[b].state.truncation_loss());
            p += part.norm_squared();
            parts.push_back(std::move(part));
        }
        if (p <= 0.0) {
            continue;
        }
        MixedState conditional = trace_out(MixedState::from_unnormalized(parts), names);
        running += p;
        outcomes_.push_back({photons, p, std::move(conditional)});
        cumulative_.push_back(running);
    }
    if (outcomes_.empty()) {
        throw ValidationError("state has no measurable outcome");
    }
}

DetectionModel::Sample DetectionModel::sample(TrialStream &stream) const {
    const double u = stream.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t index =
        std::min(static_cast<std::size_t>(it - cumulative_.begin()), outcomes_.size() - 1);
    Sample s;
    s.outcome = index;
    const Occupation &photons = outcomes_[index].photons;
    for (std::size_t d = 0; d < detectors_.size(); ++d) {
        const DetectorSpec &spec = detectors_[d].spec;
        int detected = photons[d];
        if (spec.efficiency < 1.0) {
            detected = 0;
            for (int k = 0; k < photons[d]; ++k) {
                detected += stream.bernoulli(spec.efficiency) ? 1 : 0;
            }
        }
        const bool dark = spec.dark_prob > 0.0 && stream.bernoulli(spec.dark_prob);
        int reading = spec.resolving ? detected + (dark ? 1 : 0) : ((detected > 0 || dark) ? 1 : 0);
        if (reading > 0) {
            s.pattern.counts[detectors_[d].id] = reading;
        }
    }
    return s;
}

double DetectionModel::reading_probability(std::size_t outcome, const ClickPattern &pattern) const {
    const Occupation &photons = outcomes_.at(outcome).photons;
    double p = 1.0;
    for (std::size_t d = 0; d < detectors_.size(); ++d) {
        const auto dist = reading_distribution(detectors_[d].spec, photons[d]);
        auto it = pattern.counts.find(detectors_[d].id);
        const int reading = it == pattern.counts.end() ? 0 : it->second;
        p *= reading < static_cast<int>(dist.size()) ? dist[reading] : 0.0;
    }
    return p;
}

std::map<ClickPattern, double> DetectionModel::readings(std::size_t outcome) const {
    const Occupation &photons = outcomes_.at(outcome).photons;
    std::vector<std::vector<double>> dists;
    for (std::size_t d = 0; d < detectors_.size(); ++d) {
        dists.push_back(reading_distribution(detectors_[d].spec, photons[d]));
    }
    std::map<ClickPattern, double> out;
    ClickPattern current;
    std::function<void(std::size_t, double)> recurse = [&](std::size_t d, double p) {
        if (p <= 0.0) {
            return;
        }
        if (d == detectors_.size()) {
            out[current] += p;
            return;
        }
        for (std::size_t r = 0; r < dists[d].size(); ++r) {
            if (r > 0) {
                current.counts[detectors_[d].id] = static_cast<int>(r);
            }
            recurse(d + 1, p * dists[d][r]);
            current.counts.erase(detectors_[d].id);
        }
    };
    recurse(0, 1.0);
    return out;
}

std::map<ClickPattern, double> DetectionModel::pattern_distribution() const {
    std::map<ClickPattern, double> out;
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        for (const auto &[pattern, p] : readings(i)) {
            out[pattern] += outcomes_[i].probability * p;
        }
    }
    return out;
}

Measurement measure(const MixedState &state, const DetectorMap &detectors, TrialStream &stream) {
    DetectionModel model(state, detectors);
    auto sample = model.sample(stream);
    const auto distribution = model.pattern_distribution();
    return {sample.pattern, model.outcomes()[sample.outcome].conditional, distribution.at(sample.pattern)};
}

MixedState bell_network(const MixedState &state, std::string_view path_p, std::string_view path_a) {
    return state.map([&](const PureState &s) {
        PureState out = beam_splitter(s, path_p, path_a, 0.5);
        out = pol_splitter(out, path_p, kDetectorH, kDetectorV);
        return pol_splitter(out, path_a, kDetectorHPrime, kDetectorVPrime);
    });
}

DetectorMap bell_detectors(const DetectorSpec &spec) {
    return {
        {kDetectorH, std::string(kDetectorH) + ".H", spec},
        {kDetectorV, std::string(kDetectorV) + ".V", spec},
        {kDetectorHPrime, std::string(kDetectorHPrime) + ".H", spec},
        {kDetectorVPrime, std::string(kDetectorVPrime) + ".V", spec},
    };
}

BellAnalyzer::BellAnalyzer(const MixedState &state, std::string_view path_p, std::string_view path_a,
                           const DetectorSpec &spec, HeraldRule rule)
    : model_(bell_network(state, path_p, path_a), bell_detectors(spec)), rule_(std::move(rule)) {}

BellAnalyzer::ClassResult BellAnalyzer::exact(Herald herald) const {
    ClassResult result;
    std::vector<Branch> parts;
    for (std::size_t i = 0; i < model_.outcomes().size(); ++i) {
        double p_class = 0.0;
        for (const auto &[pattern, p] : model_.readings(i)) {
            if (rule_.classify(pattern) == herald) {
                p_class += p;
            }
        }
        const double w = model_.outcomes()[i].probability * p_class;
        if (w <= 0.0) {
            continue;
        }
        result.probability += w;
        for (const auto &b : model_.outcomes()[i].conditional.branches()) {
            parts.push_back({w * b.weight, b.state});
        }
    }
    if (result.probability > 0.0) {
        for (auto &b : parts) {
            b.weight /= result.probability;
        }
        double total = 0.0;
        for (const auto &b : parts) {
            total += b.weight;
        }
        for (auto &b : parts) {
            b.weight /= total;
        }
        result.conditional = MixedState(std::move(parts));
    }
    return result;
}

Herald BellAnalyzer::ideal_herald(std::size_t outcome) const {
    ClickPattern pattern;
    const auto &photons = model_.outcomes().at(outcome).photons;
    for (std::size_t d = 0; d < model_.detectors().size(); ++d) {
        if (photons[d] > 0) {
            pattern.counts[model_.detectors()[d].id] = model_.detectors()[d].spec.resolving ? photons[d] : 1;
        }
    }
    return rule_.classify(pattern);
}

BellAnalyzer::Trial BellAnalyzer::sample(TrialStream &stream) const {
    auto s = model_.sample(stream);
    return {rule_.classify(s.pattern), s.outcome, std::move(s.pattern)};
}

BellResult bell_analyzer(const MixedState &state, std::string_view path_p, std::string_view path_a,
                         const DetectorSpec &spec, TrialStream &stream, const HeraldRule &rule) {
    BellAnalyzer analyzer(state, path_p, path_a, spec, rule);
    auto trial = analyzer.sample(stream);
    return {trial.herald, analyzer.model().outcomes()[trial.outcome].conditional,
            analyzer.exact(trial.herald).probability};
}

}  // namespace elink
