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

#include "elink/fock.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace elink {

namespace {

double sqrt_factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) {
        f *= static_cast<double>(k);
    }
    return std::sqrt(f);
}

void add_amplitude(PureState::Amplitudes &amps, const Occupation &occ, Complex value) {
    auto [it, inserted] = amps.try_emplace(occ, value);
    if (!inserted) {
        it->second += value;
    }
}

}  // namespace

char polarization_char(Polarization pol) {
    switch (pol) {
        case Polarization::kR:
            return 'R';
        case Polarization::kL:
            return 'L';
        case Polarization::kH:
            return 'H';
        case Polarization::kV:
            return 'V';
        case Polarization::kNone:
            break;
    }
    return '-';
}

ModeId photonic_mode(std::string path, Polarization pol) {
    ModeId id;
    id.name = path + "." + polarization_char(pol);
    id.kind = ModeKind::kPhotonic;
    id.path = std::move(path);
    id.pol = pol;
    return id;
}

ModeId atomic_mode(std::string name) { return ModeId{std::move(name), ModeKind::kAtomic, "", Polarization::kNone}; }

ModeId loss_mode(std::string name) { return ModeId{std::move(name), ModeKind::kLoss, "", Polarization::kNone}; }

ModeRegistry::ModeRegistry(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 1 || cutoff > 255) {
        throw ValidationError("excitation cutoff must lie in [1, 255]");
    }
}

std::size_t ModeRegistry::add(ModeId mode) {
    if (mode.name.empty()) {
        throw RegistryError("mode name must not be empty");
    }
    if (find(mode.name)) {
        throw RegistryError("duplicate mode '" + mode.name + "'");
    }
    if (mode.kind != ModeKind::kPhotonic && (!mode.path.empty() || mode.pol != Polarization::kNone)) {
        throw RegistryError("non-photonic mode '" + mode.name + "' cannot carry a path or polarization");
    }
    modes_.push_back(std::move(mode));
    return modes_.size() - 1;
}

std::optional<std::size_t> ModeRegistry::find(std::string_view name) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t ModeRegistry::index_of(std::string_view name) const {
    auto index = find(name);
    if (!index) {
        throw RegistryError("unknown mode '" + std::string(name) + "'");
    }
    return *index;
}

std::optional<std::size_t> ModeRegistry::find(std::string_view path, Polarization pol) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].kind == ModeKind::kPhotonic && modes_[i].path == path && modes_[i].pol == pol) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<std::size_t> ModeRegistry::modes_on_path(std::string_view path) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].kind == ModeKind::kPhotonic && modes_[i].path == path) {
            out.push_back(i);
        }
    }
    return out;
}

RegistryPtr make_registry(ModeRegistry registry) {
    return std::make_shared<const ModeRegistry>(std::move(registry));
}

Occupation occupation(const ModeRegistry &registry,
                      std::initializer_list<std::pair<std::string_view, int>> counts) {
    Occupation occ(registry.size(), 0);
    for (const auto &[name, n] : counts) {
        if (n < 0 || n > 255) {
            throw ValidationError("occupation out of range for mode '" + std::string(name) + "'");
        }
        occ[registry.index_of(name)] = static_cast<std::uint8_t>(n);
    }
    return occ;
}

int total_excitations(const Occupation &occ) {
    return std::accumulate(occ.begin(), occ.end(), 0);
}

PureState::PureState(RegistryPtr registry, Amplitudes amplitudes, double truncation_loss)
    : registry_(std::move(registry)), truncation_loss_(truncation_loss) {
    if (!registry_) {
        throw RegistryError("state requires a registry");
    }
    for (auto &[occ, amp] : amplitudes) {
        if (occ.size() != registry_->size()) {
            throw ValidationError("basis vector length does not match the registry");
        }
        if (total_excitations(occ) > registry_->cutoff()) {
            throw ValidationError("basis vector exceeds the excitation cutoff");
        }
        if (std::abs(amp) >= kAmplitudeEpsilon) {
            amplitudes_.emplace(occ, amp);
        }
    }
}

PureState PureState::vacuum(RegistryPtr registry) {
    Occupation zero(registry->size(), 0);
    return PureState(std::move(registry), {{zero, 1.0}});
}

PureState PureState::basis(RegistryPtr registry, Occupation occ, Complex amplitude) {
    return PureState(std::move(registry), {{std::move(occ), amplitude}});
}

double PureState::norm_squared() const {
    double sum = 0.0;
    for (const auto &[occ, amp] : amplitudes_) {
        sum += std::norm(amp);
    }
    return sum;
}

Complex PureState::amplitude(const Occupation &occ) const {
    auto it = amplitudes_.find(occ);
    return it == amplitudes_.end() ? Complex{} : it->second;
}

PureState PureState::normalized() const {
    double n2 = norm_squared();
    if (n2 <= 0.0) {
        throw ValidationError("cannot normalize an empty state");
    }
    return scaled(1.0 / std::sqrt(n2));
}

PureState PureState::scaled(Complex factor) const {
    Amplitudes out;
    for (const auto &[occ, amp] : amplitudes_) {
        out.emplace_hint(out.end(), occ, amp * factor);
    }
    return PureState(registry_, std::move(out), truncation_loss_);
}

PureState PureState::with_truncation_loss(double loss) const {
    PureState copy = *this;
    copy.truncation_loss_ = loss;
    return copy;
}

PureState operator+(const PureState &a, const PureState &b) {
    require_same_registry(a.registry(), b.registry());
    PureState::Amplitudes sum = a.amplitudes_;
    for (const auto &[occ, amp] : b.amplitudes_) {
        add_amplitude(sum, occ, amp);
    }
    return PureState(a.registry_, std::move(sum), a.truncation_loss_ + b.truncation_loss_);
}

void require_same_registry(const ModeRegistry &a, const ModeRegistry &b) {
    if (&a != &b && !(a == b)) {
        throw RegistryError("states belong to different mode registries");
    }
}

MixedState::MixedState(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) {
        throw ValidationError("mixed state needs at least one branch");
    }
    double total = 0.0;
    for (const auto &b : branches_) {
        if (!(b.weight > 0.0)) {
            throw ValidationError("branch weights must be positive");
        }
        require_same_registry(b.state.registry(), branches_.front().state.registry());
        if (std::abs(b.state.norm_squared() - 1.0) > 1e-9) {
            throw ValidationError("branch states must be normalized");
        }
        total += b.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("branch weights must sum to 1");
    }
}

MixedState MixedState::pure(const PureState &state) { return MixedState({{1.0, state.normalized()}}); }

MixedState MixedState::from_unnormalized(const std::vector<PureState> &states) {
    double total = 0.0;
    for (const auto &s : states) {
        total += s.norm_squared();
    }
    if (total <= 0.0) {
        throw ValidationError("all branches are empty");
    }
    std::vector<Branch> branches;
    double kept = 0.0;
    for (const auto &s : states) {
        double w = s.norm_squared() / total;
        if (w > 0.0) {
            branches.push_back({w, s.normalized()});
            kept += w;
        }
    }
    // Re-sum so the 1e-12 invariant holds after dropping zero-weight branches.
    for (auto &b : branches) {
        b.weight /= kept;
    }
    return MixedState(std::move(branches));
}

double MixedState::truncation_loss() const {
    double loss = 0.0;
    for (const auto &b : branches_) {
        loss += b.weight * b.state.truncation_loss();
    }
    return loss;
}

MixedState MixedState::map(const std::function<PureState(const PureState &)> &fn) const {
    std::vector<Branch> out;
    out.reserve(branches_.size());
    for (const auto &b : branches_) {
        out.push_back({b.weight, fn(b.state)});
    }
    return MixedState(std::move(out));
}

PureState create(const PureState &state, std::string_view mode) {
    return create(state, state.registry().index_of(mode));
}

PureState create(const PureState &state, std::size_t mode) {
    if (mode >= state.registry().size()) {
        throw RegistryError("mode index out of range");
    }
    const int cutoff = state.registry().cutoff();
    PureState::Amplitudes out;
    double dropped = 0.0;
    for (const auto &[occ, amp] : state.amplitudes()) {
        const int n = occ[mode];
        const double factor = std::sqrt(static_cast<double>(n + 1));
        if (total_excitations(occ) + 1 > cutoff) {
            dropped += std::norm(amp) * (n + 1);
            continue;
        }
        Occupation next = occ;
        next[mode] = static_cast<std::uint8_t>(n + 1);
        out.emplace(std::move(next), amp * factor);
    }
    return PureState(state.registry_ptr(), std::move(out), state.truncation_loss() + dropped);
}

PureState apply_mode_unitary(const PureState &state, std::span<const std::size_t> modes,
                             const Eigen::MatrixXcd &unitary) {
    const auto k = static_cast<Eigen::Index>(modes.size());
    if (unitary.rows() != k || unitary.cols() != k) {
        throw ValidationError("unitary dimension does not match the mode list");
    }
    if (!(unitary.adjoint() * unitary).isIdentity(1e-10)) {
        throw ValidationError("mode transformation is not unitary");
    }
    std::set<std::size_t> distinct(modes.begin(), modes.end());
    if (distinct.size() != modes.size()) {
        throw ValidationError("mode list contains duplicates");
    }
    for (auto m : modes) {
        if (m >= state.registry().size()) {
            throw RegistryError("mode index out of range");
        }
    }

    // Each basis term is prod_i (a_i^dag)^{n_i} / sqrt(n_i!) |rest>. Expand the
    // substituted product as a polynomial in the output creation operators,
    // tracked by exponent vector, then convert monomials back to Fock amplitudes.
    using Exponents = std::vector<int>;
    PureState::Amplitudes out;
    for (const auto &[occ, amp] : state.amplitudes()) {
        Complex coefficient = amp;
        Occupation rest = occ;
        for (auto m : modes) {
            coefficient /= sqrt_factorial(occ[m]);
            rest[m] = 0;
        }
        std::map<Exponents, Complex> poly{{Exponents(modes.size(), 0), coefficient}};
        for (Eigen::Index i = 0; i < k; ++i) {
            for (int rep = 0; rep < occ[modes[i]]; ++rep) {
                std::map<Exponents, Complex> next;
                for (const auto &[exps, value] : poly) {
                    for (Eigen::Index j = 0; j < k; ++j) {
                        const Complex u = unitary(j, i);
                        if (u == Complex{}) {
                            continue;
                        }
                        Exponents e = exps;
                        ++e[j];
                        next[e] += value * u;
                    }
                }
                poly = std::move(next);
            }
        }
        for (const auto &[exps, value] : poly) {
            Occupation target = rest;
            double norm = 1.0;
            for (Eigen::Index j = 0; j < k; ++j) {
                target[modes[j]] = static_cast<std::uint8_t>(exps[j]);
                norm *= sqrt_factorial(exps[j]);
            }
            add_amplitude(out, target, value * norm);
        }
    }
    return PureState(state.registry_ptr(), std::move(out), state.truncation_loss());
}

PureState apply_mode_unitary(const PureState &state, const std::vector<std::string> &modes,
                             const Eigen::MatrixXcd &unitary) {
    std::vector<std::size_t> indices;
    indices.reserve(modes.size());
    for (const auto &name : modes) {
        indices.push_back(state.registry().index_of(name));
    }
    return apply_mode_unitary(state, indices, unitary);
}

Complex inner_product(const PureState &a, const PureState &b) {
    require_same_registry(a.registry(), b.registry());
    Complex sum{};
    for (const auto &[occ, amp] : a.amplitudes()) {
        auto it = b.amplitudes().find(occ);
        if (it != b.amplitudes().end()) {
            sum += std::conj(amp) * it->second;
        }
    }
    return sum;
}

ModePattern pattern(const ModeRegistry &registry,
                    std::initializer_list<std::pair<std::string_view, int>> counts) {
    ModePattern out;
    for (const auto &[name, n] : counts) {
        out.emplace_back(registry.index_of(name), n);
    }
    return out;
}

PureState project_unnormalized(const PureState &state, const ModePattern &predicate) {
    for (const auto &[mode, n] : predicate) {
        if (mode >= state.registry().size()) {
            throw RegistryError("predicate refers to an unregistered mode");
        }
    }
    PureState::Amplitudes out;
    for (const auto &[occ, amp] : state.amplitudes()) {
        bool match = std::all_of(predicate.begin(), predicate.end(),
                                 [&occ](const auto &req) { return occ[req.first] == req.second; });
        if (match) {
            out.emplace_hint(out.end(), occ, amp);
        }
    }
    return PureState(state.registry_ptr(), std::move(out), state.truncation_loss());
}

Projection project(const PureState &state, const ModePattern &predicate) {
    PureState kept = project_unnormalized(state, predicate);
    const double total = state.norm_squared();
    const double p = total > 0.0 ? kept.norm_squared() / total : 0.0;
    if (kept.empty()) {
        return {kept, 0.0};
    }
    return {kept.normalized(), p};
}

PureState tensor(const PureState &a, const PureState &b) {
    if (a.registry().cutoff() != b.registry().cutoff()) {
        throw RegistryError("cannot combine registries with different cutoffs");
    }
    ModeRegistry combined(a.registry().cutoff());
    for (const auto &m : a.registry().modes()) {
        combined.add(m);
    }
    for (const auto &m : b.registry().modes()) {
        combined.add(m);
    }
    auto registry = make_registry(std::move(combined));
    PureState::Amplitudes out;
    double dropped = 0.0;
    for (const auto &[oa, ca] : a.amplitudes()) {
        for (const auto &[ob, cb] : b.amplitudes()) {
            const Complex c = ca * cb;
            if (total_excitations(oa) + total_excitations(ob) > registry->cutoff()) {
                dropped += std::norm(c);
                continue;
            }
            Occupation occ = oa;
            occ.insert(occ.end(), ob.begin(), ob.end());
            out.emplace(std::move(occ), c);
        }
    }
    return PureState(registry, std::move(out), a.truncation_loss() + b.truncation_loss() + dropped);
}

MixedState tensor(const MixedState &a, const MixedState &b) {
    std::vector<PureState> states;
    for (const auto &ba : a.branches()) {
        for (const auto &bb : b.branches()) {
            states.push_back(tensor(ba.state, bb.state).scaled(std::sqrt(ba.weight * bb.weight)));
        }
    }
    // Register every product state against one shared registry.
    const RegistryPtr shared = states.front().registry_ptr();
    for (auto &s : states) {
        s = PureState(shared, s.amplitudes(), s.truncation_loss());
    }
    return MixedState::from_unnormalized(states);
}

PureState relabel_modes(const PureState &state,
                        const std::vector<std::pair<std::size_t, ModeId>> &replacements) {
    std::vector<ModeId> modes = state.registry().modes();
    for (const auto &[index, id] : replacements) {
        if (index >= modes.size()) {
            throw RegistryError("relabel index out of range");
        }
        modes[index] = id;
    }
    ModeRegistry next(state.registry().cutoff());
    for (auto &m : modes) {
        next.add(std::move(m));
    }
    return PureState(make_registry(std::move(next)), state.amplitudes(), state.truncation_loss());
}

PureState extend(const PureState &state, ModeId mode) {
    ModeRegistry next = state.registry();
    next.add(std::move(mode));
    PureState::Amplitudes out;
    for (const auto &[occ, amp] : state.amplitudes()) {
        Occupation o = occ;
        o.push_back(0);
        out.emplace_hint(out.end(), std::move(o), amp);
    }
    return PureState(make_registry(std::move(next)), std::move(out), state.truncation_loss());
}

MixedState trace_out(const MixedState &state, const std::vector<std::string> &modes) {
    const ModeRegistry &registry = state.registry();
    std::vector<bool> traced(registry.size(), false);
    for (const auto &name : modes) {
        traced[registry.index_of(name)] = true;
    }
    ModeRegistry reduced(registry.cutoff());
    for (std::size_t i = 0; i < registry.size(); ++i) {
        if (!traced[i]) {
            reduced.add(registry.mode(i));
        }
    }
    auto reduced_ptr = make_registry(std::move(reduced));

    std::vector<Branch> out;
    for (const auto &branch : state.branches()) {
        std::map<Occupation, PureState::Amplitudes> groups;
        for (const auto &[occ, amp] : branch.state.amplitudes()) {
            Occupation key;
            Occupation kept;
            for (std::size_t i = 0; i < occ.size(); ++i) {
                (traced[i] ? key : kept).push_back(occ[i]);
            }
            groups[key].emplace(std::move(kept), amp);
        }
        for (auto &[key, amps] : groups) {
            PureState part(reduced_ptr, std::move(amps), branch.state.truncation_loss());
            const double w = part.norm_squared();
            if (w > 0.0) {
                out.push_back({branch.weight * w, part.normalized()});
            }
        }
    }
    double total = 0.0;
    for (const auto &b : out) {
        total += b.weight;
    }
    for (auto &b : out) {
        b.weight /= total;
    }
    return MixedState(std::move(out));
}

MixedState trace_out_kind(const MixedState &state, ModeKind kind) {
    std::vector<std::string> names;
    for (const auto &m : state.registry().modes()) {
        if (m.kind == kind) {
            names.push_back(m.name);
        }
    }
    if (names.empty()) {
        return state;
    }
    return trace_out(state, names);
}

namespace {

std::vector<std::size_t> resolve(const ModeRegistry &registry, const std::vector<std::string> &keep) {
    std::vector<std::size_t> indices;
    for (const auto &name : keep) {
        indices.push_back(registry.index_of(name));
    }
    std::set<std::size_t> distinct(indices.begin(), indices.end());
    if (distinct.size() != indices.size()) {
        throw ValidationError("kept mode list contains duplicates");
    }
    return indices;
}

// Accumulates weight * |psi><psi| reduced onto the kept modes into rho.
void accumulate_reduced(const PureState &state, const std::vector<std::size_t> &keep, double weight,
                        const std::map<Occupation, Eigen::Index> &index, Eigen::MatrixXcd &rho) {
    std::map<Occupation, std::vector<std::pair<Eigen::Index, Complex>>> by_rest;
    const double n2 = state.norm_squared();
    for (const auto &[occ, amp] : state.amplitudes()) {
        Occupation kept;
        Occupation rest = occ;
        for (auto m : keep) {
            kept.push_back(occ[m]);
            rest[m] = 0;
        }
        by_rest[rest].emplace_back(index.at(kept), amp);
    }
    for (const auto &[rest, column] : by_rest) {
        for (const auto &[i, ci] : column) {
            for (const auto &[j, cj] : column) {
                rho(i, j) += weight * ci * std::conj(cj) / n2;
            }
        }
    }
}

void collect_support(const PureState &state, const std::vector<std::size_t> &keep,
                     std::set<Occupation> &support) {
    for (const auto &[occ, amp] : state.amplitudes()) {
        Occupation kept;
        for (auto m : keep) {
            kept.push_back(occ[m]);
        }
        support.insert(std::move(kept));
    }
}

DensityMatrix build_density(const std::set<Occupation> &support, std::size_t max_dimension) {
    if (support.size() > max_dimension) {
        throw ValidationError("reduced subspace dimension " + std::to_string(support.size()) +
                              " exceeds the bound " + std::to_string(max_dimension));
    }
    DensityMatrix dm;
    dm.basis.assign(support.begin(), support.end());
    const auto d = static_cast<Eigen::Index>(dm.basis.size());
    dm.rho = Eigen::MatrixXcd::Zero(d, d);
    return dm;
}

}  // namespace

DensityMatrix reduced_density(const PureState &state, const std::vector<std::string> &keep,
                              std::size_t max_dimension) {
    return reduced_density(MixedState::pure(state), keep, max_dimension);
}

DensityMatrix reduced_density(const MixedState &state, const std::vector<std::string> &keep,
                              std::size_t max_dimension) {
    const auto indices = resolve(state.registry(), keep);
    std::set<Occupation> support;
    for (const auto &b : state.branches()) {
        collect_support(b.state, indices, support);
    }
    DensityMatrix dm = build_density(support, max_dimension);
    std::map<Occupation, Eigen::Index> index;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(dm.basis.size()); ++i) {
        index.emplace(dm.basis[i], i);
    }
    for (const auto &b : state.branches()) {
        accumulate_reduced(b.state, indices, b.weight, index, dm.rho);
    }
    return dm;
}

std::string to_string(const PureState &state) {
    std::ostringstream out;
    bool first = true;
    for (const auto &[occ, amp] : state.amplitudes()) {
        if (!first) {
            out << " + ";
        }
        first = false;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "(%.6g%+.6gi)", amp.real(), amp.imag());
        out << buf << "|";
        bool any = false;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (occ[i] != 0) {
                out << (any ? "," : "") << state.registry().mode(i).name << "=" << int(occ[i]);
                any = true;
            }
        }
        out << (any ? "" : "vac") << ">";
    }
    return first ? "0" : out.str();
}

}  // namespace elink
