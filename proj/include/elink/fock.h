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
 * Sparse Fock-space states over a registry of bosonic modes.
 *
 * A state is a map from occupation vectors (one entry per registered mode,
 * in registration order) to complex amplitudes. Atomic ensembles enter as a
 * single collective bosonic mode each, so |S1> is simply occupation 1 on the
 * mode "S1". States are immutable values; every operation returns a new one.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace elink {

using Complex = std::complex<double>;

/// Largest excitation count carried by any in-scope protocol state.
inline constexpr int kDefaultCutoff = 6;

/// Amplitudes with smaller magnitude are never stored.
inline constexpr double kAmplitudeEpsilon = 1e-14;

class RegistryError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class ModeKind { kPhotonic, kAtomic, kLoss };

enum class Polarization { kNone, kR, kL, kH, kV };

char polarization_char(Polarization pol);

struct ModeId {
    std::string name;
    ModeKind kind = ModeKind::kPhotonic;
    std::string path;  // photonic only
    Polarization pol = Polarization::kNone;

    bool operator==(const ModeId &) const = default;
};

/// Photonic mode named "<path>.<pol>", e.g. "p.H".
ModeId photonic_mode(std::string path, Polarization pol);
ModeId atomic_mode(std::string name);
ModeId loss_mode(std::string name);

/// Ordered set of declared modes plus the global excitation cutoff.
class ModeRegistry {
  public:
    explicit ModeRegistry(int cutoff = kDefaultCutoff);

    /// Appends a mode and returns its index. Names must be unique.
    std::size_t add(ModeId mode);

    std::size_t size() const { return modes_.size(); }
    int cutoff() const { return cutoff_; }
    const ModeId &mode(std::size_t index) const { return modes_.at(index); }
    const std::vector<ModeId> &modes() const { return modes_; }

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;
    std::optional<std::size_t> find(std::string_view path, Polarization pol) const;
    std::vector<std::size_t> modes_on_path(std::string_view path) const;

    bool operator==(const ModeRegistry &other) const {
        return cutoff_ == other.cutoff_ && modes_ == other.modes_;
    }

  private:
    int cutoff_;
    std::vector<ModeId> modes_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

RegistryPtr make_registry(ModeRegistry registry);

/// Occupation number per registered mode.
using Occupation = std::vector<std::uint8_t>;

/// Builds an occupation vector from (mode name, count) pairs; unnamed modes are 0.
Occupation occupation(const ModeRegistry &registry,
                      std::initializer_list<std::pair<std::string_view, int>> counts);

int total_excitations(const Occupation &occ);

class PureState {
  public:
    using Amplitudes = std::map<Occupation, Complex>;

    /// Drops amplitudes below kAmplitudeEpsilon. Throws if a basis vector has the
    /// wrong length or exceeds the registry cutoff.
    PureState(RegistryPtr registry, Amplitudes amplitudes, double truncation_loss = 0.0);

    static PureState vacuum(RegistryPtr registry);
    static PureState basis(RegistryPtr registry, Occupation occ, Complex amplitude = 1.0);

    const ModeRegistry &registry() const { return *registry_; }
    const RegistryPtr &registry_ptr() const { return registry_; }
    const Amplitudes &amplitudes() const { return amplitudes_; }

    /// Zero-probability marker (no stored amplitude).
    bool empty() const { return amplitudes_.empty(); }
    double norm_squared() const;
    Complex amplitude(const Occupation &occ) const;

    /// Weight dropped so far by the excitation cutoff, accumulated along the pipeline.
    double truncation_loss() const { return truncation_loss_; }

    PureState normalized() const;
    PureState scaled(Complex factor) const;
    PureState with_truncation_loss(double loss) const;

    friend PureState operator+(const PureState &a, const PureState &b);

  private:
    RegistryPtr registry_;
    Amplitudes amplitudes_;
    double truncation_loss_ = 0.0;
};

/// Throws RegistryError unless both registries are structurally equal.
void require_same_registry(const ModeRegistry &a, const ModeRegistry &b);

struct Branch {
    double weight = 0.0;
    PureState state;
};

/// Convex mixture of normalized pure states over one registry.
class MixedState {
  public:
    /// Weights must be positive and sum to 1 within 1e-12; states must be normalized.
    explicit MixedState(std::vector<Branch> branches);

    static MixedState pure(const PureState &state);

    /// Each state's squared norm becomes its relative weight; empty states are skipped.
    /// Throws if every state is empty.
    static MixedState from_unnormalized(const std::vector<PureState> &states);

    const std::vector<Branch> &branches() const { return branches_; }
    const ModeRegistry &registry() const { return branches_.front().state.registry(); }
    const RegistryPtr &registry_ptr() const { return branches_.front().state.registry_ptr(); }
    double truncation_loss() const;

    /// Applies a norm-preserving map to every branch.
    MixedState map(const std::function<PureState(const PureState &)> &fn) const;

  private:
    std::vector<Branch> branches_;
};

/// a_mode^dagger. Terms pushed over the cutoff are dropped and their weight
/// (as it would have been) added to the truncation loss.
PureState create(const PureState &state, std::string_view mode);
PureState create(const PureState &state, std::size_t mode);

/// Substitutes a_i^dagger -> sum_j U(j, i) a_j^dagger for the listed modes.
/// U must be unitary within 1e-10 and the modes distinct.
PureState apply_mode_unitary(const PureState &state, std::span<const std::size_t> modes,
                             const Eigen::MatrixXcd &unitary);
PureState apply_mode_unitary(const PureState &state, const std::vector<std::string> &modes,
                             const Eigen::MatrixXcd &unitary);

Complex inner_product(const PureState &a, const PureState &b);

/// Required occupation per mode index.
using ModePattern = std::vector<std::pair<std::size_t, int>>;

ModePattern pattern(const ModeRegistry &registry,
                    std::initializer_list<std::pair<std::string_view, int>> counts);

struct Projection {
    PureState state;  // normalized; empty when probability == 0
    double probability = 0.0;
};

/// Born-rule conditioning on an occupation pattern. The probability is relative
/// to the input norm, so sub-normalized inputs are conditioned consistently.
Projection project(const PureState &state, const ModePattern &predicate);

/// Unnormalized projection: the surviving terms only.
PureState project_unnormalized(const PureState &state, const ModePattern &predicate);

/// Tensor product with concatenated registries. Cutoffs must agree; terms above
/// the cutoff are dropped into the truncation loss.
PureState tensor(const PureState &a, const PureState &b);
MixedState tensor(const MixedState &a, const MixedState &b);

/// Returns a state over a registry in which the given modes are replaced.
PureState relabel_modes(const PureState &state,
                        const std::vector<std::pair<std::size_t, ModeId>> &replacements);

/// Appends a fresh empty mode to the registry.
PureState extend(const PureState &state, ModeId mode);

/// Traces out the named modes. Each distinct occupation of the traced modes
/// becomes its own branch, and the modes are removed from the registry.
MixedState trace_out(const MixedState &state, const std::vector<std::string> &modes);
MixedState trace_out_kind(const MixedState &state, ModeKind kind);

struct DensityMatrix {
    std::vector<Occupation> basis;  // occupations of the kept modes
    Eigen::MatrixXcd rho;
};

/// Reduced density matrix over the kept modes, on the support of the state.
/// Throws ValidationError if the support exceeds max_dimension.
DensityMatrix reduced_density(const PureState &state, const std::vector<std::string> &keep,
                              std::size_t max_dimension = 64);
DensityMatrix reduced_density(const MixedState &state, const std::vector<std::string> &keep,
                              std::size_t max_dimension = 64);

std::string to_string(const PureState &state);

}  // namespace elink
