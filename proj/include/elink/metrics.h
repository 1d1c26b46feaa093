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

#pragma once

#include <string>
#include <vector>

#include "elink/fock.h"

namespace elink {

/// A logical qubit inside a subsystem: two orthogonal occupation patterns over
/// the listed modes, e.g. {S1=1,S2=0} / {S1=0,S2=1}.
struct QubitEncoding {
    std::vector<std::string> modes;
    Occupation zero;
    Occupation one;

    void validate() const;

    /// One excitation shared between two modes: |1,0> is 0 and |0,1> is 1.
    static QubitEncoding dual_rail(std::string first, std::string second);
};

/// Throws ValidationError unless rho is Hermitian, PSD and unit trace (within tol).
void validate_density(const Eigen::MatrixXcd &rho, double tol = 1e-9);

/// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd &m);

/// Base-2 von Neumann entropy, with 0 log 0 = 0.
double von_neumann_entropy(const Eigen::MatrixXcd &rho);

/// Entanglement entropy of a pure state across (partition, rest), in ebits.
double entropy(const PureState &state, const std::vector<std::string> &partition);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence(const Eigen::MatrixXcd &rho);

double purity(const Eigen::MatrixXcd &rho);

/// Projects onto the span of the encoded qubits and renormalizes. The weight of
/// that span before renormalization is written to sector_probability if given.
Eigen::MatrixXcd qubit_density(const MixedState &state, const QubitEncoding &qubit,
                               double *sector_probability = nullptr);
Eigen::MatrixXcd two_qubit_density(const MixedState &state, const QubitEncoding &a, const QubitEncoding &b,
                                   double *sector_probability = nullptr);

/// <phi| rho |phi> for a pure reference and a mixed state on the same registry.
double fidelity(const PureState &reference, const MixedState &state);

}  // namespace elink
