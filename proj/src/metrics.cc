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

#include "elink/metrics.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace elink {

void QubitEncoding::validate() const {
    if (zero.size() != modes.size() || one.size() != modes.size()) {
        throw ValidationError("qubit encoding patterns must cover every listed mode");
    }
    if (zero == one) {
        throw ValidationError("qubit encoding patterns must differ");
    }
}

QubitEncoding QubitEncoding::dual_rail(std::string first, std::string second) {
    return {{std::move(first), std::move(second)}, {1, 0}, {0, 1}};
}

void validate_density(const Eigen::MatrixXcd &rho, double tol) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw ValidationError("density matrix must be square and non-empty");
    }
    if ((rho - rho.adjoint()).norm() > tol) {
        throw ValidationError("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0)) > tol) {
        throw ValidationError("density matrix trace is not 1");
    }
    if (hermitian_eigenvalues(rho).minCoeff() < -tol) {
        throw ValidationError("density matrix is not positive semidefinite");
    }
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd &m) {
    const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double von_neumann_entropy(const Eigen::MatrixXcd &rho) {
    validate_density(rho);
    double s = 0.0;
    for (double lambda : hermitian_eigenvalues(rho)) {
        if (lambda > 0.0) {
            s -= lambda * std::log2(lambda);
        }
    }
    return std::max(s, 0.0);
}

double entropy(const PureState &state, const std::vector<std::string> &partition) {
    return von_neumann_entropy(reduced_density(state, partition).rho);
}

double concurrence(const Eigen::MatrixXcd &rho) {
    if (rho.rows() != 4) {
        throw ValidationError("concurrence needs a 4x4 density matrix");
    }
    validate_density(rho);
    // With rho = W W^dagger, the square roots of the eigenvalues of rho rho~
    // are the singular values of W^T (sigma_y x sigma_y) W. Working with W
    // keeps rank-deficient (e.g. pure) inputs exact; eigenvalues below 1e-13
    // are round-off and are dropped before taking square roots.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (rho + rho.adjoint()));
    Eigen::VectorXd weights = solver.eigenvalues();
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        weights(i) = weights(i) > 1e-13 ? std::sqrt(weights(i)) : 0.0;
    }
    const Eigen::MatrixXcd w = solver.eigenvectors() * weights.asDiagonal();

    Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
    // sigma_y (x) sigma_y in the |00>,|01>,|10>,|11> basis.
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    const Eigen::MatrixXcd tau = w.transpose() * flip * w;
    const Eigen::VectorXd l = Eigen::JacobiSVD<Eigen::MatrixXcd>(tau).singularValues();  // descending
    return std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
}

double purity(const Eigen::MatrixXcd &rho) {
    validate_density(rho);
    return (rho * rho).trace().real();
}

namespace {

Eigen::MatrixXcd sector_density(const MixedState &state, const std::vector<std::string> &modes,
                                const std::vector<Occupation> &patterns, double *sector_probability) {
    const DensityMatrix dm = reduced_density(state, modes, 4096);
    std::vector<Eigen::Index> index;
    for (const auto &p : patterns) {
        auto it = std::find(dm.basis.begin(), dm.basis.end(), p);
        index.push_back(it == dm.basis.end() ? -1 : static_cast<Eigen::Index>(it - dm.basis.begin()));
    }
    const auto d = static_cast<Eigen::Index>(patterns.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (index[i] >= 0 && index[j] >= 0) {
                out(i, j) = dm.rho(index[i], index[j]);
            }
        }
    }
    const double weight = out.trace().real();
    if (sector_probability != nullptr) {
        *sector_probability = weight;
    }
    if (weight <= 0.0) {
        throw ValidationError("state has no weight in the encoded qubit sector");
    }
    return out / weight;
}

}  // namespace

Eigen::MatrixXcd qubit_density(const MixedState &state, const QubitEncoding &qubit, double *sector_probability) {
    qubit.validate();
    return sector_density(state, qubit.modes, {qubit.zero, qubit.one}, sector_probability);
}

Eigen::MatrixXcd two_qubit_density(const MixedState &state, const QubitEncoding &a, const QubitEncoding &b,
                                   double *sector_probability) {
    a.validate();
    b.validate();
    std::vector<std::string> modes = a.modes;
    modes.insert(modes.end(), b.modes.begin(), b.modes.end());
    std::vector<Occupation> patterns;
    for (const auto *pa : {&a.zero, &a.one}) {
        for (const auto *pb : {&b.zero, &b.one}) {
            Occupation joint = *pa;
            joint.insert(joint.end(), pb->begin(), pb->end());
            patterns.push_back(std::move(joint));
        }
    }
    return sector_density(state, modes, patterns, sector_probability);
}

double fidelity(const PureState &reference, const MixedState &state) {
    require_same_registry(reference.registry(), state.registry());
    const double ref_norm = reference.norm_squared();
    if (ref_norm <= 0.0) {
        throw ValidationError("fidelity reference state is empty");
    }
    double f = 0.0;
    for (const auto &b : state.branches()) {
        f += b.weight * std::norm(inner_product(reference, b.state));
    }
    return std::clamp(f / ref_norm, 0.0, 1.0);
}

}  // namespace elink
