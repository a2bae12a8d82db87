// Copyright 2026 The qvml Authors
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
 * Single-qubit Kraus noise channels and end-of-circuit / per-layer noise
 * models.
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qvml/gates.hpp"
#include "qvml/qstate.hpp"

namespace qvml {

enum class ChannelKind { bit_flip, phase_flip, amplitude_damping, depolarizing, custom };

/// Circuit-text token for a channel kind ("bitflip", "phaseflip", "damp", "depol").
std::string_view channel_token(ChannelKind kind);
ChannelKind parse_channel_kind(std::string_view token);

class ChannelParameterError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

template <typename Real = double>
class BasicKrausSet {
  public:
    using Operator = gates::Matrix2<Real>;
    using Superoperator = gates::Matrix4<Real>;

    BasicKrausSet(ChannelKind kind, Real parameter, std::vector<Operator> operators)
        : kind_(kind), parameter_(parameter), operators_(std::move(operators)) {
        // vec(K rho K^dagger) = (conj(K) kron K) vec(rho); column bit is the slow index.
        superop_.setZero();
        for (const auto& k : operators_) {
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            superop_(a + 2 * b, c + 2 * d) += k(a, c) * std::conj(k(b, d));
        }
    }

    /// A raw operator list, e.g. for completeness checks of hand-built sets.
    explicit BasicKrausSet(std::vector<Operator> operators)
        : BasicKrausSet(ChannelKind::custom, Real{0}, std::move(operators)) {}

    ChannelKind kind() const { return kind_; }
    Real parameter() const { return parameter_; }
    const std::vector<Operator>& operators() const { return operators_; }
    const Superoperator& superoperator() const { return superop_; }

  private:
    ChannelKind kind_;
    Real parameter_;
    std::vector<Operator> operators_;
    Superoperator superop_;
};

using KrausSet = BasicKrausSet<double>;

template <typename Real = double>
BasicKrausSet<Real> make_channel(ChannelKind kind, Real p) {
    if (!(p >= Real{0} && p <= Real{1})) {
        throw ChannelParameterError("channel parameter " + std::to_string(p) + " outside [0, 1]");
    }
    using Op = gates::Matrix2<Real>;
    const Op id = Op::Identity();
    std::vector<Op> ops;
    switch (kind) {
        case ChannelKind::bit_flip:
            ops = {std::sqrt(1 - p) * id, std::sqrt(p) * gates::pauli_x<Real>()};
            break;
        case ChannelKind::phase_flip:
            ops = {std::sqrt(1 - p) * id, std::sqrt(p) * gates::pauli_z<Real>()};
            break;
        case ChannelKind::amplitude_damping: {
            Op k0, k1;
            k0 << 1, 0, 0, std::sqrt(1 - p);
            k1 << 0, std::sqrt(p), 0, 0;
            ops = {k0, k1};
            break;
        }
        case ChannelKind::depolarizing: {
            // (1 - p) rho + p I/2
            const Real w = std::sqrt(p / 4);
            ops = {std::sqrt(1 - 3 * p / 4) * id, w * gates::pauli_x<Real>(), w * gates::pauli_y<Real>(),
                   w * gates::pauli_z<Real>()};
            break;
        }
        case ChannelKind::custom:
            throw std::invalid_argument("make_channel cannot build a custom channel");
    }
    return BasicKrausSet<Real>(kind, p, std::move(ops));
}

/// max |(sum_i K_i^dagger K_i - I)_{rc}|
template <typename Real>
Real check_completeness(const BasicKrausSet<Real>& ch) {
    gates::Matrix2<Real> sum = gates::Matrix2<Real>::Zero();
    for (const auto& k : ch.operators()) sum += k.adjoint() * k;
    return (sum - gates::Matrix2<Real>::Identity()).cwiseAbs().maxCoeff();
}

template <typename Real>
void apply_channel_inplace(BasicDensityMatrix<Real>& rho, const BasicKrausSet<Real>& ch, int qubit) {
    rho.apply_superoperator(ch.superoperator(), qubit);
}

template <typename Real>
BasicDensityMatrix<Real> apply_channel(BasicDensityMatrix<Real> rho, const BasicKrausSet<Real>& ch,
                                       int qubit) {
    apply_channel_inplace(rho, ch, qubit);
    return rho;
}

enum class NoisePlacement { end_of_circuit, after_each_layer };

std::string_view placement_token(NoisePlacement p);
NoisePlacement parse_placement(std::string_view token);

struct NoiseEntry {
    ChannelKind kind;
    double parameter;
    NoisePlacement placement = NoisePlacement::end_of_circuit;
    /// Empty means every qubit.
    std::vector<int> qubits;
};

/// Ordered list of channels applied at fixed circuit positions.
class NoiseModel {
  public:
    NoiseModel() = default;
    explicit NoiseModel(std::vector<NoiseEntry> entries);

    /// Bit flip and phase flip with the same parameter on every qubit at the
    /// end of the circuit.
    static NoiseModel flip(double p, NoisePlacement placement = NoisePlacement::end_of_circuit);
    static NoiseModel single(ChannelKind kind, double p,
                             NoisePlacement placement = NoisePlacement::end_of_circuit);

    const std::vector<NoiseEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /// Applies every entry with the given placement to all of its qubits.
    void apply(DensityMatrix& rho, NoisePlacement placement) const;

  private:
    std::vector<NoiseEntry> entries_;
    std::vector<KrausSet> channels_;
};

}  // namespace qvml
