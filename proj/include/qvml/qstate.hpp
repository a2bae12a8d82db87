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
 * Pure (statevector) and mixed (density-matrix) quantum states.
 *
 * Qubit 0 is the least-significant bit of a basis index. Gates are applied
 * in place by rewriting the amplitudes selected by index masks; the full
 * 2^n x 2^n operator is never formed.
 *
 * A density matrix is stored column-major, so its memory is vec(rho): the
 * row index occupies bits [0, n) and the column index bits [n, 2n).
 * U rho U^dagger is then U on the row bits followed by conj(U) on the column
 * bits, and a Kraus channel is a single 4x4 superoperator on (q, q + n).
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qvml/observable.hpp"

namespace qvml {

template <typename Real>
using Complex = std::complex<Real>;

/// Capacity guard for statevectors.
inline constexpr int kMaxQubits = 20;
/// Capacity guard for density matrices (4^n entries).
inline constexpr int kMaxDensityQubits = 10;

class SizeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

class QubitIndexError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class PostselectionError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

namespace detail {

inline void check_targets(std::span<const int> targets, int num_qubits) {
    std::uint64_t seen = 0;
    for (int t : targets) {
        if (t < 0 || t >= num_qubits) {
            throw QubitIndexError("qubit index " + std::to_string(t) + " out of range for " +
                                  std::to_string(num_qubits) + " qubits");
        }
        const std::uint64_t bit = std::uint64_t{1} << t;
        if (seen & bit) {
            throw QubitIndexError("duplicate qubit index " + std::to_string(t));
        }
        seen |= bit;
    }
}

/// Spreads the bits of `r` over the positions not occupied by `sorted_targets`.
inline std::size_t insert_zero_bits(std::size_t r, std::span<const int> sorted_targets) {
    for (int t : sorted_targets) {
        const std::size_t low = r & ((std::size_t{1} << t) - 1);
        r = ((r >> t) << (t + 1)) | low;
    }
    return r;
}

/// Applies a 2^k x 2^k matrix to bits `targets` of a 2^num_bits array.
/// Local index m of the matrix has bit b set iff bit targets[b] is set.
template <typename Scalar, typename Derived>
void apply_matrix(Scalar* data, int num_bits, const Eigen::MatrixBase<Derived>& gate,
                  std::span<const int> targets) {
    const int k = static_cast<int>(targets.size());
    const std::size_t local = std::size_t{1} << k;
    const std::size_t outer = std::size_t{1} << (num_bits - k);

    if (k == 1) {
        const std::size_t stride = std::size_t{1} << targets[0];
        const Scalar g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
        const std::size_t dim = std::size_t{1} << num_bits;
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Scalar a0 = data[i];
                const Scalar a1 = data[i + stride];
                data[i] = g00 * a0 + g01 * a1;
                data[i + stride] = g10 * a0 + g11 * a1;
            }
        }
        return;
    }

    if (k == 2) {
        const std::size_t b0 = std::size_t{1} << targets[0];
        const std::size_t b1 = std::size_t{1} << targets[1];
        const int lo = std::min(targets[0], targets[1]);
        const int hi = std::max(targets[0], targets[1]);
        const std::size_t off[4] = {0, b0, b1, b0 | b1};
        Scalar g[4][4];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) g[r][c] = gate(r, c);
        for (std::size_t r = 0; r < outer; ++r) {
            std::size_t base = r;
            base = ((base >> lo) << (lo + 1)) | (base & ((std::size_t{1} << lo) - 1));
            base = ((base >> hi) << (hi + 1)) | (base & ((std::size_t{1} << hi) - 1));
            Scalar in[4];
            for (int m = 0; m < 4; ++m) in[m] = data[base + off[m]];
            for (int row = 0; row < 4; ++row) {
                data[base + off[row]] = g[row][0] * in[0] + g[row][1] * in[1] + g[row][2] * in[2] + g[row][3] * in[3];
            }
        }
        return;
    }

    std::vector<int> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> offsets(local, 0);
    for (std::size_t m = 0; m < local; ++m) {
        for (int b = 0; b < k; ++b) {
            if (m & (std::size_t{1} << b)) offsets[m] |= std::size_t{1} << targets[b];
        }
    }
    std::vector<Scalar> in(local), out(local);
    for (std::size_t r = 0; r < outer; ++r) {
        const std::size_t base = insert_zero_bits(r, sorted);
        for (std::size_t m = 0; m < local; ++m) in[m] = data[base + offsets[m]];
        for (std::size_t row = 0; row < local; ++row) {
            Scalar acc{0};
            for (std::size_t col = 0; col < local; ++col) acc += gate(row, col) * in[col];
            out[row] = acc;
        }
        for (std::size_t m = 0; m < local; ++m) data[base + offsets[m]] = out[m];
    }
}

template <typename Derived>
void check_gate_shape(const Eigen::MatrixBase<Derived>& gate, std::size_t num_targets) {
    const auto expected = static_cast<Eigen::Index>(std::size_t{1} << num_targets);
    if (num_targets == 0 || gate.rows() != expected || gate.cols() != expected) {
        throw DimensionError("gate of size " + std::to_string(gate.rows()) + "x" +
                             std::to_string(gate.cols()) + " does not act on " +
                             std::to_string(num_targets) + " qubit(s)");
    }
}

/// Phase and flip mask of a Pauli string acting on a basis state:
/// P|j> = phase(j) |j ^ x_mask>.
template <typename Real>
Complex<Real> pauli_phase(const PauliString& p, std::size_t j) {
    static const Complex<Real> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int sign = (std::popcount(static_cast<std::uint64_t>(j & p.z_mask())) & 1) ? 2 : 0;
    return kIPow[(p.y_count() + sign) & 3];
}

inline void check_observable(const Observable& obs, int num_qubits) {
    if (obs.max_qubit() >= num_qubits) {
        throw QubitIndexError("observable acts on qubit " + std::to_string(obs.max_qubit()) +
                              " of a " + std::to_string(num_qubits) + "-qubit state");
    }
}

}  // namespace detail

template <typename Real = double>
class BasicDensityMatrix;

/// Pure n-qubit state: 2^n complex amplitudes.
template <typename Real = double>
class BasicStateVector {
  public:
    using Scalar = Complex<Real>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

    /// |0...0>.
    static BasicStateVector zero(int num_qubits) {
        check_capacity(num_qubits);
        Vector amps = Vector::Zero(Eigen::Index{1} << num_qubits);
        amps(0) = Scalar{1};
        return BasicStateVector(num_qubits, std::move(amps));
    }

    BasicStateVector(int num_qubits, Vector amplitudes)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        check_capacity(num_qubits);
        if (amplitudes_.size() != (Eigen::Index{1} << num_qubits)) {
            throw DimensionError("statevector length " + std::to_string(amplitudes_.size()) +
                                 " is not 2^" + std::to_string(num_qubits));
        }
    }

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    const Vector& amplitudes() const { return amplitudes_; }
    Scalar operator[](Eigen::Index i) const { return amplitudes_(i); }

    template <typename Derived>
    void apply(const Eigen::MatrixBase<Derived>& gate, std::span<const int> targets) {
        detail::check_gate_shape(gate, targets.size());
        detail::check_targets(targets, num_qubits_);
        detail::apply_matrix(amplitudes_.data(), num_qubits_, gate, targets);
    }

    template <typename Derived>
    void apply(const Eigen::MatrixBase<Derived>& gate, std::initializer_list<int> targets) {
        apply(gate, std::span<const int>(targets.begin(), targets.size()));
    }

    RealVector probabilities() const { return amplitudes_.cwiseAbs2(); }
    Real norm_squared() const { return amplitudes_.squaredNorm(); }

  private:
    static void check_capacity(int num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw SizeError("statevector supports 1.." + std::to_string(kMaxQubits) +
                            " qubits, got " + std::to_string(num_qubits));
        }
    }

    int num_qubits_;
    Vector amplitudes_;
};

/// Mixed n-qubit state: a 2^n x 2^n complex matrix.
template <typename Real>
class BasicDensityMatrix {
  public:
    using Scalar = Complex<Real>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

    static BasicDensityMatrix zero(int num_qubits) {
        check_capacity(num_qubits);
        const Eigen::Index dim = Eigen::Index{1} << num_qubits;
        Matrix rho = Matrix::Zero(dim, dim);
        rho(0, 0) = Scalar{1};
        return BasicDensityMatrix(num_qubits, std::move(rho));
    }

    BasicDensityMatrix(int num_qubits, Matrix entries)
        : num_qubits_(num_qubits), entries_(std::move(entries)) {
        check_capacity(num_qubits);
        const Eigen::Index dim = Eigen::Index{1} << num_qubits;
        if (entries_.rows() != dim || entries_.cols() != dim) {
            throw DimensionError("density matrix is " + std::to_string(entries_.rows()) + "x" +
                                 std::to_string(entries_.cols()) + ", expected 2^" +
                                 std::to_string(num_qubits) + " square");
        }
    }

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    Scalar operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

    /// rho -> U rho U^dagger.
    template <typename Derived>
    void apply(const Eigen::MatrixBase<Derived>& gate, std::span<const int> targets) {
        detail::check_gate_shape(gate, targets.size());
        detail::check_targets(targets, num_qubits_);
        int col_targets[kMaxDensityQubits];
        for (std::size_t i = 0; i < targets.size(); ++i) col_targets[i] = targets[i] + num_qubits_;
        detail::apply_matrix(entries_.data(), 2 * num_qubits_, gate, targets);
        detail::apply_matrix(entries_.data(), 2 * num_qubits_, gate.conjugate(),
                             std::span<const int>(col_targets, targets.size()));
    }

    template <typename Derived>
    void apply(const Eigen::MatrixBase<Derived>& gate, std::initializer_list<int> targets) {
        apply(gate, std::span<const int>(targets.begin(), targets.size()));
    }

    /// Applies a 4x4 superoperator acting on vec(rho) at (qubit, qubit + n).
    template <typename Derived>
    void apply_superoperator(const Eigen::MatrixBase<Derived>& superop, int qubit) {
        const int one[1] = {qubit};
        detail::check_targets(one, num_qubits_);
        const int bits[2] = {qubit, qubit + num_qubits_};
        detail::apply_matrix(entries_.data(), 2 * num_qubits_, superop, std::span<const int>(bits));
    }

    RealVector probabilities() const { return entries_.diagonal().real(); }
    Scalar trace() const { return entries_.trace(); }

  private:
    static void check_capacity(int num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxDensityQubits) {
            throw SizeError("density matrix supports 1.." + std::to_string(kMaxDensityQubits) +
                            " qubits, got " + std::to_string(num_qubits));
        }
    }

    int num_qubits_;
    Matrix entries_;
};

using StateVector = BasicStateVector<double>;
using DensityMatrix = BasicDensityMatrix<double>;

inline StateVector new_zero_state(int num_qubits) { return StateVector::zero(num_qubits); }

template <typename Real, typename Derived>
BasicStateVector<Real> apply_gate(BasicStateVector<Real> state, const Eigen::MatrixBase<Derived>& gate,
                                  std::span<const int> targets) {
    state.apply(gate, targets);
    return state;
}

template <typename Real, typename Derived>
BasicDensityMatrix<Real> apply_gate_dm(BasicDensityMatrix<Real> rho,
                                       const Eigen::MatrixBase<Derived>& gate,
                                       std::span<const int> targets) {
    rho.apply(gate, targets);
    return rho;
}

template <typename Real, typename Derived>
BasicStateVector<Real> apply_gate(BasicStateVector<Real> state, const Eigen::MatrixBase<Derived>& gate,
                                  std::initializer_list<int> targets) {
    state.apply(gate, targets);
    return state;
}

template <typename Real, typename Derived>
BasicDensityMatrix<Real> apply_gate_dm(BasicDensityMatrix<Real> rho, const Eigen::MatrixBase<Derived>& gate,
                                       std::initializer_list<int> targets) {
    rho.apply(gate, targets);
    return rho;
}

template <typename Real>
typename BasicStateVector<Real>::RealVector measure_probs(const BasicStateVector<Real>& state) {
    return state.probabilities();
}

template <typename Real>
typename BasicDensityMatrix<Real>::RealVector measure_probs(const BasicDensityMatrix<Real>& rho) {
    return rho.probabilities();
}

/// <psi| P |psi> for a single Pauli string.
template <typename Real>
Real expectation(const BasicStateVector<Real>& state, const PauliString& p) {
    const std::size_t x = p.x_mask();
    const auto& a = state.amplitudes();
    Complex<Real> acc{0};
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const std::size_t uj = static_cast<std::size_t>(j);
        acc += std::conj(a(static_cast<Eigen::Index>(uj ^ x))) * detail::pauli_phase<Real>(p, uj) *
               a(j);
    }
    return acc.real();
}

/// Tr(rho P) = sum_j <j| rho P |j> = sum_j phase(j) rho(j, j ^ x).
template <typename Real>
Real expectation(const BasicDensityMatrix<Real>& rho, const PauliString& p) {
    const std::size_t x = p.x_mask();
    const auto& m = rho.entries();
    Complex<Real> acc{0};
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        const std::size_t uj = static_cast<std::size_t>(j);
        acc += detail::pauli_phase<Real>(p, uj) * m(j, static_cast<Eigen::Index>(uj ^ x));
    }
    return acc.real();
}

template <typename State>
auto expectation(const State& state, const Observable& obs) {
    detail::check_observable(obs, state.num_qubits());
    decltype(expectation(state, PauliString{})) acc = 0;
    for (const auto& term : obs.terms()) acc += term.coefficient * expectation(state, term.pauli);
    return acc;
}

template <typename Real>
BasicDensityMatrix<Real> to_density(const BasicStateVector<Real>& state) {
    const auto& a = state.amplitudes();
    return BasicDensityMatrix<Real>(state.num_qubits(), a * a.adjoint());
}

/// Product state with `low` on qubits [0, n_low) and `high` above it.
template <typename Real>
BasicStateVector<Real> tensor(const BasicStateVector<Real>& low, const BasicStateVector<Real>& high) {
    typename BasicStateVector<Real>::Vector out(low.dim() * high.dim());
    for (Eigen::Index h = 0; h < high.dim(); ++h) {
        out.segment(h * low.dim(), low.dim()) = high[h] * low.amplitudes();
    }
    return BasicStateVector<Real>(low.num_qubits() + high.num_qubits(), std::move(out));
}

/// Reduced state over `keep`; output qubit i is input qubit keep[i].
template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& rho, std::span<const int> keep) {
    if (keep.empty()) throw DimensionError("partial_trace needs at least one kept qubit");
    const int n = rho.num_qubits();
    detail::check_targets(keep, n);
    const int k = static_cast<int>(keep.size());
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
    }
    auto spread = [](std::size_t bits, std::span<const int> positions) {
        std::size_t out = 0;
        for (std::size_t b = 0; b < positions.size(); ++b) {
            if (bits & (std::size_t{1} << b)) out |= std::size_t{1} << positions[b];
        }
        return out;
    };
    const std::size_t dk = std::size_t{1} << k;
    const std::size_t dt = std::size_t{1} << traced.size();
    std::vector<std::size_t> keep_off(dk), trace_off(dt);
    for (std::size_t r = 0; r < dk; ++r) keep_off[r] = spread(r, keep);
    for (std::size_t t = 0; t < dt; ++t) trace_off[t] = spread(t, traced);

    typename BasicDensityMatrix<Real>::Matrix out(dk, dk);
    const auto& m = rho.entries();
    for (std::size_t c = 0; c < dk; ++c) {
        for (std::size_t r = 0; r < dk; ++r) {
            Complex<Real> acc{0};
            for (std::size_t t = 0; t < dt; ++t) {
                acc += m(static_cast<Eigen::Index>(keep_off[r] | trace_off[t]),
                         static_cast<Eigen::Index>(keep_off[c] | trace_off[t]));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return BasicDensityMatrix<Real>(k, std::move(out));
}

template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& rho, std::initializer_list<int> keep) {
    return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

template <typename Real = double>
struct Postselection {
    Eigen::Matrix<Real, Eigen::Dynamic, 1> conditional;  ///< over the non-ancilla qubits, ascending
    Real success_probability;
};

/// Conditions a basis-outcome distribution on `ancilla[i]` reading `outcome[i]`.
template <typename Derived>
Postselection<typename Derived::Scalar> postselect(const Eigen::MatrixBase<Derived>& probs,
                                                   std::span<const int> ancilla,
                                                   std::span<const int> outcome) {
    using Real = typename Derived::Scalar;
    const auto dim = static_cast<std::size_t>(probs.size());
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw DimensionError("probability vector length must be a power of two");
    }
    const int n = std::countr_zero(dim);
    detail::check_targets(ancilla, n);
    if (ancilla.size() != outcome.size()) {
        throw DimensionError("outcome pattern length does not match ancilla count");
    }
    if (ancilla.size() == static_cast<std::size_t>(n)) {
        throw DimensionError("postselect needs at least one non-ancilla qubit");
    }
    if (std::abs(probs.sum() - Real{1}) > Real(1e-8)) {
        throw std::invalid_argument("probabilities do not sum to one");
    }
    std::size_t anc_mask = 0, anc_value = 0;
    for (std::size_t i = 0; i < ancilla.size(); ++i) {
        if (outcome[i] != 0 && outcome[i] != 1) throw std::invalid_argument("outcome bits must be 0 or 1");
        anc_mask |= std::size_t{1} << ancilla[i];
        if (outcome[i]) anc_value |= std::size_t{1} << ancilla[i];
    }
    std::vector<int> data;
    for (int q = 0; q < n; ++q) {
        if (!(anc_mask & (std::size_t{1} << q))) data.push_back(q);
    }
    const std::size_t dd = std::size_t{1} << data.size();
    Eigen::Matrix<Real, Eigen::Dynamic, 1> cond(static_cast<Eigen::Index>(dd));
    for (std::size_t j = 0; j < dd; ++j) {
        std::size_t idx = anc_value;
        for (std::size_t b = 0; b < data.size(); ++b) {
            if (j & (std::size_t{1} << b)) idx |= std::size_t{1} << data[b];
        }
        cond(static_cast<Eigen::Index>(j)) = probs(static_cast<Eigen::Index>(idx));
    }
    const Real success = cond.sum();
    if (!(success >= Real(1e-12))) {
        throw PostselectionError("post-selection impossible: success probability " +
                                 std::to_string(success));
    }
    return {cond / success, success};
}

/// Marginal distribution over `qubits` (output bit i is qubits[i]).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> marginal_probs(
    const Eigen::MatrixBase<Derived>& probs, std::span<const int> qubits) {
    const auto dim = static_cast<std::size_t>(probs.size());
    if (!std::has_single_bit(dim)) throw DimensionError("probability vector length must be a power of two");
    detail::check_targets(qubits, std::countr_zero(dim));
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out =
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>::Zero(Eigen::Index{1} << qubits.size());
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t j = 0;
        for (std::size_t b = 0; b < qubits.size(); ++b) {
            if (i & (std::size_t{1} << qubits[b])) j |= std::size_t{1} << b;
        }
        out(static_cast<Eigen::Index>(j)) += probs(static_cast<Eigen::Index>(i));
    }
    return out;
}

/// Basis label with qubit n-1 leftmost, e.g. index 1 of 3 qubits -> "001".
inline std::string basis_label(std::size_t index, int num_qubits) {
    std::string s(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 0; q < num_qubits; ++q) {
        if (index & (std::size_t{1} << q)) s[static_cast<std::size_t>(num_qubits - 1 - q)] = '1';
    }
    return s;
}

}  // namespace qvml
