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


#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "qvml/gates.hpp"
#include "qvml/qstate.hpp"
#include "qvml/random_circuit.hpp"

namespace {

using namespace qvml;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

TEST(StateVector, ZeroState) {
    const StateVector s1 = new_zero_state(1);
    EXPECT_EQ(s1.dim(), 2);
    EXPECT_EQ(s1[0], cd(1, 0));
    EXPECT_EQ(s1[1], cd(0, 0));
    const StateVector s2 = new_zero_state(2);
    EXPECT_EQ(s2.amplitudes(), (Eigen::VectorXcd(4) << 1, 0, 0, 0).finished());
    EXPECT_THROW(new_zero_state(21), SizeError);
    EXPECT_THROW(new_zero_state(0), SizeError);
    EXPECT_NO_THROW(new_zero_state(20));
}

TEST(StateVector, HadamardAndBell) {
    const double r = 1 / std::sqrt(2.0);
    StateVector s = apply_gate(new_zero_state(1), gates::hadamard(), {0});
    EXPECT_NEAR(std::abs(s[0] - r), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[1] - r), 0, 1e-15);

    StateVector b = apply_gate(apply_gate(new_zero_state(2), gates::hadamard(), {0}), gates::cx(), {0, 1});
    EXPECT_NEAR(std::abs(b[0] - r), 0, 1e-15);
    EXPECT_NEAR(std::abs(b[3] - r), 0, 1e-15);
    EXPECT_NEAR(std::abs(b[1]), 0, 1e-15);
    EXPECT_NEAR(std::abs(b[2]), 0, 1e-15);

    const StateVector one = apply_gate(new_zero_state(1), gates::pauli_x(), {0});
    EXPECT_EQ(one[1], cd(1, 0));
}

TEST(StateVector, ControlIsFirstTarget) {
    // X on qubit 1 then cx(control 1, target 0) -> |11> = index 3.
    StateVector s = apply_gate(new_zero_state(2), gates::pauli_x(), {1});
    s = apply_gate(s, gates::cx(), {1, 0});
    EXPECT_NEAR(std::abs(s[3]), 1, 1e-15);
    // Control in |0> leaves the target alone.
    StateVector t = apply_gate(new_zero_state(3), gates::cx(), {2, 0});
    EXPECT_NEAR(std::abs(t[0]), 1, 1e-15);
}

TEST(StateVector, GateErrors) {
    StateVector s = new_zero_state(2);
    EXPECT_THROW(s.apply(gates::cx(), {0, 0}), QubitIndexError);
    EXPECT_THROW(s.apply(gates::hadamard(), {2}), QubitIndexError);
    EXPECT_THROW(s.apply(gates::hadamard(), {-1}), QubitIndexError);
    EXPECT_THROW(s.apply(gates::cx(), {0}), DimensionError);
    EXPECT_THROW(s.apply(gates::hadamard(), {0, 1}), DimensionError);
}

TEST(StateVector, Probabilities) {
    const auto plus = measure_probs(apply_gate(new_zero_state(1), gates::hadamard(), {0}));
    EXPECT_NEAR(plus[0], 0.5, 1e-15);
    EXPECT_NEAR(plus[1], 0.5, 1e-15);
    const auto zero = measure_probs(new_zero_state(1));
    EXPECT_EQ(zero[0], 1.0);
    EXPECT_EQ(zero[1], 0.0);
    const auto bell = measure_probs(apply_gate(apply_gate(new_zero_state(2), gates::hadamard(), {0}), gates::cx(), {0, 1}));
    EXPECT_NEAR(bell[0], 0.5, 1e-15);
    EXPECT_NEAR(bell[1], 0.0, 1e-15);
    EXPECT_NEAR(bell[2], 0.0, 1e-15);
    EXPECT_NEAR(bell[3], 0.5, 1e-15);
}

TEST(Expectation, SpecValues) {
    EXPECT_DOUBLE_EQ(expectation(new_zero_state(1), Observable::z(0)), 1.0);
    // Explicit 2x2 algebra: RY(t)|0> = (cos t/2, sin t/2), <Z> = cos^2 - sin^2.
    const double t = kPi / 3;
    const StateVector s = apply_gate(new_zero_state(1), gates::ry(t), {0});
    const double c = std::cos(t / 2), sn = std::sin(t / 2);
    EXPECT_NEAR(expectation(s, Observable::z(0)), c * c - sn * sn, 1e-12);
    EXPECT_NEAR(expectation(s, Observable::z(0)), 0.5, 1e-12);

    const StateVector bell = apply_gate(apply_gate(new_zero_state(2), gates::hadamard(), {0}), gates::cx(), {0, 1});
    // Brute force 4x4: diag(1,-1,-1,1) against (1,0,0,1)/sqrt2.
    EXPECT_NEAR(expectation(bell, Observable::zz(0, 1)), 1.0, 1e-12);
    EXPECT_THROW(expectation(bell, Observable::z(2)), QubitIndexError);
}

TEST(Expectation, MatchesDensePauliOnRandomStates) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 4;
        Eigen::VectorXcd v(1 << n);
        for (auto& a : v) a = cd(g(rng), g(rng));
        v.normalize();
        std::vector<char> ops(static_cast<std::size_t>(n));
        PauliString p;
        for (int q = 0; q < n; ++q) {
            const int k = static_cast<int>(rng() % 4);
            ops[static_cast<std::size_t>(q)] = "IXYZ"[k];
            p.set(q, static_cast<Pauli>(k));
        }
        const cd ref = v.dot(oracle::pauli(n, ops) * v);
        const StateVector s(n, v);
        EXPECT_NEAR(expectation(s, p), ref.real(), 1e-12);
        EXPECT_NEAR(expectation(to_density(s), p), ref.real(), 1e-12);
    }
}

TEST(Density, Basics) {
    const DensityMatrix r0 = to_density(new_zero_state(1));
    EXPECT_EQ(r0(0, 0), cd(1, 0));
    EXPECT_EQ(r0(1, 1), cd(0, 0));
    const DensityMatrix rp = to_density(apply_gate(new_zero_state(1), gates::hadamard(), {0}));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(rp(i, j) - 0.5), 0, 1e-15);
    }
    const DensityMatrix x = apply_gate_dm(DensityMatrix::zero(1), gates::pauli_x(), {0});
    EXPECT_NEAR(std::abs(x(1, 1) - 1.0), 0, 1e-15);
    const DensityMatrix h = apply_gate_dm(DensityMatrix::zero(1), gates::hadamard(), {0});
    EXPECT_LT((h.entries() - rp.entries()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Density, TraceOfRandomPureStates) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int n = 1; n <= 4; ++n) {
        Eigen::VectorXcd v(1 << n);
        for (auto& a : v) a = cd(g(rng), g(rng));
        v.normalize();
        EXPECT_NEAR(std::abs(to_density(StateVector(n, v)).trace() - 1.0), 0, 1e-12);
    }
}

TEST(Gates, BuiltinsAreUnitary) {
    auto dev2 = [](const gates::Matrix2<>& m) { return (m * m.adjoint() - gates::Matrix2<>::Identity()).cwiseAbs().maxCoeff(); };
    auto dev4 = [](const gates::Matrix4<>& m) { return (m * m.adjoint() - gates::Matrix4<>::Identity()).cwiseAbs().maxCoeff(); };
    EXPECT_LT(dev2(gates::identity()), 1e-12);
    EXPECT_LT(dev2(gates::hadamard()), 1e-12);
    EXPECT_LT(dev2(gates::pauli_x()), 1e-12);
    EXPECT_LT(dev2(gates::pauli_y()), 1e-12);
    EXPECT_LT(dev2(gates::pauli_z()), 1e-12);
    EXPECT_LT(dev4(gates::cx()), 1e-12);
    EXPECT_LT(dev4(gates::cz()), 1e-12);
    for (double t : {-3.0, -0.7, 0.0, 0.3, 1.9, 6.1}) {
        EXPECT_LT(dev2(gates::rx(t)), 1e-12);
        EXPECT_LT(dev2(gates::ry(t)), 1e-12);
        EXPECT_LT(dev2(gates::rz(t)), 1e-12);
        EXPECT_LT(dev4(gates::cp(t)), 1e-12);
    }
}

TEST(Gates, MatchReferenceMatrices) {
    EXPECT_LT((Eigen::MatrixXcd(gates::ry(0.7)) - oracle::rot(oracle::Y(), 0.7)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((Eigen::MatrixXcd(gates::rx(0.7)) - oracle::rot(oracle::X(), 0.7)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((Eigen::MatrixXcd(gates::rz(0.7)) - oracle::rot(oracle::Z(), 0.7)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((Eigen::MatrixXcd(gates::cx()) - oracle::controlled(oracle::X())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StateVector, ArbitraryThreeQubitGateMatchesDenseEmbedding) {
    // The generic (k > 2) path against basis enumeration.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(8, 8);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = cd(g(rng), g(rng));
    const Eigen::MatrixXcd u = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
    Eigen::VectorXcd v(16);
    for (auto& x : v) x = cd(g(rng), g(rng));
    v.normalize();
    StateVector s(4, v);
    s.apply(u, {3, 0, 2});
    const Eigen::VectorXcd ref = oracle::embed(4, u, {3, 0, 2}) * v;
    EXPECT_LT((s.amplitudes() - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Properties, NormPreservationOverRandomCircuits) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const Circuit c = random_circuit(rng, {4, 30, 0, false, true});
        const StateVector s = run_ideal(BoundCircuit(c, {}));
        ASSERT_NEAR(s.norm_squared(), 1.0, 1e-10);
    }
}

TEST(Properties, StatevectorMatchesDenseOracle) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Circuit c = random_circuit(rng, {4, 30, 0, false, true});
        const StateVector s = run_ideal(BoundCircuit(c, {}));
        ASSERT_LT((s.amplitudes() - oracle::state(c, {})).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Properties, BackendEquivalence) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        const Circuit c = random_circuit(rng, {4, 30, 0, false, true});
        DensityMatrix rho = DensityMatrix::zero(c.num_qubits());
        StateVector psi = StateVector::zero(c.num_qubits());
        // Gate-by-gate on both backends through the free functions.
        for (const auto& inst : c.instructions()) {
            if (inst.kind == GateKind::barrier) continue;
            const Eigen::MatrixXcd g = oracle::gate_matrix(inst.kind, oracle::angle_of(inst, {}));
            rho = apply_gate_dm(rho, g, inst.target_span());
            psi = apply_gate(psi, g, inst.target_span());
        }
        ASSERT_LT((rho.entries() - to_density(psi).entries()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
    const StateVector b = apply_gate(apply_gate(new_zero_state(2), gates::hadamard(), {0}), gates::cx(), {0, 1});
    const DensityMatrix r = partial_trace(to_density(b), {0});
    EXPECT_EQ(r.num_qubits(), 1);
    EXPECT_LT((r.entries() - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, KeepAllIsIdentity) {
    std::mt19937_64 rng(1);
    const Circuit c = random_circuit(rng, {3, 20, 0, false, false});
    const DensityMatrix rho = to_density(run_ideal(BoundCircuit(c, {})));
    std::vector<int> all(static_cast<std::size_t>(c.num_qubits()));
    std::iota(all.begin(), all.end(), 0);
    EXPECT_LT((partial_trace(rho, all).entries() - rho.entries()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(partial_trace(rho, std::span<const int>{}), DimensionError);
}

TEST(PartialTrace, ProductStateKeepsFactor) {
    const StateVector zero = new_zero_state(1);
    const StateVector plus = apply_gate(new_zero_state(1), gates::hadamard(), {0});
    const DensityMatrix r = partial_trace(to_density(tensor(zero, plus)), {1});
    EXPECT_LT((r.entries() - to_density(plus).entries()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, RandomProductStates) {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 30; ++trial) {
        const int na = 1 + trial % 3, nb = 1 + (trial / 3) % 3;
        Eigen::VectorXcd a(1 << na), b(1 << nb);
        for (auto& x : a) x = cd(g(rng), g(rng));
        for (auto& x : b) x = cd(g(rng), g(rng));
        a.normalize();
        b.normalize();
        const StateVector psi(na, a), phi(nb, b);
        std::vector<int> first(static_cast<std::size_t>(na));
        std::iota(first.begin(), first.end(), 0);
        const DensityMatrix r = partial_trace(to_density(tensor(psi, phi)), first);
        ASSERT_LT((r.entries() - to_density(psi).entries()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(PartialTrace, OutputOrderFollowsKeepList) {
    // |q0 q1> = |0 1>; keeping {1, 0} puts qubit 1 first -> basis index 1.
    const StateVector s = apply_gate(new_zero_state(2), gates::pauli_x(), {1});
    const DensityMatrix r = partial_trace(to_density(s), {1, 0});
    EXPECT_NEAR(r(1, 1).real(), 1.0, 1e-15);
}

TEST(Postselect, SpecExamples) {
    const Eigen::Vector4d bell(0.5, 0, 0, 0.5);
    const int a1[] = {1}, zero[] = {0}, a0[] = {0}, one[] = {1};
    const auto r = postselect(bell, a1, zero);
    EXPECT_NEAR(r.success_probability, 0.5, 1e-15);
    EXPECT_NEAR(r.conditional[0], 1.0, 1e-15);
    EXPECT_NEAR(r.conditional[1], 0.0, 1e-15);

    const Eigen::Vector4d uniform = Eigen::Vector4d::Constant(0.25);
    const auto u = postselect(uniform, a0, zero);
    EXPECT_NEAR(u.success_probability, 0.5, 1e-15);
    EXPECT_NEAR(u.conditional[0], 0.5, 1e-15);
    EXPECT_NEAR(u.conditional[1], 0.5, 1e-15);

    const Eigen::Vector4d e0(1, 0, 0, 0);
    EXPECT_THROW(postselect(e0, a0, one), PostselectionError);
    const Eigen::Vector4d bad(0.5, 0.5, 0.5, 0);
    EXPECT_THROW(postselect(bad, a0, zero), std::invalid_argument);
}

TEST(Postselect, ConditionalSumsToOne) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd p(16);
        for (auto& x : p) x = u(rng);
        p /= p.sum();
        const int anc[] = {static_cast<int>(trial % 4)};
        const int out[] = {static_cast<int>(trial / 4 % 2)};
        const auto r = postselect(p, anc, out);
        ASSERT_NEAR(r.conditional.sum(), 1.0, 1e-10);
    }
}

TEST(Postselect, PositiveSemidefiniteAfterNoise) {
    // Eigenvalue check kept in the tests only.
    std::mt19937_64 rng(4);
    for (int i = 0; i < 30; ++i) {
        const Circuit c = random_circuit(rng, {3, 20, 0, true, true});
        const DensityMatrix rho = run_noisy(BoundCircuit(c, {}), NoiseModel::single(ChannelKind::depolarizing, 0.1));
        const Eigen::MatrixXcd& m = rho.entries();
        ASSERT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
        ASSERT_NEAR(std::abs(rho.trace() - 1.0), 0, 1e-10);
        ASSERT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues().minCoeff(), -1e-8);
    }
}

TEST(Labels, BasisLabelPutsHighestQubitFirst) {
    EXPECT_EQ(basis_label(1, 3), "001");
    EXPECT_EQ(basis_label(4, 3), "100");
    EXPECT_EQ(basis_label(0, 1), "0");
}

}  // namespace
