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
#include "qvml/channels.hpp"

namespace {

using namespace qvml;
using cd = std::complex<double>;

constexpr ChannelKind kKinds[] = {ChannelKind::bit_flip, ChannelKind::phase_flip, ChannelKind::amplitude_damping,
                                  ChannelKind::depolarizing};

DensityMatrix random_density(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const int dim = 1 << n;
    Eigen::MatrixXcd a(dim, dim);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = cd(g(rng), g(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace();
    return DensityMatrix(n, rho);
}

DensityMatrix single(const Eigen::Matrix2cd& m) { return DensityMatrix(1, m); }

TEST(MakeChannel, Operators) {
    const KrausSet ad0 = make_channel(ChannelKind::amplitude_damping, 0.0);
    EXPECT_LT((ad0.operators()[0] - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(ad0.operators()[1].cwiseAbs().maxCoeff(), 1e-15);
    std::mt19937_64 rng(1);
    const DensityMatrix rho = random_density(1, rng);
    EXPECT_LT((apply_channel(rho, ad0, 0).entries() - rho.entries()).cwiseAbs().maxCoeff(), 1e-15);

    EXPECT_EQ(make_channel(ChannelKind::depolarizing, 0.3).operators().size(), 4u);
    EXPECT_THROW(make_channel(ChannelKind::bit_flip, 1.5), ChannelParameterError);
    EXPECT_THROW(make_channel(ChannelKind::bit_flip, -0.1), ChannelParameterError);
    EXPECT_THROW(make_channel(ChannelKind::bit_flip, std::nan("")), ChannelParameterError);
}

TEST(ApplyChannel, SpecExamples) {
    const DensityMatrix zero = DensityMatrix::zero(1);
    const DensityMatrix half = apply_channel(zero, make_channel(ChannelKind::bit_flip, 0.5), 0);
    EXPECT_LT((half.entries() - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);

    Eigen::Matrix2cd one = Eigen::Matrix2cd::Zero();
    one(1, 1) = 1;
    const DensityMatrix decayed = apply_channel(single(one), make_channel(ChannelKind::amplitude_damping, 1.0), 0);
    EXPECT_LT((decayed.entries() - zero.entries()).cwiseAbs().maxCoeff(), 1e-15);

    std::mt19937_64 rng(2);
    for (double g : {0.0, 0.2, 0.7, 1.0}) {
        const DensityMatrix z = apply_channel(zero, make_channel(ChannelKind::amplitude_damping, g), 0);
        EXPECT_LT((z.entries() - zero.entries()).cwiseAbs().maxCoeff(), 1e-15);
    }
    for (int i = 0; i < 10; ++i) {
        const DensityMatrix rho = random_density(1, rng);
        const DensityMatrix d = apply_channel(rho, make_channel(ChannelKind::depolarizing, 1.0), 0);
        EXPECT_LT((d.entries() - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        const DensityMatrix pf = apply_channel(rho, make_channel(ChannelKind::phase_flip, 0.37), 0);
        EXPECT_NEAR(std::abs(pf(0, 0) - rho(0, 0)), 0, 1e-15);
        EXPECT_NEAR(std::abs(pf(1, 1) - rho(1, 1)), 0, 1e-15);
    }
    EXPECT_THROW(apply_channel(zero, make_channel(ChannelKind::bit_flip, 0.1), 1), QubitIndexError);
}

TEST(Completeness, Examples) {
    EXPECT_LT(check_completeness(make_channel(ChannelKind::bit_flip, 0.3)), 1e-12);
    EXPECT_LT(check_completeness(make_channel(ChannelKind::amplitude_damping, 0.7)), 1e-12);
    // {I, I}: sum = 2I, deviation 1.
    const KrausSet broken({Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Identity()});
    EXPECT_DOUBLE_EQ(check_completeness(broken), 1.0);
}

TEST(Properties, CompletenessAndTraceForRandomParameters) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (ChannelKind k : kKinds) {
        for (int i = 0; i < 100; ++i) {
            const double p = u(rng);
            const KrausSet ch = make_channel(k, p);
            ASSERT_LT(check_completeness(ch), 1e-12);
            const int n = 1 + i % 3;
            const DensityMatrix rho = random_density(n, rng);
            const int q = i % n;
            const DensityMatrix out = apply_channel(rho, ch, q);
            ASSERT_NEAR(std::abs(out.trace() - rho.trace()), 0, 1e-10);
            ASSERT_LT((out.entries() - out.entries().adjoint()).cwiseAbs().maxCoeff(), 1e-12);
            // Superoperator path against the dense Kraus sum.
            const Eigen::MatrixXcd ref = oracle::apply_kraus(n, rho.entries(), oracle::kraus(k, p), q);
            ASSERT_LT((out.entries() - ref).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Properties, DepolarizingClosedForm) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 50; ++i) {
        const double p = u(rng);
        const DensityMatrix rho = random_density(1, rng);
        const Eigen::Matrix2cd expected = (1 - p) * rho.entries() + p * 0.5 * Eigen::Matrix2cd::Identity();
        ASSERT_LT((apply_channel(rho, make_channel(ChannelKind::depolarizing, p), 0).entries() - expected).cwiseAbs().maxCoeff(),
                  1e-12);
    }
}

TEST(Properties, ChannelSymmetries) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    PauliString x, z;
    x.set(0, Pauli::X);
    z.set(0, Pauli::Z);
    for (int i = 0; i < 50; ++i) {
        const DensityMatrix rho = random_density(1, rng);
        const double p = u(rng);
        EXPECT_NEAR(expectation(apply_channel(rho, make_channel(ChannelKind::bit_flip, p), 0), x), expectation(rho, x), 1e-12);
        EXPECT_NEAR(expectation(apply_channel(rho, make_channel(ChannelKind::phase_flip, p), 0), z), expectation(rho, z), 1e-12);
        // <Z> rises monotonically with the damping rate.
        double prev = -2;
        for (double g = 0; g <= 1.0001; g += 0.1) {
            const double e = expectation(apply_channel(rho, make_channel(ChannelKind::amplitude_damping, std::min(g, 1.0)), 0), z);
            EXPECT_GE(e, prev - 1e-12);
            prev = e;
        }
        EXPECT_NEAR(prev, 1.0, 1e-12);
    }
}

TEST(NoiseModel, FlipMeansBitThenPhaseOnEveryQubit) {
    const NoiseModel nm = NoiseModel::flip(0.1);
    ASSERT_EQ(nm.entries().size(), 2u);
    EXPECT_EQ(nm.entries()[0].kind, ChannelKind::bit_flip);
    EXPECT_EQ(nm.entries()[1].kind, ChannelKind::phase_flip);
    std::mt19937_64 rng(6);
    DensityMatrix rho = random_density(2, rng);
    const Eigen::MatrixXcd before = rho.entries();
    nm.apply(rho, NoisePlacement::end_of_circuit);
    Eigen::MatrixXcd ref = before;
    for (int q = 0; q < 2; ++q) {
        ref = oracle::apply_kraus(2, ref, oracle::kraus(ChannelKind::bit_flip, 0.1), q);
        ref = oracle::apply_kraus(2, ref, oracle::kraus(ChannelKind::phase_flip, 0.1), q);
    }
    EXPECT_LT((rho.entries() - ref).cwiseAbs().maxCoeff(), 1e-12);
    // Layer-placed entries are not applied at the end.
    DensityMatrix untouched = DensityMatrix(2, before);
    NoiseModel::flip(0.1, NoisePlacement::after_each_layer).apply(untouched, NoisePlacement::end_of_circuit);
    EXPECT_LT((untouched.entries() - before).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(NoiseModel, RejectsBadParameters) {
    EXPECT_THROW(NoiseModel({{ChannelKind::depolarizing, 1.2, NoisePlacement::end_of_circuit, {}}}), ChannelParameterError);
}

TEST(NoiseModel, ExplicitQubitScope) {
    const NoiseModel nm({{ChannelKind::amplitude_damping, 1.0, NoisePlacement::end_of_circuit, {1}}});
    Eigen::Matrix4cd all_one = Eigen::Matrix4cd::Zero();
    all_one(3, 3) = 1;  // |11>
    DensityMatrix rho(2, all_one);
    nm.apply(rho, NoisePlacement::end_of_circuit);
    EXPECT_NEAR(rho(1, 1).real(), 1.0, 1e-15);  // only qubit 1 decayed
}

TEST(Tokens, RoundTrip) {
    for (ChannelKind k : kKinds) EXPECT_EQ(parse_channel_kind(channel_token(k)), k);
    EXPECT_THROW(parse_channel_kind("nonsense"), std::invalid_argument);
    EXPECT_EQ(parse_placement(placement_token(NoisePlacement::after_each_layer)), NoisePlacement::after_each_layer);
}

}  // namespace
