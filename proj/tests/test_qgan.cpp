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
#include "qvml/qgan.hpp"

namespace {

using namespace qvml;
constexpr double kPi = std::numbers::pi;

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

/// Full enumeration: build the statevector densely, keep amplitudes whose
/// ancilla bits are zero, square, then scale so the largest is 1.
Eigen::VectorXd enumerate_patch(const SubGeneratorShape& s, const std::vector<double>& z, const std::vector<double>& w) {
    const int n = s.num_qubits();
    Circuit c(n);
    for (int q = 0; q < n; ++q) c.rotation(GateKind::ry, q, z[static_cast<std::size_t>(q)]);
    for (int l = 0; l < s.depth; ++l) {
        for (int q = 0; q < n; ++q) c.rotation(GateKind::ry, q, w[static_cast<std::size_t>(l * n + q)]);
        for (int q = 0; q + 1 < n; ++q) c.gate(GateKind::cz, q, q + 1);
    }
    const Eigen::VectorXcd psi = oracle::state(c, {});
    Eigen::VectorXd p(s.patch_size());
    for (int j = 0; j < s.patch_size(); ++j) p[j] = std::norm(psi[j]);
    return p / p.maxCoeff();
}

TEST(SubGenerator, ZeroAnglesGiveFirstPixel) {
    const SubGenerator sg({2, 1, 2});
    const std::vector<double> z(3, 0.0), w(6, 0.0);
    const Eigen::VectorXd px = generate_patch(sg, z, w);
    EXPECT_EQ(px, (Eigen::Vector4d(1, 0, 0, 0)));
}

TEST(SubGenerator, MatchesFullEnumerationOracle) {
    std::mt19937_64 rng(21);
    double worst = 0;
    for (int nd = 1; nd <= 3; ++nd) {
        for (int na = 0; na <= 1; ++na) {
            for (int depth = 1; depth <= 2; ++depth) {
                const SubGeneratorShape s{nd, na, depth};
                const SubGenerator sg(s);
                for (int draw = 0; draw < 20; ++draw) {
                    const auto z = uniform(static_cast<std::size_t>(s.num_qubits()), 0, kPi / 2, rng);
                    const auto w = uniform(static_cast<std::size_t>(s.num_parameters()), -kPi, kPi, rng);
                    const Eigen::VectorXd px = generate_patch(sg, z, w);
                    ASSERT_EQ(px.size(), s.patch_size());
                    worst = std::max(worst, (px - enumerate_patch(s, z, w)).cwiseAbs().maxCoeff());
                    ASSERT_GE(px.minCoeff(), 0.0);
                    ASSERT_EQ(px.maxCoeff(), 1.0);
                }
            }
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(SubGenerator, Errors) {
    const SubGenerator sg({1, 1, 1});
    EXPECT_THROW(generate_patch(sg, std::vector<double>{2.0, 0.0}, std::vector<double>{0, 0}), std::invalid_argument);
    EXPECT_THROW(generate_patch(sg, std::vector<double>{0.0}, std::vector<double>{0, 0}), std::invalid_argument);
    EXPECT_THROW(generate_patch(sg, std::vector<double>{0.0, 0.0}, std::vector<double>{0}), std::invalid_argument);
    // Ancilla rotated to |1>: nothing survives post-selection.
    EXPECT_THROW(generate_patch(sg, std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, kPi}), PostselectionError);
    EXPECT_EQ(SubGeneratorShape{}.num_parameters(), 30);
}

TEST(SubGenerator, PixelJacobianMatchesFiniteDifferences) {
    std::mt19937_64 rng(22);
    const SubGenerator sg({2, 1, 2});
    const auto z = uniform(3, 0, kPi / 2, rng);
    auto w = uniform(6, -kPi, kPi, rng);
    const Eigen::MatrixXd jac = sg.pixel_jacobian(z, w);
    const double h = 1e-6;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double t = w[k];
        w[k] = t + h;
        const Eigen::VectorXd a = sg.generate(z, w);
        w[k] = t - h;
        const Eigen::VectorXd b = sg.generate(z, w);
        w[k] = t;
        EXPECT_LT((jac.col(static_cast<Eigen::Index>(k)) - (a - b) / (2 * h)).cwiseAbs().maxCoeff(), 1e-7);
    }
}

TEST(PatchGenerator, AssemblyAndLocality) {
    std::mt19937_64 rng(23);
    const PatchGenerator g({4, 1, 2}, 4, 8, 8);
    EXPECT_EQ(g.num_parameters(), 4 * 10);
    EXPECT_EQ(g.latent_dim(), 5);
    const auto z = uniform(5, 0, kPi / 2, rng);
    auto w = uniform(40, -kPi, kPi, rng);
    const Image img = generate_image(g, z, w);
    ASSERT_EQ(img.rows(), 8);
    ASSERT_EQ(img.cols(), 8);
    const Eigen::VectorXd flat = g.generate_flat(z, w);
    for (int s = 0; s < 4; ++s) {
        const Eigen::VectorXd patch = generate_patch(g.sub_generator(), z, g.sub_weights(w, s));
        EXPECT_EQ(flat.segment(16 * s, 16), patch);
        // Patch s covers image rows 2s and 2s+1.
        EXPECT_EQ(img(2 * s, 3), patch[3]);
        EXPECT_EQ(img(2 * s + 1, 0), patch[8]);
    }
    // Swapping the weights of sub-generators 0 and 2 swaps their blocks only.
    std::swap_ranges(w.begin(), w.begin() + 10, w.begin() + 20);
    const Eigen::VectorXd swapped = g.generate_flat(z, w);
    EXPECT_EQ(swapped.segment(0, 16), flat.segment(32, 16));
    EXPECT_EQ(swapped.segment(32, 16), flat.segment(0, 16));
    EXPECT_EQ(swapped.segment(16, 16), flat.segment(16, 16));
    EXPECT_EQ(swapped.segment(48, 16), flat.segment(48, 16));
}

TEST(PatchGenerator, ZeroWeightsRepeatFirstPixelPatch) {
    const PatchGenerator g({4, 1, 6}, 4, 8, 8);
    const std::vector<double> z(5, 0.0), w(static_cast<std::size_t>(g.num_parameters()), 0.0);
    const Eigen::VectorXd flat = g.generate_flat(z, w);
    for (int i = 0; i < 64; ++i) EXPECT_EQ(flat[i], i % 16 == 0 ? 1.0 : 0.0);
}

TEST(PatchGenerator, SurplusPixelsTruncatedAndCoverageChecked) {
    std::mt19937_64 rng(24);
    const PatchGenerator g({4, 1, 1}, 3, 6, 7);
    const auto z = uniform(5, 0, kPi / 2, rng);
    const auto w = uniform(15, -kPi, kPi, rng);
    const Eigen::VectorXd flat = g.generate_flat(z, w);
    ASSERT_EQ(flat.size(), 42);
    EXPECT_EQ(flat.tail(10), generate_patch(g.sub_generator(), z, g.sub_weights(w, 2)).head(10));
    EXPECT_THROW(PatchGenerator({4, 1, 1}, 2, 6, 7), std::invalid_argument);
}

TEST(PatchGenerator, ImageJacobianThreadsAgree) {
    std::mt19937_64 rng(25);
    const PatchGenerator g({2, 1, 2}, 3, 3, 4);
    const auto z = uniform(3, 0, kPi / 2, rng);
    const auto w = uniform(18, -kPi, kPi, rng);
    EXPECT_EQ(g.image_jacobian(z, w, std::nullopt, nullptr, 1), g.image_jacobian(z, w, std::nullopt, nullptr, 3));
}

TEST(Discriminator, Examples) {
    Discriminator d = Discriminator::standard(64);
    EXPECT_EQ(d.sizes(), (std::vector<int>{64, 64, 32, 1}));
    EXPECT_EQ(d.parameters().size(), 64 * 64 + 64 + 64 * 32 + 32 + 32 + 1);
    EXPECT_EQ(discriminator_forward(d, Eigen::VectorXd::Random(64)), 0.5);

    std::mt19937_64 rng(26);
    d.initialize(rng);
    for (int i = 0; i < 20; ++i) {
        const double v = discriminator_forward(d, 50.0 * Eigen::VectorXd::Random(64));
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
    EXPECT_THROW(discriminator_forward(d, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Discriminator, HandSetMicroNet) {
    Discriminator d({1, 1, 1, 1});
    d.parameters().values << 0.5, 0.1, -2.0, 3.0, 1.5, -0.2;
    // relu(0.5*2+0.1)=1.1, relu(-2*1.1+3)=0.8, sigmoid(1.5*0.8-0.2)=sigmoid(1)
    EXPECT_NEAR(discriminator_forward(d, Eigen::VectorXd::Constant(1, 2.0)), 1 / (1 + std::exp(-1.0)), 1e-15);
    // A negative pre-activation is clipped: relu(-2*1.1+1)=0, sigmoid(-0.2)
    d.parameters().values[3] = 1.0;
    EXPECT_NEAR(discriminator_forward(d, Eigen::VectorXd::Constant(1, 2.0)), 1 / (1 + std::exp(0.2)), 1e-15);
}

TEST(Discriminator, LossAtZeroWeights) {
    const Discriminator d = Discriminator::standard(4);
    const std::vector<Eigen::VectorXd> real(3, Eigen::Vector4d(1, 0, 0.5, 0.2)), fake(3, Eigen::Vector4d::Zero());
    EXPECT_NEAR(discriminator_loss(d, real, fake), -2 * std::log(0.5), 1e-15);
    EXPECT_NEAR(-2 * std::log(0.5), 1.3863, 1e-4);
    EXPECT_NEAR(softplus(800.0), 800.0, 1e-12);
    EXPECT_NEAR(softplus(-800.0), 0.0, 1e-300);
    EXPECT_NEAR(sigmoid(0.0), 0.5, 0);
}

TEST(Discriminator, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(27);
    Discriminator d({6, 8, 5, 1});
    d.initialize(rng);
    for (auto& v : d.parameters().values) v += 0.05;  // move biases off zero
    std::vector<Eigen::VectorXd> real, fake;
    for (int i = 0; i < 4; ++i) {
        real.push_back((Eigen::VectorXd::Random(6).array() + 1) / 2);
        fake.push_back((Eigen::VectorXd::Random(6).array() + 1) / 2);
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(d.parameters().size());
    discriminator_loss(d, real, fake, &grad);
    auto& v = d.parameters().values;
    const double h = 1e-5;
    double worst = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double t = v[k];
        v[k] = t + h;
        const double a = discriminator_loss(d, real, fake);
        v[k] = t - h;
        const double b = discriminator_loss(d, real, fake);
        v[k] = t;
        worst = std::max(worst, std::abs(grad[k] - (a - b) / (2 * h)));
    }
    EXPECT_LT(worst, 1e-6);

    // Input gradient from backward() against the logit.
    Eigen::VectorXd x = real[0];
    Eigen::VectorXd scratch = Eigen::VectorXd::Zero(v.size());
    const Eigen::VectorXd dx = d.backward(x, 1.0, scratch);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double t = x[i];
        x[i] = t + h;
        const double a = d.logit(x);
        x[i] = t - h;
        const double b = d.logit(x);
        x[i] = t;
        EXPECT_NEAR(dx[i], (a - b) / (2 * h), 1e-6);
    }
}

TEST(Generator, LossGradientOnThreeQubitMicroModel) {
    std::mt19937_64 rng(28);
    const PatchGenerator g({2, 1, 2}, 1, 2, 2);
    Discriminator d = Discriminator::standard(4);
    d.initialize(rng);
    auto w = uniform(6, -kPi, kPi, rng);
    std::vector<Eigen::VectorXd> latents;
    for (int i = 0; i < 3; ++i) latents.push_back(sample_latent(3, rng));
    for (const bool noisy : {false, true}) {
        const std::optional<NoiseModel> nm = noisy ? std::optional(NoiseModel::flip(0.05)) : std::nullopt;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(6);
        generator_loss(g, w, d, latents, nm, &grad);
        const double h = 1e-5;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double t = w[k];
            w[k] = t + h;
            const double a = generator_loss(g, w, d, latents, nm);
            w[k] = t - h;
            const double b = generator_loss(g, w, d, latents, nm);
            w[k] = t;
            EXPECT_NEAR(grad[static_cast<Eigen::Index>(k)], (a - b) / (2 * h), 1e-4) << k << " noisy " << noisy;
        }
    }
}

TEST(Latent, RangeAndDeterminism) {
    std::mt19937_64 a(5), b(5);
    for (int i = 0; i < 100; ++i) {
        const Eigen::VectorXd z = sample_latent(5, a);
        EXPECT_GE(z.minCoeff(), 0.0);
        EXPECT_LE(z.maxCoeff(), kPi / 2);
        EXPECT_EQ(z, sample_latent(5, b));
    }
}

ImageSet blob_set(int count, std::mt19937_64& rng) {
    ImageSet s;
    s.height = s.width = 4;
    s.labels.emplace();
    std::uniform_real_distribution<double> u(0, 0.2);
    for (int i = 0; i < count; ++i) {
        Image img(4, 4);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) img(r, c) = ((r == 1 || r == 2) && (c == 1 || c == 2)) ? 1.0 - u(rng) : u(rng);
        }
        s.images.push_back(img);
        s.labels->push_back(0);
    }
    return s;
}

GanConfig small_config() {
    GanConfig cfg;
    cfg.image_height = cfg.image_width = 4;
    cfg.sub_generators = 2;
    cfg.shape = {3, 1, 2};
    cfg.disc_hidden = {8, 4};
    cfg.batch_size = 4;
    cfg.iterations = 6;
    cfg.sample_every = 4;
    return cfg;
}

TEST(Train, ZeroIterationsKeepsInitialState) {
    std::mt19937_64 rng(29);
    const ImageSet data = blob_set(32, rng);
    GanConfig cfg = small_config();
    cfg.iterations = 0;
    const auto res = train_gan(data, cfg);
    ASSERT_EQ(res.size(), 1u);
    EXPECT_TRUE(res[0].metrics.rows.empty());
    EXPECT_TRUE(res[0].samples.empty());
    std::mt19937_64 init(cfg.seed);
    const GanState fresh = make_gan_state(cfg, init);
    EXPECT_EQ(res[0].state.gen_params.values, fresh.gen_params.values);
    EXPECT_EQ(res[0].state.discriminator.parameters().values, fresh.discriminator.parameters().values);
}

TEST(Train, RecordsMetricsSamplesAndIsDeterministic) {
    std::mt19937_64 rng(30);
    const ImageSet data = blob_set(40, rng);
    const GanConfig cfg = small_config();
    const auto a = train_gan(data, cfg);
    const auto b = train_gan(data, cfg);
    ASSERT_EQ(a[0].metrics.rows.size(), 6u);
    ASSERT_EQ(a[0].samples.size(), 2u);  // iteration 4 and the last one
    EXPECT_EQ(a[0].samples[0].iteration, 4);
    EXPECT_EQ(a[0].samples[1].iteration, 6);
    EXPECT_EQ(a[0].state.gen_params.values, b[0].state.gen_params.values);
    EXPECT_EQ(encode_csv(a[0].metrics), encode_csv(b[0].metrics));
    for (const auto& row : a[0].metrics.rows) {
        const double dfake = std::get<double>(row[3]);
        EXPECT_GT(dfake, 0.0);
        EXPECT_LT(dfake, 1.0);
    }
}

TEST(Train, RejectsSmallOrEmptyData) {
    std::mt19937_64 rng(31);
    EXPECT_THROW(train_gan(blob_set(0, rng), small_config()), std::invalid_argument);
    EXPECT_THROW(train_gan(blob_set(31, rng), small_config()), std::invalid_argument);
}

TEST(Stats, MeanImageAndPearson) {
    ImageSet s;
    s.height = 1;
    s.width = 2;
    s.images = {Image(Eigen::RowVector2d(0, 1)), Image(Eigen::RowVector2d(1, 1))};
    EXPECT_EQ(mean_image(s), Eigen::Vector2d(0.5, 1.0));
    const Eigen::Vector3d a(1, 2, 3);
    EXPECT_NEAR(pearson(a, 2 * a + Eigen::Vector3d::Ones()), 1.0, 1e-15);
    EXPECT_NEAR(pearson(a, -a), -1.0, 1e-15);
}

}  // namespace
