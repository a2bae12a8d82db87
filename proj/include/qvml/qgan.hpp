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
 * Patch quantum GAN. Each sub-generator encodes a latent vector with ry
 * rotations, applies trainable ry layers with cz chains, post-selects its
 * ancilla qubits on all-zeros and scales the conditional data-qubit
 * distribution so its largest entry is 1. Patches are concatenated into an
 * image and scored by a classical MLP discriminator.
 *
 * Ancillas are the most significant qubits, so data outcome j is basis
 * index j with the ancilla bits clear.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qvml/channels.hpp"
#include "qvml/circuit.hpp"
#include "qvml/data_io.hpp"
#include "qvml/gradients.hpp"
#include "qvml/optimizer.hpp"

namespace qvml {

struct SubGeneratorShape {
    int data_qubits = 4;
    int ancilla_qubits = 1;
    int depth = 6;

    int num_qubits() const { return data_qubits + ancilla_qubits; }
    int patch_size() const { return 1 << data_qubits; }
    int num_parameters() const { return depth * num_qubits(); }
};

/// Latent symbols z0.. come first, then one weight per (layer, qubit).
class SubGenerator {
  public:
    explicit SubGenerator(SubGeneratorShape shape);

    const SubGeneratorShape& shape() const { return shape_; }
    const Circuit& circuit() const { return circuit_; }

    /// Raw joint outcome distribution over all qubits.
    Eigen::VectorXd outcome_probs(std::span<const double> z, std::span<const double> weights,
                                  const std::optional<NoiseModel>& noise = std::nullopt) const;
    Eigen::VectorXd generate(std::span<const double> z, std::span<const double> weights,
                             const std::optional<NoiseModel>& noise = std::nullopt) const;
    /// d pixel / d weight (patch_size x num_parameters), with the position of
    /// the patch maximum held fixed. Writes the pixels to `pixels` if given.
    Eigen::MatrixXd pixel_jacobian(std::span<const double> z, std::span<const double> weights,
                                   const std::optional<NoiseModel>& noise = std::nullopt,
                                   Eigen::VectorXd* pixels = nullptr) const;

  private:
    std::vector<double> symbol_values(std::span<const double> z, std::span<const double> weights) const;

    SubGeneratorShape shape_;
    Circuit circuit_;
    std::vector<int> weight_symbols_;
};

Eigen::VectorXd generate_patch(const SubGenerator& sg, std::span<const double> z, std::span<const double> weights,
                               const std::optional<NoiseModel>& noise = std::nullopt);

/// S identical sub-generators whose patches fill an image row by row;
/// pixels beyond height * width are dropped.
class PatchGenerator {
  public:
    PatchGenerator(SubGeneratorShape shape, int sub_generators, int image_height, int image_width);

    const SubGenerator& sub_generator() const { return sub_; }
    int num_sub_generators() const { return count_; }
    int latent_dim() const { return sub_.shape().num_qubits(); }
    int image_height() const { return height_; }
    int image_width() const { return width_; }
    int num_pixels() const { return height_ * width_; }
    int num_parameters() const { return count_ * sub_.shape().num_parameters(); }

    /// Weights of sub-generator s within the flat parameter vector.
    std::span<const double> sub_weights(std::span<const double> weights, int s) const;

    /// Row-major flattened image.
    Eigen::VectorXd generate_flat(std::span<const double> z, std::span<const double> weights,
                                  const std::optional<NoiseModel>& noise = std::nullopt) const;
    Image generate_image(std::span<const double> z, std::span<const double> weights,
                         const std::optional<NoiseModel>& noise = std::nullopt) const;
    /// d(flat image) / d weights (num_pixels x num_parameters).
    Eigen::MatrixXd image_jacobian(std::span<const double> z, std::span<const double> weights,
                                   const std::optional<NoiseModel>& noise, Eigen::VectorXd* image,
                                   int threads = 1) const;

  private:
    SubGenerator sub_;
    int count_;
    int height_;
    int width_;
};

Image generate_image(const PatchGenerator& g, std::span<const double> z, std::span<const double> weights,
                     const std::optional<NoiseModel>& noise = std::nullopt);

/// Fully connected network with rectifier hidden layers and a single
/// sigmoid output. Layer j stores a column-major (out x in) weight matrix
/// followed by its bias.
class Discriminator {
  public:
    explicit Discriminator(std::vector<int> sizes);
    /// input -> 64 -> 32 -> 1
    static Discriminator standard(int input);

    const std::vector<int>& sizes() const { return sizes_; }
    int input_size() const { return sizes_.front(); }
    ParamVector& parameters() { return params_; }
    const ParamVector& parameters() const { return params_; }

    /// Glorot-uniform weights, zero biases.
    void initialize(std::mt19937_64& rng);

    double logit(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    double forward(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Adds dlogit * d(logit)/d(params) to `grad`; returns dlogit * d(logit)/dx.
    Eigen::VectorXd backward(const Eigen::Ref<const Eigen::VectorXd>& x, double dlogit,
                             Eigen::Ref<Eigen::VectorXd> grad) const;

  private:
    std::vector<int> sizes_;
    std::vector<Eigen::Index> offsets_;
    ParamVector params_;
};

double discriminator_forward(const Discriminator& d, const Eigen::Ref<const Eigen::VectorXd>& image);

double sigmoid(double x);
/// log(1 + e^x) without overflow.
double softplus(double x);

/// Mean of -log D(real) over the real batch plus mean of -log(1 - D(fake))
/// over the fake batch; adds the gradient to `grad` when given.
double discriminator_loss(const Discriminator& d, std::span<const Eigen::VectorXd> real,
                          std::span<const Eigen::VectorXd> fake, Eigen::VectorXd* grad = nullptr);

/// Mean of -log D(G(z)) over the latent batch; adds the generator-weight
/// gradient to `grad` when given.
double generator_loss(const PatchGenerator& g, std::span<const double> weights, const Discriminator& d,
                      std::span<const Eigen::VectorXd> latents, const std::optional<NoiseModel>& noise,
                      Eigen::VectorXd* grad = nullptr, int threads = 1);

struct GanConfig {
    int image_height = 8;
    int image_width = 8;
    int sub_generators = 4;
    SubGeneratorShape shape{4, 1, 6};
    std::vector<int> disc_hidden{64, 32};
    double gen_learning_rate = 2e-4;
    double disc_learning_rate = 2e-4;
    OptimizerKind optimizer = OptimizerKind::adaptive;
    int iterations = 300;
    int batch_size = 16;
    /// Generator weights start Uniform(0, init_range).
    double init_range = 1.0;
    /// Sample dump period in iterations (0 disables dumps).
    int sample_every = 50;
    std::uint64_t seed = 1;
    std::optional<NoiseModel> noise;
    int threads = 1;

    void validate() const;
};

/// Latent vector with entries Uniform(0, pi/2).
Eigen::VectorXd sample_latent(int dim, std::mt19937_64& rng);

struct GanState {
    PatchGenerator generator;
    ParamVector gen_params;
    Discriminator discriminator;
    OptimizerState gen_opt;
    OptimizerState disc_opt;
};

GanState make_gan_state(const GanConfig& config, std::mt19937_64& rng);

struct GanStepResult {
    double disc_loss = 0.0;
    double gen_loss = 0.0;
    /// Mean discriminator output on the fake batch before its update.
    double d_fake_mean = 0.0;
};

class GanDivergedError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One discriminator step followed by one generator step on the same fake
/// batch (re-scored by the updated discriminator).
GanStepResult gan_train_step(GanState& state, std::span<const Eigen::VectorXd> real_batch, std::mt19937_64& rng,
                             const GanConfig& config);

struct GanSample {
    int iteration;
    Image image;
};

struct GanClassResult {
    int label;  // -1 for an unlabelled dataset
    GanState state;
    /// iteration, disc_loss, gen_loss, d_fake_mean
    MetricsTable metrics;
    std::vector<GanSample> samples;
};

/// Trains one generator per class present in the dataset (one in total when
/// unlabelled). Samples use a fixed latent vector per class and are taken
/// every `sample_every` iterations and after the last one.
std::vector<GanClassResult> train_gan(const ImageSet& data, const GanConfig& config);

/// Mean image of a set, flattened row-major.
Eigen::VectorXd mean_image(const ImageSet& set);
double pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace qvml
