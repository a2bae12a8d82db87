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
 * Data re-uploading quantum-convolution classifier: a sliding-window quantum
 * kernel, 2x2 max pooling, a second quantum convolution, and a softmax head.
 *
 * Each kernel layer applies rz(w x + b) ry(w x + b) rz(w x + b) to every
 * qubit, where x is a window value scaled to [0, pi], followed by a cz ring.
 * The kernel emits <Z_q> for every qubit, so a convolution with q qubits
 * produces q feature channels.
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

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Geometry of one quantum convolution kernel.
struct KernelShape {
    int window_side = 2;
    int in_channels = 1;
    int num_qubits = 3;
    int num_layers = 3;

    int window_size() const { return window_side * window_side * in_channels; }
    /// One angle per (layer, qubit, rotation).
    int num_slots() const { return num_layers * num_qubits * 3; }
    /// A scale and an offset per angle.
    int num_parameters() const { return 2 * num_slots(); }
};

/// Re-uploading kernel circuit. Parameters are laid out as (w, b) pairs per
/// angle slot a = (layer * qubits + qubit) * 3 + rotation; slot a reads
/// window value (a mod 3 * qubits) mod window_size, so small windows are
/// reused cyclically. Window values are ordered (row, col, channel).
class ReuploadingKernel {
  public:
    explicit ReuploadingKernel(KernelShape shape);

    const KernelShape& shape() const { return shape_; }
    const Circuit& circuit() const { return circuit_; }
    int num_parameters() const { return shape_.num_parameters(); }
    int window_index(int slot) const;

    /// Rotation angle per slot.
    Eigen::VectorXd slot_angles(std::span<const double> params, std::span<const double> window) const;

    Eigen::VectorXd forward(std::span<const double> params, std::span<const double> window,
                            const std::optional<NoiseModel>& noise = std::nullopt) const;

    /// Accumulates dL/dparams (and dL/dwindow when non-empty) given dL/doutput.
    void backward(std::span<const double> params, std::span<const double> window,
                  const Eigen::Ref<const Eigen::VectorXd>& upstream, const std::optional<NoiseModel>& noise,
                  Eigen::Ref<Eigen::VectorXd> grad_params, std::span<double> grad_window) const;

  private:
    KernelShape shape_;
    Circuit circuit_;
    std::vector<Observable> observables_;
};

Eigen::VectorXd kernel_forward(const ReuploadingKernel& kernel, std::span<const double> params,
                               std::span<const double> window, const std::optional<NoiseModel>& noise = std::nullopt);

/// height x width x channels values, stored (row, col, channel) row-major.
struct FeatureMap {
    int height = 0;
    int width = 0;
    int channels = 0;
    Eigen::VectorXd values;

    FeatureMap() = default;
    FeatureMap(int h, int w, int c) : height(h), width(w), channels(c), values(Eigen::VectorXd::Zero(Eigen::Index{h} * w * c)) {}

    Eigen::Index index(int r, int col, int ch) const { return (Eigen::Index{r} * width + col) * channels + ch; }
    double& operator()(int r, int col, int ch) { return values[index(r, col, ch)]; }
    double operator()(int r, int col, int ch) const { return values[index(r, col, ch)]; }
};

FeatureMap to_feature_map(const Image& img);

/// Window at (row, col), ordered (dr, dc, channel).
std::vector<double> extract_window(const FeatureMap& input, int row, int col, int side);

FeatureMap quantum_conv_forward(const FeatureMap& input, const ReuploadingKernel& kernel,
                                std::span<const double> params, int stride,
                                const std::optional<NoiseModel>& noise = std::nullopt, int threads = 1);
FeatureMap quantum_conv_forward(const Image& image, const ReuploadingKernel& kernel,
                                std::span<const double> params, int stride,
                                const std::optional<NoiseModel>& noise = std::nullopt, int threads = 1);

struct PoolResult {
    FeatureMap output;
    /// Input index of the selected maximum, per output value.
    std::vector<Eigen::Index> argmax;
};

PoolResult maxpool2_with_indices(const FeatureMap& fm);
FeatureMap maxpool2(const FeatureMap& fm);

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);
/// softmax(W f + b); W is classes x features.
Eigen::VectorXd head_forward(const Eigen::Ref<const Eigen::VectorXd>& features, const Eigen::Ref<const Eigen::MatrixXd>& weights,
                             const Eigen::Ref<const Eigen::VectorXd>& bias);
double cross_entropy(const Eigen::Ref<const Eigen::VectorXd>& probs, int label);

struct ConvLayerConfig {
    int window = 2;
    int stride = 2;
    int qubits = 5;
    int layers = 5;
};

struct ClassifierConfig {
    int image_height = 8;
    int image_width = 8;
    int num_classes = 10;
    ConvLayerConfig conv1{2, 2, 5, 5};
    bool use_pool = true;
    bool use_conv2 = true;
    ConvLayerConfig conv2{1, 1, 5, 5};
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::adaptive;
    int epochs = 15;
    int batch_size = 1;
    double window_sample_rate = 1.0;
    std::uint64_t seed = 1;
    std::optional<NoiseModel> noise;
    int threads = 1;

    /// Binary 8x8 task: 3 qubits and 3 re-uploading layers in both convolutions.
    static ClassifierConfig desk();
    /// Throws std::invalid_argument when the geometry does not compose.
    void validate() const;
};

/// Trainable model; all parameters live in one flat vector
/// [conv1 | conv2 | head weights (row-major) | head bias].
class ClassifierModel {
  public:
    explicit ClassifierModel(const ClassifierConfig& config);

    const ClassifierConfig& config() const { return config_; }
    const ReuploadingKernel& conv1() const { return conv1_; }
    const std::optional<ReuploadingKernel>& conv2() const { return conv2_; }
    int num_features() const { return num_features_; }
    int num_quantum_parameters() const;
    int num_head_parameters() const;

    ParamVector& parameters() { return params_; }
    const ParamVector& parameters() const { return params_; }

    std::span<const double> conv1_params() const;
    std::span<const double> conv2_params() const;
    Eigen::Map<const RowMatrixXd> head_weights() const;
    Eigen::Map<const Eigen::VectorXd> head_bias() const;

    /// Uniform(-pi, pi) for kernels, Glorot uniform head weights, zero bias.
    void initialize(std::mt19937_64& rng);

    /// Flattened features fed to the head.
    Eigen::VectorXd features(const Image& img) const;
    Eigen::VectorXd predict_proba(const Image& img) const;

    /// Cross-entropy of one sample and its gradient with respect to every
    /// parameter. `rng` drives window sampling when the rate is below 1.
    double loss_and_gradient(const Image& img, int label, Eigen::Ref<Eigen::VectorXd> grad,
                             std::mt19937_64* rng = nullptr) const;
    double loss(const Image& img, int label) const;

  private:
    struct Offsets {
        Eigen::Index conv1 = 0, conv2 = 0, head_w = 0, head_b = 0, total = 0;
    };

    ClassifierConfig config_;
    ReuploadingKernel conv1_;
    std::optional<ReuploadingKernel> conv2_;
    int conv1_h_ = 0, conv1_w_ = 0;
    int num_features_ = 0;
    Offsets off_;
    ParamVector params_;
};

class TrainingDivergedError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Evaluation {
    double accuracy = 0.0;
    double loss = 0.0;
    /// confusion(true, predicted)
    Eigen::MatrixXi confusion;
};

/// Argmax prediction with ties resolved to the lowest class index.
int predict(const ClassifierModel& model, const Image& img);
Evaluation evaluate_classifier(const ClassifierModel& model, const ImageSet& set);

struct ClassifierTrainResult {
    ClassifierModel model;
    /// epoch, split, loss, accuracy
    MetricsTable metrics;
};

/// Trains from a fresh seeded initialization (or `initial` when given).
/// After every epoch the train set and, if given, the test set are
/// evaluated and recorded as splits "train" and "test".
ClassifierTrainResult train_classifier(const ImageSet& train, const ImageSet* test, const ClassifierConfig& config,
                                       const ClassifierModel* initial = nullptr);

/// Trainable parameters of a classical convolution network with the same
/// windows, channel counts and head.
std::int64_t classical_analogue_parameter_count(const ClassifierConfig& config);

}  // namespace qvml
