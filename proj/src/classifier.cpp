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


#include "qvml/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qvml/parallel.hpp"

namespace qvml {

namespace {

constexpr double kPi = std::numbers::pi;

void append_entangler(Circuit& c, int q) {
    if (q == 2) {
        c.gate(GateKind::cz, 0, 1);
    } else if (q >= 3) {
        for (int i = 0; i + 1 < q; ++i) c.gate(GateKind::cz, i, i + 1);
        c.gate(GateKind::cz, q - 1, 0);
    }
}

Circuit build_kernel_circuit(const KernelShape& s) {
    Circuit c(s.num_qubits);
    constexpr GateKind kBlock[3] = {GateKind::rz, GateKind::ry, GateKind::rz};
    for (int l = 0; l < s.num_layers; ++l) {
        for (int q = 0; q < s.num_qubits; ++q) {
            for (int r = 0; r < 3; ++r) {
                const int slot = (l * s.num_qubits + q) * 3 + r;
                c.rotation(kBlock[r], q, c.symbol("a" + std::to_string(slot)));
            }
        }
        append_entangler(c, s.num_qubits);
        c.barrier();
    }
    return c;
}

FeatureMap map_to_unit(const FeatureMap& fm) {
    FeatureMap out = fm;
    out.values = (fm.values.array() + 1.0) * 0.5;
    return out;
}

int conv_out(int size, int window, int stride) { return (size - window) / stride + 1; }

}  // namespace

ReuploadingKernel::ReuploadingKernel(KernelShape shape) : shape_(shape), circuit_(1) {
    if (shape.window_side < 1 || shape.in_channels < 1 || shape.num_qubits < 1 || shape.num_layers < 1) {
        throw std::invalid_argument("kernel window, channels, qubits and layers must be >= 1");
    }
    if (shape.num_qubits > kMaxDensityQubits) throw std::invalid_argument("kernel qubit count exceeds simulator capacity");
    circuit_ = build_kernel_circuit(shape);
    for (int q = 0; q < shape.num_qubits; ++q) observables_.push_back(Observable::z(q));
}

int ReuploadingKernel::window_index(int slot) const {
    return (slot % (3 * shape_.num_qubits)) % shape_.window_size();
}

Eigen::VectorXd ReuploadingKernel::slot_angles(std::span<const double> params, std::span<const double> window) const {
    if (params.size() != static_cast<std::size_t>(num_parameters())) {
        throw std::invalid_argument("kernel parameter count mismatch");
    }
    if (window.size() != static_cast<std::size_t>(shape_.window_size())) {
        throw std::invalid_argument("kernel window size mismatch");
    }
    Eigen::VectorXd angles(shape_.num_slots());
    for (int a = 0; a < shape_.num_slots(); ++a) {
        const double x = kPi * window[static_cast<std::size_t>(window_index(a))];
        angles[a] = params[2 * a] * x + params[2 * a + 1];
    }
    return angles;
}

Eigen::VectorXd ReuploadingKernel::forward(std::span<const double> params, std::span<const double> window,
                                           const std::optional<NoiseModel>& noise) const {
    const Eigen::VectorXd angles = slot_angles(params, window);
    const std::span<const double> values(angles.data(), static_cast<std::size_t>(angles.size()));
    return expectations(circuit_, resolve_angles(circuit_, values), observables_, noise);
}

void ReuploadingKernel::backward(std::span<const double> params, std::span<const double> window,
                                 const Eigen::Ref<const Eigen::VectorXd>& upstream,
                                 const std::optional<NoiseModel>& noise, Eigen::Ref<Eigen::VectorXd> grad_params,
                                 std::span<double> grad_window) const {
    if (upstream.size() != shape_.num_qubits || grad_params.size() != num_parameters()) {
        throw std::invalid_argument("kernel gradient buffer size mismatch");
    }
    const Eigen::VectorXd angles = slot_angles(params, window);
    const std::span<const double> values(angles.data(), static_cast<std::size_t>(angles.size()));
    const Eigen::MatrixXd jac = shift_rule_jacobian(circuit_, values, observables_, noise);
    const Eigen::VectorXd g = jac.transpose() * upstream;
    for (int a = 0; a < shape_.num_slots(); ++a) {
        const auto p = static_cast<std::size_t>(window_index(a));
        grad_params[2 * a] += g[a] * kPi * window[p];
        grad_params[2 * a + 1] += g[a];
        if (!grad_window.empty()) grad_window[p] += g[a] * params[2 * a] * kPi;
    }
}

Eigen::VectorXd kernel_forward(const ReuploadingKernel& kernel, std::span<const double> params,
                               std::span<const double> window, const std::optional<NoiseModel>& noise) {
    return kernel.forward(params, window, noise);
}

FeatureMap to_feature_map(const Image& img) {
    FeatureMap fm(static_cast<int>(img.rows()), static_cast<int>(img.cols()), 1);
    for (int r = 0; r < fm.height; ++r) {
        for (int c = 0; c < fm.width; ++c) fm(r, c, 0) = img(r, c);
    }
    return fm;
}

std::vector<double> extract_window(const FeatureMap& input, int row, int col, int side) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(side * side * input.channels));
    for (int dr = 0; dr < side; ++dr) {
        for (int dc = 0; dc < side; ++dc) {
            for (int ch = 0; ch < input.channels; ++ch) w.push_back(input(row + dr, col + dc, ch));
        }
    }
    return w;
}

FeatureMap quantum_conv_forward(const FeatureMap& input, const ReuploadingKernel& kernel,
                                std::span<const double> params, int stride, const std::optional<NoiseModel>& noise,
                                int threads) {
    const KernelShape& s = kernel.shape();
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (input.height < s.window_side || input.width < s.window_side) {
        throw std::invalid_argument("input is smaller than the kernel window");
    }
    if (input.channels != s.in_channels) throw std::invalid_argument("input channel count does not match kernel");
    const int oh = conv_out(input.height, s.window_side, stride);
    const int ow = conv_out(input.width, s.window_side, stride);
    FeatureMap out(oh, ow, s.num_qubits);
    parallel_for(static_cast<std::size_t>(oh * ow), threads, [&](std::size_t i) {
        const int r = static_cast<int>(i) / ow;
        const int c = static_cast<int>(i) % ow;
        const std::vector<double> w = extract_window(input, r * stride, c * stride, s.window_side);
        out.values.segment(out.index(r, c, 0), s.num_qubits) = kernel.forward(params, w, noise);
    });
    return out;
}

FeatureMap quantum_conv_forward(const Image& image, const ReuploadingKernel& kernel, std::span<const double> params,
                                int stride, const std::optional<NoiseModel>& noise, int threads) {
    return quantum_conv_forward(to_feature_map(image), kernel, params, stride, noise, threads);
}

PoolResult maxpool2_with_indices(const FeatureMap& fm) {
    if (fm.height % 2 != 0 || fm.width % 2 != 0) throw std::invalid_argument("maxpool2 needs even height and width");
    PoolResult res{FeatureMap(fm.height / 2, fm.width / 2, fm.channels), {}};
    res.argmax.resize(static_cast<std::size_t>(res.output.values.size()));
    for (int r = 0; r < res.output.height; ++r) {
        for (int c = 0; c < res.output.width; ++c) {
            for (int ch = 0; ch < fm.channels; ++ch) {
                Eigen::Index best = fm.index(2 * r, 2 * c, ch);
                for (int d = 1; d < 4; ++d) {
                    const Eigen::Index k = fm.index(2 * r + d / 2, 2 * c + d % 2, ch);
                    if (fm.values[k] > fm.values[best]) best = k;
                }
                const Eigen::Index o = res.output.index(r, c, ch);
                res.output.values[o] = fm.values[best];
                res.argmax[static_cast<std::size_t>(o)] = best;
            }
        }
    }
    return res;
}

FeatureMap maxpool2(const FeatureMap& fm) { return maxpool2_with_indices(fm).output; }

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits) {
    const Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
    return e / e.sum();
}

Eigen::VectorXd head_forward(const Eigen::Ref<const Eigen::VectorXd>& features,
                             const Eigen::Ref<const Eigen::MatrixXd>& weights,
                             const Eigen::Ref<const Eigen::VectorXd>& bias) {
    if (weights.cols() != features.size() || weights.rows() != bias.size()) {
        throw std::invalid_argument("head dimensions do not match the feature length");
    }
    return softmax(weights * features + bias);
}

double cross_entropy(const Eigen::Ref<const Eigen::VectorXd>& probs, int label) {
    return -std::log(std::max(probs[label], std::numeric_limits<double>::min()));
}

ClassifierConfig ClassifierConfig::desk() {
    ClassifierConfig c;
    c.num_classes = 2;
    c.conv1 = {2, 2, 3, 3};
    c.conv2 = {1, 1, 3, 3};
    return c;
}

void ClassifierConfig::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (image_height < 1 || image_width < 1) fail("image dimensions must be positive");
    if (num_classes < 2) fail("num_classes must be >= 2");
    if (learning_rate <= 0) fail("learning_rate must be > 0");
    if (epochs < 0) fail("epochs must be >= 0");
    if (batch_size < 1) fail("batch_size must be >= 1");
    if (!(window_sample_rate > 0 && window_sample_rate <= 1)) fail("window_sample_rate must be in (0, 1]");
    if (threads < 1) fail("threads must be >= 1");
    for (const ConvLayerConfig* l : {&conv1, &conv2}) {
        if (l->window < 1 || l->stride < 1 || l->qubits < 1 || l->layers < 1) {
            fail("convolution window, stride, qubits and layers must be >= 1");
        }
    }
    if (conv1.window > image_height || conv1.window > image_width) fail("conv1 window exceeds the image");
    int h = conv_out(image_height, conv1.window, conv1.stride);
    int w = conv_out(image_width, conv1.window, conv1.stride);
    if (use_pool) {
        if (h % 2 != 0 || w % 2 != 0) fail("conv1 output must have even dimensions for pooling");
        h /= 2;
        w /= 2;
    }
    if (use_conv2 && (conv2.window > h || conv2.window > w)) fail("conv2 window exceeds its input");
}

ClassifierModel::ClassifierModel(const ClassifierConfig& config)
    : config_(config), conv1_((config.validate(), KernelShape{config.conv1.window, 1, config.conv1.qubits, config.conv1.layers})) {
    conv1_h_ = conv_out(config.image_height, config.conv1.window, config.conv1.stride);
    conv1_w_ = conv_out(config.image_width, config.conv1.window, config.conv1.stride);
    int h = conv1_h_, w = conv1_w_, ch = config.conv1.qubits;
    if (config.use_pool) {
        h /= 2;
        w /= 2;
    }
    if (config.use_conv2) {
        conv2_.emplace(KernelShape{config.conv2.window, ch, config.conv2.qubits, config.conv2.layers});
        h = conv_out(h, config.conv2.window, config.conv2.stride);
        w = conv_out(w, config.conv2.window, config.conv2.stride);
        ch = config.conv2.qubits;
    }
    num_features_ = h * w * ch;
    off_.conv1 = 0;
    off_.conv2 = conv1_.num_parameters();
    off_.head_w = off_.conv2 + (conv2_ ? conv2_->num_parameters() : 0);
    off_.head_b = off_.head_w + Eigen::Index{config.num_classes} * num_features_;
    off_.total = off_.head_b + config.num_classes;

    params_.values = Eigen::VectorXd::Zero(off_.total);
    params_.names.reserve(static_cast<std::size_t>(off_.total));
    auto kernel_names = [&](const std::string& prefix, const KernelShape& s) {
        for (int a = 0; a < s.num_slots(); ++a) {
            const int l = a / (3 * s.num_qubits), q = (a / 3) % s.num_qubits, r = a % 3;
            const std::string idx = std::to_string(l) + "." + std::to_string(q) + "." + std::to_string(r);
            params_.names.push_back(prefix + ".w." + idx);
            params_.names.push_back(prefix + ".b." + idx);
        }
    };
    kernel_names("conv1", conv1_.shape());
    if (conv2_) kernel_names("conv2", conv2_->shape());
    for (int c = 0; c < config.num_classes; ++c) {
        for (int f = 0; f < num_features_; ++f) params_.names.push_back("head.w." + std::to_string(c) + "." + std::to_string(f));
    }
    for (int c = 0; c < config.num_classes; ++c) params_.names.push_back("head.b." + std::to_string(c));
}

int ClassifierModel::num_quantum_parameters() const { return static_cast<int>(off_.head_w); }
int ClassifierModel::num_head_parameters() const { return static_cast<int>(off_.total - off_.head_w); }

std::span<const double> ClassifierModel::conv1_params() const {
    return {params_.values.data() + off_.conv1, static_cast<std::size_t>(conv1_.num_parameters())};
}

std::span<const double> ClassifierModel::conv2_params() const {
    if (!conv2_) return {};
    return {params_.values.data() + off_.conv2, static_cast<std::size_t>(conv2_->num_parameters())};
}

Eigen::Map<const RowMatrixXd> ClassifierModel::head_weights() const {
    return {params_.values.data() + off_.head_w, config_.num_classes, num_features_};
}

Eigen::Map<const Eigen::VectorXd> ClassifierModel::head_bias() const {
    return {params_.values.data() + off_.head_b, config_.num_classes};
}

void ClassifierModel::initialize(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (Eigen::Index i = 0; i < off_.head_w; ++i) params_.values[i] = angle(rng);
    const double bound = std::sqrt(6.0 / (num_features_ + config_.num_classes));
    std::uniform_real_distribution<double> glorot(-bound, bound);
    for (Eigen::Index i = off_.head_w; i < off_.head_b; ++i) params_.values[i] = glorot(rng);
    params_.values.segment(off_.head_b, config_.num_classes).setZero();
}

namespace {

struct ForwardCache {
    FeatureMap f1;
    PoolResult pool;
    FeatureMap in2;
    FeatureMap f2;
    Eigen::VectorXd features;
    Eigen::VectorXd probs;
};

}  // namespace

// Forward pass keeping what the backward pass needs.
static ForwardCache run_forward(const ClassifierModel& m, const Image& img) {
    const ClassifierConfig& cfg = m.config();
    if (img.rows() != cfg.image_height || img.cols() != cfg.image_width) {
        throw std::invalid_argument("image dimensions do not match the classifier");
    }
    ForwardCache fc;
    fc.f1 = quantum_conv_forward(img, m.conv1(), m.conv1_params(), cfg.conv1.stride, cfg.noise, cfg.threads);
    const FeatureMap* last = &fc.f1;
    if (cfg.use_pool) {
        fc.pool = maxpool2_with_indices(fc.f1);
        last = &fc.pool.output;
    }
    if (m.conv2()) {
        fc.in2 = map_to_unit(*last);
        fc.f2 = quantum_conv_forward(fc.in2, *m.conv2(), m.conv2_params(), cfg.conv2.stride, cfg.noise, cfg.threads);
        last = &fc.f2;
    }
    fc.features = last->values;
    fc.probs = head_forward(fc.features, m.head_weights(), m.head_bias());
    return fc;
}

Eigen::VectorXd ClassifierModel::features(const Image& img) const { return run_forward(*this, img).features; }

Eigen::VectorXd ClassifierModel::predict_proba(const Image& img) const { return run_forward(*this, img).probs; }

double ClassifierModel::loss(const Image& img, int label) const { return cross_entropy(predict_proba(img), label); }

namespace {

/// Backward pass of one quantum convolution. Returns dL/dinput when
/// `want_input` is set.
FeatureMap conv_backward(const FeatureMap& input, const ReuploadingKernel& kernel, std::span<const double> params,
                         int stride, const FeatureMap& upstream, const std::optional<NoiseModel>& noise,
                         double sample_rate, std::mt19937_64* rng, int threads, bool want_input,
                         Eigen::Ref<Eigen::VectorXd> grad_params) {
    const KernelShape& s = kernel.shape();
    const int n = upstream.height * upstream.width;
    std::vector<double> weight(static_cast<std::size_t>(n), 1.0);
    if (sample_rate < 1.0 && rng) {
        std::bernoulli_distribution keep(sample_rate);
        for (auto& w : weight) w = keep(*rng) ? 1.0 / sample_rate : 0.0;
    }
    std::vector<Eigen::VectorXd> gp(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> gw(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        const Eigen::VectorXd up = weight[i] * upstream.values.segment(upstream.index(static_cast<int>(i) / upstream.width, static_cast<int>(i) % upstream.width, 0), s.num_qubits);
        if (weight[i] == 0.0 || up.isZero(0.0)) return;
        const int r = static_cast<int>(i) / upstream.width, c = static_cast<int>(i) % upstream.width;
        const std::vector<double> w = extract_window(input, r * stride, c * stride, s.window_side);
        gp[i] = Eigen::VectorXd::Zero(kernel.num_parameters());
        if (want_input) gw[i].assign(w.size(), 0.0);
        kernel.backward(params, w, up, noise, gp[i], gw[i]);
    });
    FeatureMap d_input(input.height, input.width, input.channels);
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (gp[k].size() == 0) continue;
        grad_params += gp[k];
        if (!want_input) continue;
        const int r = i / upstream.width * stride, c = i % upstream.width * stride;
        std::size_t j = 0;
        for (int dr = 0; dr < s.window_side; ++dr) {
            for (int dc = 0; dc < s.window_side; ++dc) {
                for (int ch = 0; ch < input.channels; ++ch) d_input(r + dr, c + dc, ch) += gw[k][j++];
            }
        }
    }
    return d_input;
}

}  // namespace

double ClassifierModel::loss_and_gradient(const Image& img, int label, Eigen::Ref<Eigen::VectorXd> grad,
                                          std::mt19937_64* rng) const {
    if (grad.size() != off_.total) throw std::invalid_argument("gradient buffer size mismatch");
    if (label < 0 || label >= config_.num_classes) throw std::invalid_argument("label out of range");
    const ForwardCache fc = run_forward(*this, img);
    const double loss = cross_entropy(fc.probs, label);

    Eigen::VectorXd dlogits = fc.probs;
    dlogits[label] -= 1.0;
    Eigen::Map<RowMatrixXd>(grad.data() + off_.head_w, config_.num_classes, num_features_) += dlogits * fc.features.transpose();
    grad.segment(off_.head_b, config_.num_classes) += dlogits;
    const Eigen::VectorXd dfeat = head_weights().transpose() * dlogits;

    const FeatureMap& last_pre2 = config_.use_pool ? fc.pool.output : fc.f1;
    FeatureMap d_pre2(last_pre2.height, last_pre2.width, last_pre2.channels);
    if (conv2_) {
        FeatureMap up2(fc.f2.height, fc.f2.width, fc.f2.channels);
        up2.values = dfeat;
        const FeatureMap d_in2 =
            conv_backward(fc.in2, *conv2_, conv2_params(), config_.conv2.stride, up2, config_.noise,
                          config_.window_sample_rate, rng, config_.threads, true,
                          grad.segment(off_.conv2, conv2_->num_parameters()));
        d_pre2.values = 0.5 * d_in2.values;
    } else {
        d_pre2.values = dfeat;
    }

    FeatureMap d_f1(fc.f1.height, fc.f1.width, fc.f1.channels);
    if (config_.use_pool) {
        for (std::size_t i = 0; i < fc.pool.argmax.size(); ++i) d_f1.values[fc.pool.argmax[i]] += d_pre2.values[static_cast<Eigen::Index>(i)];
    } else {
        d_f1.values = d_pre2.values;
    }
    conv_backward(to_feature_map(img), conv1_, conv1_params(), config_.conv1.stride, d_f1, config_.noise,
                  config_.window_sample_rate, rng, config_.threads, false,
                  grad.segment(off_.conv1, conv1_.num_parameters()));
    return loss;
}

int predict(const ClassifierModel& model, const Image& img) {
    const Eigen::VectorXd p = model.predict_proba(img);
    int best = 0;
    for (int c = 1; c < p.size(); ++c) {
        if (p[c] > p[best]) best = c;
    }
    return best;
}

Evaluation evaluate_classifier(const ClassifierModel& model, const ImageSet& set) {
    if (set.size() == 0) throw std::invalid_argument("cannot evaluate on an empty dataset");
    if (!set.labels) throw std::invalid_argument("evaluation needs labels");
    const int classes = model.config().num_classes;
    Evaluation ev;
    ev.confusion = Eigen::MatrixXi::Zero(classes, classes);
    int correct = 0;
    double total_loss = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const int label = (*set.labels)[i];
        if (label < 0 || label >= classes) throw std::invalid_argument("label out of range");
        const Eigen::VectorXd p = model.predict_proba(set.images[i]);
        int best = 0;
        for (int c = 1; c < classes; ++c) {
            if (p[c] > p[best]) best = c;
        }
        ++ev.confusion(label, best);
        correct += best == label;
        total_loss += cross_entropy(p, label);
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(set.size());
    ev.loss = total_loss / static_cast<double>(set.size());
    return ev;
}

ClassifierTrainResult train_classifier(const ImageSet& train, const ImageSet* test, const ClassifierConfig& config,
                                       const ClassifierModel* initial) {
    config.validate();
    if (train.size() == 0) throw std::invalid_argument("training set is empty");
    if (!train.labels) throw std::invalid_argument("training set has no labels");
    std::vector<int> per_class(static_cast<std::size_t>(config.num_classes), 0);
    for (int l : *train.labels) {
        if (l < 0 || l >= config.num_classes) throw std::invalid_argument("training label out of range");
        ++per_class[static_cast<std::size_t>(l)];
    }
    if (std::find(per_class.begin(), per_class.end(), 0) != per_class.end()) {
        throw std::invalid_argument("training set needs at least one sample per class");
    }

    std::mt19937_64 rng(config.seed);
    ClassifierTrainResult result{initial ? *initial : ClassifierModel(config), {{"epoch", "split", "loss", "accuracy"}, {}}};
    ClassifierModel& model = result.model;
    if (!initial) model.initialize(rng);

    OptimizerState opt(config.optimizer, config.learning_rate);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Eigen::VectorXd grad(model.parameters().size());

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            grad.setZero();
            double batch_loss = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t i = order[k];
                batch_loss += model.loss_and_gradient(train.images[i], (*train.labels)[i], grad, &rng);
            }
            if (!std::isfinite(batch_loss) || !grad.allFinite()) {
                throw TrainingDivergedError("non-finite loss or gradient in epoch " + std::to_string(epoch));
            }
            grad /= static_cast<double>(end - start);
            optimizer_step(opt, model.parameters(), grad);
        }
        const Evaluation tr = evaluate_classifier(model, train);
        result.metrics.add({std::int64_t{epoch}, std::string("train"), tr.loss, tr.accuracy});
        if (test && test->size() > 0) {
            const Evaluation te = evaluate_classifier(model, *test);
            result.metrics.add({std::int64_t{epoch}, std::string("test"), te.loss, te.accuracy});
        }
        if (!std::isfinite(tr.loss)) throw TrainingDivergedError("non-finite training loss after epoch " + std::to_string(epoch));
    }
    return result;
}

std::int64_t classical_analogue_parameter_count(const ClassifierConfig& config) {
    config.validate();
    const std::int64_t k1 = config.conv1.window, q1 = config.conv1.qubits;
    std::int64_t count = k1 * k1 * q1 + q1;
    std::int64_t h = conv_out(config.image_height, config.conv1.window, config.conv1.stride);
    std::int64_t w = conv_out(config.image_width, config.conv1.window, config.conv1.stride);
    std::int64_t ch = q1;
    if (config.use_pool) {
        h /= 2;
        w /= 2;
    }
    if (config.use_conv2) {
        const std::int64_t k2 = config.conv2.window, q2 = config.conv2.qubits;
        count += k2 * k2 * ch * q2 + q2;
        h = conv_out(static_cast<int>(h), config.conv2.window, config.conv2.stride);
        w = conv_out(static_cast<int>(w), config.conv2.window, config.conv2.stride);
        ch = q2;
    }
    count += h * w * ch * config.num_classes + config.num_classes;
    return count;
}

}  // namespace qvml
