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


#include "qvml/qgan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qvml/parallel.hpp"

namespace qvml {

namespace {

Circuit build_sub_generator(const SubGeneratorShape& s, std::vector<int>& weight_symbols) {
    const int n = s.num_qubits();
    Circuit c(n);
    for (int q = 0; q < n; ++q) c.rotation(GateKind::ry, q, c.symbol("z" + std::to_string(q)));
    for (int l = 0; l < s.depth; ++l) {
        for (int q = 0; q < n; ++q) {
            const SymbolRef sym = c.symbol("t" + std::to_string(l) + "." + std::to_string(q));
            weight_symbols.push_back(sym.index);
            c.rotation(GateKind::ry, q, sym);
        }
        for (int q = 0; q + 1 < n; ++q) c.gate(GateKind::cz, q, q + 1);
    }
    return c;
}

}  // namespace

SubGenerator::SubGenerator(SubGeneratorShape shape) : shape_(shape), circuit_(1) {
    if (shape.data_qubits < 1 || shape.ancilla_qubits < 0 || shape.depth < 1) {
        throw std::invalid_argument("sub-generator needs >= 1 data qubit, >= 0 ancillas and depth >= 1");
    }
    if (shape.num_qubits() > kMaxDensityQubits) throw std::invalid_argument("sub-generator exceeds simulator capacity");
    circuit_ = build_sub_generator(shape, weight_symbols_);
}

std::vector<double> SubGenerator::symbol_values(std::span<const double> z, std::span<const double> weights) const {
    const auto n = static_cast<std::size_t>(shape_.num_qubits());
    if (z.size() != n) throw std::invalid_argument("latent length must equal the sub-generator qubit count");
    if (weights.size() != static_cast<std::size_t>(shape_.num_parameters())) {
        throw std::invalid_argument("sub-generator weight count mismatch");
    }
    for (double v : z) {
        if (!(v >= -1e-12 && v <= std::numbers::pi / 2 + 1e-12)) throw std::invalid_argument("latent entries must lie in [0, pi/2]");
    }
    std::vector<double> values(z.begin(), z.end());
    values.insert(values.end(), weights.begin(), weights.end());
    return values;
}

Eigen::VectorXd SubGenerator::outcome_probs(std::span<const double> z, std::span<const double> weights,
                                            const std::optional<NoiseModel>& noise) const {
    const std::vector<double> values = symbol_values(z, weights);
    return outcome_probabilities(circuit_, values, noise);
}

Eigen::VectorXd SubGenerator::generate(std::span<const double> z, std::span<const double> weights,
                                       const std::optional<NoiseModel>& noise) const {
    const Eigen::VectorXd probs = outcome_probs(z, weights, noise);
    std::vector<int> ancilla, outcome;
    for (int a = 0; a < shape_.ancilla_qubits; ++a) {
        ancilla.push_back(shape_.data_qubits + a);
        outcome.push_back(0);
    }
    const Eigen::VectorXd cond = postselect(probs, ancilla, outcome).conditional;
    return cond / cond.maxCoeff();
}

Eigen::MatrixXd SubGenerator::pixel_jacobian(std::span<const double> z, std::span<const double> weights,
                                             const std::optional<NoiseModel>& noise, Eigen::VectorXd* pixels) const {
    const std::vector<double> values = symbol_values(z, weights);
    const Eigen::VectorXd pix = generate(z, weights, noise);
    const Eigen::VectorXd probs = outcome_probabilities(circuit_, values, noise);
    const Eigen::MatrixXd dprobs = shift_rule_probability_jacobian(circuit_, values, noise, weight_symbols_);
    // Pixel j is p_j / p_m over the ancilla-zero block; the post-selection
    // probability cancels and m is held fixed.
    const int ps = shape_.patch_size();
    Eigen::Index m = 0;
    pix.maxCoeff(&m);
    const double pm = probs[m];
    Eigen::MatrixXd jac(ps, shape_.num_parameters());
    for (int j = 0; j < ps; ++j) jac.row(j) = (dprobs.row(j) - pix[j] * dprobs.row(m)) / pm;
    if (pixels) *pixels = pix;
    return jac;
}

Eigen::VectorXd generate_patch(const SubGenerator& sg, std::span<const double> z, std::span<const double> weights,
                               const std::optional<NoiseModel>& noise) {
    return sg.generate(z, weights, noise);
}

PatchGenerator::PatchGenerator(SubGeneratorShape shape, int sub_generators, int image_height, int image_width)
    : sub_(shape), count_(sub_generators), height_(image_height), width_(image_width) {
    if (sub_generators < 1 || image_height < 1 || image_width < 1) {
        throw std::invalid_argument("generator needs >= 1 sub-generator and a positive image size");
    }
    if (static_cast<std::int64_t>(sub_generators) * shape.patch_size() < static_cast<std::int64_t>(image_height) * image_width) {
        throw std::invalid_argument("sub-generator patches do not cover the image");
    }
}

std::span<const double> PatchGenerator::sub_weights(std::span<const double> weights, int s) const {
    if (weights.size() != static_cast<std::size_t>(num_parameters())) throw std::invalid_argument("generator weight count mismatch");
    const auto per = static_cast<std::size_t>(sub_.shape().num_parameters());
    return weights.subspan(static_cast<std::size_t>(s) * per, per);
}

Eigen::VectorXd PatchGenerator::generate_flat(std::span<const double> z, std::span<const double> weights,
                                              const std::optional<NoiseModel>& noise) const {
    const int ps = sub_.shape().patch_size();
    Eigen::VectorXd flat(num_pixels());
    for (int s = 0; s < count_; ++s) {
        const int begin = s * ps;
        if (begin >= num_pixels()) break;
        const Eigen::VectorXd patch = sub_.generate(z, sub_weights(weights, s), noise);
        const int len = std::min(ps, num_pixels() - begin);
        flat.segment(begin, len) = patch.head(len);
    }
    return flat;
}

Image PatchGenerator::generate_image(std::span<const double> z, std::span<const double> weights,
                                     const std::optional<NoiseModel>& noise) const {
    const Eigen::VectorXd flat = generate_flat(z, weights, noise);
    Image img(height_, width_);
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) img(r, c) = flat[r * width_ + c];
    }
    return img;
}

Eigen::MatrixXd PatchGenerator::image_jacobian(std::span<const double> z, std::span<const double> weights,
                                               const std::optional<NoiseModel>& noise, Eigen::VectorXd* image,
                                               int threads) const {
    const int ps = sub_.shape().patch_size();
    const int per = sub_.shape().num_parameters();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(num_pixels(), num_parameters());
    Eigen::VectorXd flat(num_pixels());
    parallel_for(static_cast<std::size_t>(count_), threads, [&](std::size_t si) {
        const int s = static_cast<int>(si);
        const int begin = s * ps;
        if (begin >= num_pixels()) return;
        Eigen::VectorXd patch;
        const Eigen::MatrixXd pj = sub_.pixel_jacobian(z, sub_weights(weights, s), noise, &patch);
        const int len = std::min(ps, num_pixels() - begin);
        flat.segment(begin, len) = patch.head(len);
        jac.block(begin, s * per, len, per) = pj.topRows(len);
    });
    if (image) *image = flat;
    return jac;
}

Image generate_image(const PatchGenerator& g, std::span<const double> z, std::span<const double> weights,
                     const std::optional<NoiseModel>& noise) {
    return g.generate_image(z, weights, noise);
}

Discriminator::Discriminator(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2 || sizes_.back() != 1) throw std::invalid_argument("discriminator needs >= 2 layers ending in 1 unit");
    for (int s : sizes_) {
        if (s < 1) throw std::invalid_argument("discriminator layer sizes must be positive");
    }
    Eigen::Index off = 0;
    for (std::size_t j = 0; j + 1 < sizes_.size(); ++j) {
        offsets_.push_back(off);
        off += Eigen::Index{sizes_[j + 1]} * sizes_[j] + sizes_[j + 1];
    }
    offsets_.push_back(off);
    params_.values = Eigen::VectorXd::Zero(off);
    for (std::size_t j = 0; j + 1 < sizes_.size(); ++j) {
        const std::string p = "disc." + std::to_string(j);
        for (int c = 0; c < sizes_[j]; ++c) {
            for (int r = 0; r < sizes_[j + 1]; ++r) params_.names.push_back(p + ".w." + std::to_string(r) + "." + std::to_string(c));
        }
        for (int r = 0; r < sizes_[j + 1]; ++r) params_.names.push_back(p + ".b." + std::to_string(r));
    }
}

Discriminator Discriminator::standard(int input) { return Discriminator({input, 64, 32, 1}); }

void Discriminator::initialize(std::mt19937_64& rng) {
    for (std::size_t j = 0; j + 1 < sizes_.size(); ++j) {
        const int in = sizes_[j], out = sizes_[j + 1];
        const double bound = std::sqrt(6.0 / (in + out));
        std::uniform_real_distribution<double> u(-bound, bound);
        const Eigen::Index nw = Eigen::Index{in} * out;
        for (Eigen::Index i = 0; i < nw; ++i) params_.values[offsets_[j] + i] = u(rng);
        params_.values.segment(offsets_[j] + nw, out).setZero();
    }
}

namespace {

struct LayerView {
    Eigen::Map<const Eigen::MatrixXd> w;
    Eigen::Map<const Eigen::VectorXd> b;
};

LayerView layer(const Eigen::VectorXd& p, Eigen::Index off, int in, int out) {
    return {Eigen::Map<const Eigen::MatrixXd>(p.data() + off, out, in),
            Eigen::Map<const Eigen::VectorXd>(p.data() + off + Eigen::Index{in} * out, out)};
}

}  // namespace

double Discriminator::logit(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != input_size()) throw std::invalid_argument("discriminator input length mismatch");
    Eigen::VectorXd a = x;
    const std::size_t layers = sizes_.size() - 1;
    for (std::size_t j = 0; j < layers; ++j) {
        const LayerView L = layer(params_.values, offsets_[j], sizes_[j], sizes_[j + 1]);
        Eigen::VectorXd z = L.w * a + L.b;
        a = j + 1 < layers ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
    }
    return a[0];
}

double Discriminator::forward(const Eigen::Ref<const Eigen::VectorXd>& x) const { return sigmoid(logit(x)); }

Eigen::VectorXd Discriminator::backward(const Eigen::Ref<const Eigen::VectorXd>& x, double dlogit,
                                        Eigen::Ref<Eigen::VectorXd> grad) const {
    if (x.size() != input_size()) throw std::invalid_argument("discriminator input length mismatch");
    if (grad.size() != params_.size()) throw std::invalid_argument("discriminator gradient buffer size mismatch");
    const std::size_t layers = sizes_.size() - 1;
    std::vector<Eigen::VectorXd> acts{x};
    std::vector<Eigen::VectorXd> pre;
    for (std::size_t j = 0; j < layers; ++j) {
        const LayerView L = layer(params_.values, offsets_[j], sizes_[j], sizes_[j + 1]);
        pre.push_back(L.w * acts.back() + L.b);
        acts.push_back(pre.back().cwiseMax(0.0));
    }
    Eigen::VectorXd delta = Eigen::VectorXd::Constant(1, dlogit);
    for (std::size_t j = layers; j-- > 0;) {
        const int in = sizes_[j], out = sizes_[j + 1];
        const LayerView L = layer(params_.values, offsets_[j], in, out);
        Eigen::Map<Eigen::MatrixXd>(grad.data() + offsets_[j], out, in) += delta * acts[j].transpose();
        grad.segment(offsets_[j] + Eigen::Index{in} * out, out) += delta;
        Eigen::VectorXd prev = L.w.transpose() * delta;
        if (j > 0) prev = prev.cwiseProduct((pre[j - 1].array() > 0.0).cast<double>().matrix());
        delta = std::move(prev);
    }
    return delta;
}

double discriminator_forward(const Discriminator& d, const Eigen::Ref<const Eigen::VectorXd>& image) {
    return d.forward(image);
}

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double discriminator_loss(const Discriminator& d, std::span<const Eigen::VectorXd> real,
                          std::span<const Eigen::VectorXd> fake, Eigen::VectorXd* grad) {
    if (real.empty() || fake.empty()) throw std::invalid_argument("discriminator loss needs real and fake samples");
    double loss = 0.0;
    const double wr = 1.0 / static_cast<double>(real.size());
    const double wf = 1.0 / static_cast<double>(fake.size());
    for (const auto& x : real) {
        const double l = d.logit(x);
        loss += wr * softplus(-l);
        if (grad) d.backward(x, -wr * sigmoid(-l), *grad);
    }
    for (const auto& x : fake) {
        const double l = d.logit(x);
        loss += wf * softplus(l);
        if (grad) d.backward(x, wf * sigmoid(l), *grad);
    }
    return loss;
}

namespace {

/// Generator loss given precomputed images and their weight Jacobians.
double generator_loss_from(const Discriminator& d, std::span<const Eigen::VectorXd> images,
                           std::span<const Eigen::MatrixXd> jacobians, Eigen::VectorXd* grad) {
    double loss = 0.0;
    const double w = 1.0 / static_cast<double>(images.size());
    Eigen::VectorXd scratch = Eigen::VectorXd::Zero(d.parameters().size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        const double l = d.logit(images[i]);
        loss += w * softplus(-l);
        if (grad) {
            const Eigen::VectorXd dx = d.backward(images[i], -w * sigmoid(-l), scratch);
            *grad += jacobians[i].transpose() * dx;
        }
    }
    return loss;
}

}  // namespace

double generator_loss(const PatchGenerator& g, std::span<const double> weights, const Discriminator& d,
                      std::span<const Eigen::VectorXd> latents, const std::optional<NoiseModel>& noise,
                      Eigen::VectorXd* grad, int threads) {
    if (latents.empty()) throw std::invalid_argument("generator loss needs at least one latent vector");
    std::vector<Eigen::VectorXd> images(latents.size());
    std::vector<Eigen::MatrixXd> jacs(latents.size());
    for (std::size_t i = 0; i < latents.size(); ++i) {
        const std::span<const double> z(latents[i].data(), static_cast<std::size_t>(latents[i].size()));
        if (grad) {
            jacs[i] = g.image_jacobian(z, weights, noise, &images[i], threads);
        } else {
            images[i] = g.generate_flat(z, weights, noise);
        }
    }
    return generator_loss_from(d, images, jacs, grad);
}

void GanConfig::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (image_height < 1 || image_width < 1) fail("image dimensions must be positive");
    if (sub_generators < 1) fail("sub_generators must be >= 1");
    if (shape.data_qubits < 1 || shape.ancilla_qubits < 0 || shape.depth < 1) fail("invalid sub-generator shape");
    if (shape.num_qubits() > kMaxDensityQubits) fail("sub-generator exceeds simulator capacity");
    if (static_cast<std::int64_t>(sub_generators) * shape.patch_size() < static_cast<std::int64_t>(image_height) * image_width) {
        fail("sub-generator patches do not cover the image");
    }
    for (int h : disc_hidden) {
        if (h < 1) fail("discriminator hidden sizes must be positive");
    }
    if (gen_learning_rate <= 0 || disc_learning_rate <= 0) fail("learning rates must be > 0");
    if (iterations < 0) fail("iterations must be >= 0");
    if (batch_size < 1) fail("batch_size must be >= 1");
    if (!(init_range >= 0)) fail("init_range must be >= 0");
    if (sample_every < 0) fail("sample_every must be >= 0");
    if (threads < 1) fail("threads must be >= 1");
}

Eigen::VectorXd sample_latent(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi / 2);
    Eigen::VectorXd z(dim);
    for (int i = 0; i < dim; ++i) z[i] = u(rng);
    return z;
}

GanState make_gan_state(const GanConfig& config, std::mt19937_64& rng) {
    config.validate();
    std::vector<int> sizes{config.image_height * config.image_width};
    sizes.insert(sizes.end(), config.disc_hidden.begin(), config.disc_hidden.end());
    sizes.push_back(1);
    GanState st{PatchGenerator(config.shape, config.sub_generators, config.image_height, config.image_width),
                ParamVector(),
                Discriminator(sizes),
                OptimizerState(config.optimizer, config.gen_learning_rate),
                OptimizerState(config.optimizer, config.disc_learning_rate)};
    std::uniform_real_distribution<double> u(0.0, config.init_range);
    st.gen_params.values.resize(st.generator.num_parameters());
    for (Eigen::Index i = 0; i < st.gen_params.size(); ++i) st.gen_params.values[i] = u(rng);
    const auto& sub = st.generator.sub_generator().shape();
    for (int s = 0; s < config.sub_generators; ++s) {
        for (int l = 0; l < sub.depth; ++l) {
            for (int q = 0; q < sub.num_qubits(); ++q) {
                st.gen_params.names.push_back("gen." + std::to_string(s) + ".t." + std::to_string(l) + "." + std::to_string(q));
            }
        }
    }
    st.discriminator.initialize(rng);
    return st;
}

GanStepResult gan_train_step(GanState& state, std::span<const Eigen::VectorXd> real_batch, std::mt19937_64& rng,
                             const GanConfig& config) {
    if (real_batch.empty()) throw std::invalid_argument("GAN step needs a non-empty real batch");
    const std::size_t b = real_batch.size();
    std::vector<Eigen::VectorXd> latents(b);
    for (auto& z : latents) z = sample_latent(state.generator.latent_dim(), rng);
    std::vector<Eigen::VectorXd> fakes(b);
    std::vector<Eigen::MatrixXd> jacs(b);
    const std::span<const double> weights = state.gen_params.span();
    parallel_for(b, config.threads, [&](std::size_t i) {
        const std::span<const double> z(latents[i].data(), static_cast<std::size_t>(latents[i].size()));
        jacs[i] = state.generator.image_jacobian(z, weights, config.noise, &fakes[i]);
    });

    GanStepResult res;
    for (const auto& x : fakes) res.d_fake_mean += state.discriminator.forward(x);
    res.d_fake_mean /= static_cast<double>(b);

    Eigen::VectorXd dgrad = Eigen::VectorXd::Zero(state.discriminator.parameters().size());
    res.disc_loss = discriminator_loss(state.discriminator, real_batch, fakes, &dgrad);
    if (!std::isfinite(res.disc_loss) || !dgrad.allFinite()) throw GanDivergedError("non-finite discriminator loss");
    optimizer_step(state.disc_opt, state.discriminator.parameters(), dgrad);

    Eigen::VectorXd ggrad = Eigen::VectorXd::Zero(state.gen_params.size());
    res.gen_loss = generator_loss_from(state.discriminator, fakes, jacs, &ggrad);
    if (!std::isfinite(res.gen_loss) || !ggrad.allFinite()) throw GanDivergedError("non-finite generator loss");
    optimizer_step(state.gen_opt, state.gen_params, ggrad);
    return res;
}

namespace {

Eigen::VectorXd flatten_row_major(const Image& img) {
    Eigen::VectorXd v(img.size());
    for (Eigen::Index r = 0; r < img.rows(); ++r) {
        for (Eigen::Index c = 0; c < img.cols(); ++c) v[r * img.cols() + c] = img(r, c);
    }
    return v;
}

}  // namespace

std::vector<GanClassResult> train_gan(const ImageSet& data, const GanConfig& config) {
    config.validate();
    if (data.size() == 0) throw std::invalid_argument("GAN training set is empty");
    if (data.height != config.image_height || data.width != config.image_width) {
        throw std::invalid_argument("dataset image size does not match the GAN configuration");
    }
    std::vector<int> classes{-1};
    if (data.labels) {
        const std::set<int> uniq(data.labels->begin(), data.labels->end());
        classes.assign(uniq.begin(), uniq.end());
    }
    std::vector<GanClassResult> results;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        std::vector<Eigen::VectorXd> pool;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (classes[k] >= 0 && (*data.labels)[i] != classes[k]) continue;
            pool.push_back(flatten_row_major(data.images[i]));
        }
        if (pool.size() < 32) {
            throw std::invalid_argument("GAN training needs at least 32 images per class (class " +
                                        std::to_string(classes[k]) + " has " + std::to_string(pool.size()) + ")");
        }
        std::mt19937_64 rng(config.seed + k);
        GanClassResult res{classes[k], make_gan_state(config, rng),
                           {{"iteration", "disc_loss", "gen_loss", "d_fake_mean"}, {}}, {}};
        const Eigen::VectorXd sample_z = sample_latent(res.state.generator.latent_dim(), rng);
        const std::span<const double> sz(sample_z.data(), static_cast<std::size_t>(sample_z.size()));
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        std::vector<Eigen::VectorXd> batch(static_cast<std::size_t>(config.batch_size));
        for (int it = 1; it <= config.iterations; ++it) {
            for (auto& x : batch) x = pool[pick(rng)];
            const GanStepResult step = gan_train_step(res.state, batch, rng, config);
            res.metrics.add({std::int64_t{it}, step.disc_loss, step.gen_loss, step.d_fake_mean});
            if (config.sample_every > 0 && (it % config.sample_every == 0 || it == config.iterations)) {
                res.samples.push_back({it, res.state.generator.generate_image(sz, res.state.gen_params.span(), config.noise)});
            }
        }
        results.push_back(std::move(res));
    }
    return results;
}

Eigen::VectorXd mean_image(const ImageSet& set) {
    if (set.size() == 0) throw std::invalid_argument("mean of an empty image set");
    Eigen::VectorXd m = Eigen::VectorXd::Zero(Eigen::Index{set.height} * set.width);
    for (const auto& img : set.images) m += flatten_row_major(img);
    return m / static_cast<double>(set.size());
}

double pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("pearson needs equal lengths >= 2");
    const Eigen::ArrayXd da = a.array() - a.mean();
    const Eigen::ArrayXd db = b.array() - b.mean();
    const double denom = std::sqrt((da * da).sum() * (db * db).sum());
    return denom > 0 ? (da * db).sum() / denom : 0.0;
}

}  // namespace qvml
