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


#include "qvml/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "qvml/checkpoint.hpp"
#include "qvml/circuit.hpp"
#include "qvml/data_io.hpp"
#include "qvml/gradients.hpp"
#include "qvml/random_circuit.hpp"

namespace qvml::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NumericFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoFailure("read failed for " + path.string());
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    try {
        write_text_file(path, text);
    } catch (const std::runtime_error& e) {
        throw IoFailure(e.what());
    }
}

/// Output directory built under `<out>.tmp` and renamed into place only on
/// success; an abandoned staging directory is removed.
class StagedDirectory {
  public:
    explicit StagedDirectory(fs::path final_path) : final_(std::move(final_path)) {
        if (final_.empty()) throw ConfigError("output directory is not set");
        staging_ = final_;
        staging_ += ".tmp";
        std::error_code ec;
        fs::remove_all(staging_, ec);
        fs::create_directories(staging_, ec);
        if (ec) throw IoFailure("cannot create " + staging_.string() + ": " + ec.message());
    }
    StagedDirectory(const StagedDirectory&) = delete;
    StagedDirectory& operator=(const StagedDirectory&) = delete;
    ~StagedDirectory() {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(staging_, ec);
        }
    }

    const fs::path& path() const { return staging_; }

    void commit() {
        std::error_code ec;
        fs::remove_all(final_, ec);
        if (ec) throw IoFailure("cannot replace " + final_.string() + ": " + ec.message());
        fs::rename(staging_, final_, ec);
        if (ec) throw IoFailure("cannot move output into " + final_.string() + ": " + ec.message());
        committed_ = true;
    }

  private:
    fs::path final_;
    fs::path staging_;
    bool committed_ = false;
};

void write_file_atomically(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    write_text(tmp, text);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoFailure("cannot write " + path.string());
    }
}

std::vector<KeySpec> common_keys() {
    return {{"seed", ValueType::integer, "1"},
            {"out", ValueType::text, "run"},
            {"threads", ValueType::integer, "1"}};
}

std::vector<KeySpec> noise_keys() {
    return {{"noise.kind", ValueType::text, "none"},
            {"noise.parameter", ValueType::real, "0.1"},
            {"noise.placement", ValueType::text, "end"}};
}

std::vector<KeySpec> data_keys() {
    return {{"data.images", ValueType::text, ""},
            {"data.labels", ValueType::text, ""},
            {"data.crop", ValueType::integer, "0"},
            {"data.downsample", ValueType::integer, "1"},
            {"data.synthetic", ValueType::boolean, "false"},
            {"data.synthetic_count", ValueType::integer, "256"}};
}

template <typename... Parts>
std::vector<KeySpec> concat(Parts&&... parts) {
    std::vector<KeySpec> out;
    (out.insert(out.end(), parts.begin(), parts.end()), ...);
    return out;
}

}  // namespace

const ConfigSchema& classifier_schema() {
    static const ConfigSchema schema(concat(
        common_keys(), data_keys(),
        std::vector<KeySpec>{{"data.test_images", ValueType::text, ""},
                             {"data.test_labels", ValueType::text, ""},
                             {"data.classes", ValueType::int_list, "0,1"},
                             {"data.train_per_class", ValueType::integer, "100"},
                             {"data.test_per_class", ValueType::integer, "50"},
                             {"model.image_height", ValueType::integer, "8"},
                             {"model.image_width", ValueType::integer, "8"},
                             {"model.qubits", ValueType::integer, ""},
                             {"model.layers", ValueType::integer, ""},
                             {"model.conv1_window", ValueType::integer, "2"},
                             {"model.conv1_stride", ValueType::integer, "2"},
                             {"model.conv1_qubits", ValueType::integer, "5"},
                             {"model.conv1_layers", ValueType::integer, "5"},
                             {"model.pool", ValueType::boolean, "true"},
                             {"model.conv2", ValueType::boolean, "true"},
                             {"model.conv2_window", ValueType::integer, "1"},
                             {"model.conv2_stride", ValueType::integer, "1"},
                             {"model.conv2_qubits", ValueType::integer, "5"},
                             {"model.conv2_layers", ValueType::integer, "5"},
                             {"train.learning_rate", ValueType::real, "0.001"},
                             {"train.optimizer", ValueType::text, "adaptive"},
                             {"train.epochs", ValueType::integer, "15"},
                             {"train.batch_size", ValueType::integer, "1"},
                             {"train.window_sample_rate", ValueType::real, "1"}},
        noise_keys()));
    return schema;
}

const ConfigSchema& gan_schema() {
    static const ConfigSchema schema(concat(
        common_keys(), data_keys(),
        std::vector<KeySpec>{{"data.classes", ValueType::int_list, ""},
                             {"data.per_class", ValueType::integer, "0"},
                             {"generator.image_height", ValueType::integer, "8"},
                             {"generator.image_width", ValueType::integer, "8"},
                             {"generator.sub_generators", ValueType::integer, "4"},
                             {"generator.data_qubits", ValueType::integer, "4"},
                             {"generator.ancilla_qubits", ValueType::integer, "1"},
                             {"generator.depth", ValueType::integer, "6"},
                             {"generator.learning_rate", ValueType::real, "0.0002"},
                             {"generator.init_range", ValueType::real, "1"},
                             {"discriminator.hidden", ValueType::int_list, "64,32"},
                             {"discriminator.learning_rate", ValueType::real, "0.0002"},
                             {"train.optimizer", ValueType::text, "adaptive"},
                             {"train.iterations", ValueType::integer, "300"},
                             {"train.batch_size", ValueType::integer, "16"},
                             {"train.sample_every", ValueType::integer, "50"}},
        noise_keys()));
    return schema;
}

std::optional<NoiseModel> noise_from_config(const Config& cfg) {
    const std::string kind = cfg.text("noise.kind");
    if (kind == "none") return std::nullopt;
    const double p = cfg.real("noise.parameter");
    try {
        const NoisePlacement placement = parse_placement(cfg.text("noise.placement"));
        if (kind == "flip") return NoiseModel::flip(p, placement);
        return NoiseModel::single(parse_channel_kind(kind), p, placement);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("noise: ") + e.what());
    }
}

namespace {

int as_int(const Config& cfg, std::string_view key) {
    const std::int64_t v = cfg.integer(key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError("'" + std::string(key) + "' is out of range");
    }
    return static_cast<int>(v);
}

OptimizerKind optimizer_from(const Config& cfg) {
    try {
        return parse_optimizer_kind(cfg.text("train.optimizer"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

template <typename Fn>
auto validated(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

ClassifierConfig classifier_config(const Config& cfg) {
    ClassifierConfig c;
    c.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
    c.threads = as_int(cfg, "threads");
    c.image_height = as_int(cfg, "model.image_height");
    c.image_width = as_int(cfg, "model.image_width");
    c.num_classes = static_cast<int>(cfg.int_list("data.classes").size());
    c.conv1 = {as_int(cfg, "model.conv1_window"), as_int(cfg, "model.conv1_stride"), as_int(cfg, "model.conv1_qubits"),
               as_int(cfg, "model.conv1_layers")};
    c.conv2 = {as_int(cfg, "model.conv2_window"), as_int(cfg, "model.conv2_stride"), as_int(cfg, "model.conv2_qubits"),
               as_int(cfg, "model.conv2_layers")};
    // model.qubits / model.layers set both convolutions unless a
    // per-convolution key is given explicitly.
    auto shared = [&](int& field, const char* own, const char* all) {
        if (!cfg.is_set(own) && cfg.has(all)) field = as_int(cfg, all);
    };
    shared(c.conv1.qubits, "model.conv1_qubits", "model.qubits");
    shared(c.conv2.qubits, "model.conv2_qubits", "model.qubits");
    shared(c.conv1.layers, "model.conv1_layers", "model.layers");
    shared(c.conv2.layers, "model.conv2_layers", "model.layers");
    c.use_pool = cfg.boolean("model.pool");
    c.use_conv2 = cfg.boolean("model.conv2");
    c.learning_rate = cfg.real("train.learning_rate");
    c.optimizer = optimizer_from(cfg);
    c.epochs = as_int(cfg, "train.epochs");
    c.batch_size = as_int(cfg, "train.batch_size");
    c.window_sample_rate = cfg.real("train.window_sample_rate");
    c.noise = noise_from_config(cfg);
    validated([&] {
        c.validate();
        return 0;
    });
    return c;
}

GanConfig gan_config(const Config& cfg) {
    GanConfig g;
    g.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
    g.threads = as_int(cfg, "threads");
    g.image_height = as_int(cfg, "generator.image_height");
    g.image_width = as_int(cfg, "generator.image_width");
    g.sub_generators = as_int(cfg, "generator.sub_generators");
    g.shape = {as_int(cfg, "generator.data_qubits"), as_int(cfg, "generator.ancilla_qubits"), as_int(cfg, "generator.depth")};
    g.gen_learning_rate = cfg.real("generator.learning_rate");
    g.init_range = cfg.real("generator.init_range");
    g.disc_hidden = cfg.int_list("discriminator.hidden");
    g.disc_learning_rate = cfg.real("discriminator.learning_rate");
    g.optimizer = optimizer_from(cfg);
    g.iterations = as_int(cfg, "train.iterations");
    g.batch_size = as_int(cfg, "train.batch_size");
    g.sample_every = as_int(cfg, "train.sample_every");
    g.noise = noise_from_config(cfg);
    validated([&] {
        g.validate();
        return 0;
    });
    return g;
}

GradCheckReport grad_check(int circuits, std::uint64_t seed, double h) {
    GradCheckReport rep;
    rep.circuits = circuits;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_observable = [&](int n) {
        PauliString p;
        for (int q = 0; q < n; ++q) p.set(q, static_cast<Pauli>(std::uniform_int_distribution<int>(1, 3)(rng)));
        return Observable(p);
    };
    auto random_theta = [&](const Circuit& c) {
        ParamVector t(Eigen::VectorXd(static_cast<Eigen::Index>(c.num_symbols())));
        for (Eigen::Index i = 0; i < t.size(); ++i) t.values[i] = angle(rng);
        return t;
    };
    auto deviation = [&](const Circuit& c, const ParamVector& t, const Observable& o, const std::optional<NoiseModel>& nm) {
        const std::vector<double> a = shift_rule_gradient(c, t, o, nm);
        const std::vector<double> b = finite_diff_gradient(c, t, o, nm, h);
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    };
    for (int i = 0; i < circuits; ++i) {
        const Circuit ideal = random_circuit(rng, {3, 24, 12, false, false});
        const ParamVector ti = random_theta(ideal);
        rep.ideal_max_deviation = std::max(rep.ideal_max_deviation, deviation(ideal, ti, random_observable(ideal.num_qubits()), std::nullopt));

        const Circuit noisy = random_circuit(rng, {3, 24, 12, true, true});
        const ParamVector tn = random_theta(noisy);
        const NoiseModel nm({{ChannelKind::depolarizing, 0.2 * unit(rng), NoisePlacement::end_of_circuit, {}},
                              {ChannelKind::amplitude_damping, 0.2 * unit(rng), NoisePlacement::end_of_circuit, {}}});
        rep.noisy_max_deviation = std::max(rep.noisy_max_deviation, deviation(noisy, tn, random_observable(noisy.num_qubits()), nm));
    }
    return rep;
}

namespace {

// ---- data loading -------------------------------------------------------

ImageSet load_images(const Config& cfg, const std::string& images_key, const std::string& labels_key) {
    const std::string images = cfg.text(images_key);
    if (images.empty()) throw ConfigError("'" + images_key + "' is not set");
    std::optional<fs::path> labels;
    if (cfg.has(labels_key)) labels = cfg.text(labels_key);
    ImageSet set = load_idx(images, labels);
    const int crop = as_int(cfg, "data.crop");
    const int factor = as_int(cfg, "data.downsample");
    return validated([&] {
        if (crop > 0) set = center_crop(set, crop, crop);
        if (factor != 1) set = downsample(set, factor);
        return set;
    });
}

ImageSet synthetic_images(const Config& cfg, int side) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.integer("seed")) ^ 0x5eedULL);
    const std::int64_t count = cfg.integer("data.synthetic_count");
    if (count < 1) throw ConfigError("data.synthetic_count must be >= 1");
    return validated([&] { return synth_bars_stripes(side, static_cast<std::size_t>(count), rng); });
}

/// Splits the first `train_n` and the following `test_n` images of each
/// class into two sets; labels become positions in `classes`.
std::pair<ImageSet, ImageSet> split_per_class(const ImageSet& set, std::span<const int> classes, std::size_t train_n,
                                              std::size_t test_n) {
    if (!set.labels) throw ConfigError("classification data needs labels");
    ImageSet train{set.height, set.width, {}, std::vector<int>{}};
    ImageSet test{set.height, set.width, {}, std::vector<int>{}};
    std::vector<std::size_t> seen(classes.size(), 0);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto it = std::find(classes.begin(), classes.end(), (*set.labels)[i]);
        if (it == classes.end()) continue;
        const auto k = static_cast<std::size_t>(it - classes.begin());
        const std::size_t n = seen[k]++;
        if (n < train_n) {
            train.images.push_back(set.images[i]);
            train.labels->push_back(static_cast<int>(k));
        } else if (n < train_n + test_n) {
            test.images.push_back(set.images[i]);
            test.labels->push_back(static_cast<int>(k));
        }
    }
    return {std::move(train), std::move(test)};
}

Config load_config(std::span<const std::string> rest, const ConfigSchema& schema) {
    std::size_t first_flag = 0;
    Config cfg(schema);
    if (!rest.empty() && rest[0].rfind("--", 0) != 0) {
        cfg = Config::parse(read_text(rest[0]), schema);
        first_flag = 1;
    }
    cfg.apply_overrides(rest.subspan(first_flag));
    return cfg;
}

// ---- subcommands ----------------------------------------------------------

struct SimOptions {
    std::string file;
    bool noisy = false;
    bool ignore_noise = false;
    std::vector<std::string> params;
    std::vector<std::string> expects;
    std::vector<std::string> noise;
    double threshold = 1e-12;
};

NoiseEntry parse_noise_flag(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("--noise expects kind:p[:end|layer], got '" + text + "'");
    try {
        NoiseEntry e{parse_channel_kind(parts[0]), std::stod(parts[1]), NoisePlacement::end_of_circuit, {}};
        if (parts.size() == 3) e.placement = parse_placement(parts[2]);
        return e;
    } catch (const std::exception& ex) {
        throw UsageError("bad --noise '" + text + "': " + ex.what());
    }
}

int cmd_sim(const SimOptions& o, std::ostream& out) {
    const Circuit c = parse_circuit(read_text(o.file));
    std::vector<double> values(c.num_symbols(), std::nan(""));
    for (const auto& p : o.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects name=value, got '" + p + "'");
        const auto idx = c.find_symbol(p.substr(0, eq));
        if (!idx) throw UsageError("circuit has no parameter '" + p.substr(0, eq) + "'");
        try {
            std::size_t used = 0;
            values[static_cast<std::size_t>(*idx)] = std::stod(p.substr(eq + 1), &used);
            if (used != p.size() - eq - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw UsageError("bad value in --param '" + p + "'");
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i])) throw UsageError("no value for parameter '" + c.symbols()[i] + "' (use --param)");
    }
    std::vector<Observable> observables;
    for (const auto& e : o.expects) {
        try {
            observables.push_back(Observable::parse(e));
        } catch (const std::invalid_argument& ex) {
            throw UsageError(ex.what());
        }
        if (observables.back().max_qubit() >= c.num_qubits()) throw UsageError("observable '" + e + "' acts outside the circuit");
    }
    std::vector<NoiseEntry> entries;
    for (const auto& n : o.noise) entries.push_back(parse_noise_flag(n));
    const bool noisy = o.noisy || !entries.empty();
    const BoundCircuit bc(c, values);

    Eigen::VectorXd probs;
    std::vector<double> expvals;
    if (noisy) {
        const DensityMatrix rho = run_noisy(bc, NoiseModel(entries));
        probs = rho.probabilities();
        for (const auto& ob : observables) expvals.push_back(expectation(rho, ob));
    } else {
        StateVector psi = StateVector::zero(1);
        try {
            psi = run_ideal(bc, {o.ignore_noise});
        } catch (const NoiseInIdealRunError& e) {
            throw UsageError(std::string(e.what()) + " (use --noisy or --ignore-noise)");
        }
        probs = psi.probabilities();
        for (const auto& ob : observables) expvals.push_back(expectation(psi, ob));
    }
    out << "backend " << (noisy ? "noisy" : "ideal") << "\n";
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        if (probs[i] > o.threshold) out << basis_label(static_cast<std::size_t>(i), c.num_qubits()) << ' ' << fmt(probs[i], "%.12g") << "\n";
    }
    for (std::size_t k = 0; k < observables.size(); ++k) out << "<" << o.expects[k] << "> " << fmt(expvals[k], "%.12g") << "\n";
    return kOk;
}

int cmd_grad_check(int circuits, std::uint64_t seed, double tolerance, std::ostream& out) {
    if (circuits < 1) throw UsageError("--circuits must be >= 1");
    const GradCheckReport r = grad_check(circuits, seed, 1e-4);
    const bool pass = r.ideal_max_deviation < tolerance && r.noisy_max_deviation < tolerance;
    out << "circuits " << r.circuits << "\n"
        << "ideal max_deviation " << fmt(r.ideal_max_deviation, "%.3e") << "\n"
        << "noisy max_deviation " << fmt(r.noisy_max_deviation, "%.3e") << "\n"
        << (pass ? "PASS" : "FAIL") << " tolerance " << fmt(tolerance, "%.1e") << "\n";
    if (!pass) throw NumericFailure("parameter-shift gradients disagree with finite differences");
    return kOk;
}

int cmd_qpe(double phase, int counting, std::vector<double> depol, const std::string& out_path, std::ostream& out) {
    Circuit c(1);
    try {
        c = build_qpe(phase, counting);
    } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
    }
    for (double p : depol) {
        if (!(p >= 0 && p <= 1)) throw UsageError("--depol values must lie in [0, 1]");
    }
    const std::size_t outcomes = std::size_t{1} << counting;
    const auto correct = static_cast<Eigen::Index>(static_cast<std::size_t>(std::llround(phase * static_cast<double>(outcomes))) % outcomes);
    std::vector<int> reg(static_cast<std::size_t>(counting));
    for (int q = 0; q < counting; ++q) reg[static_cast<std::size_t>(q)] = q;

    MetricsTable table;
    table.columns = {"backend", "depolarizing", "success"};
    for (std::size_t k = 0; k < outcomes; ++k) table.columns.push_back(basis_label(k, counting));
    auto add_row = [&](const std::string& backend, double p, const Eigen::VectorXd& full) {
        const Eigen::VectorXd m = marginal_probs(full, reg);
        std::vector<MetricsTable::Cell> row{backend, p, m[correct]};
        for (Eigen::Index k = 0; k < m.size(); ++k) row.emplace_back(m[k]);
        table.add(std::move(row));
    };
    const BoundCircuit bc(c, {});
    add_row("ideal", 0.0, run_ideal(bc).probabilities());
    for (double p : depol) add_row("noisy", p, run_noisy(bc, NoiseModel::single(ChannelKind::depolarizing, p)).probabilities());
    const std::string csv = encode_csv(table);
    if (out_path.empty()) {
        out << csv;
    } else {
        write_file_atomically(out_path, csv);
    }
    return kOk;
}

std::vector<std::string> seed_preamble(const Config& cfg) { return {"seed=" + cfg.text("seed")}; }

// Spells out the per-convolution values the shared model keys resolved to,
// so the echo reproduces the run when fed back in.
std::string classifier_echo(Config cfg, const ClassifierConfig& cc) {
    cfg.set("model.conv1_qubits", std::to_string(cc.conv1.qubits));
    cfg.set("model.conv2_qubits", std::to_string(cc.conv2.qubits));
    cfg.set("model.conv1_layers", std::to_string(cc.conv1.layers));
    cfg.set("model.conv2_layers", std::to_string(cc.conv2.layers));
    return cfg.echo();
}

int cmd_train_classifier(std::span<const std::string> rest, std::ostream& out) {
    const Config cfg = load_config(rest, classifier_schema());
    const ClassifierConfig cc = classifier_config(cfg);
    const std::vector<int> classes = cfg.int_list("data.classes");
    const auto train_n = static_cast<std::size_t>(std::max<std::int64_t>(0, cfg.integer("data.train_per_class")));
    const auto test_n = static_cast<std::size_t>(std::max<std::int64_t>(0, cfg.integer("data.test_per_class")));

    ImageSet train, test;
    if (cfg.boolean("data.synthetic")) {
        if (cc.image_height != cc.image_width) throw ConfigError("synthetic data needs a square image");
        std::tie(train, test) = split_per_class(synthetic_images(cfg, cc.image_height), classes, train_n, test_n);
    } else if (cfg.has("data.test_images")) {
        train = split_per_class(load_images(cfg, "data.images", "data.labels"), classes, train_n, 0).first;
        test = split_per_class(load_images(cfg, "data.test_images", "data.test_labels"), classes, test_n, 0).first;
    } else {
        std::tie(train, test) = split_per_class(load_images(cfg, "data.images", "data.labels"), classes, train_n, test_n);
    }
    if (train.height != cc.image_height || train.width != cc.image_width) {
        throw ConfigError("preprocessed images are " + std::to_string(train.height) + "x" + std::to_string(train.width) +
                          " but the model expects " + std::to_string(cc.image_height) + "x" + std::to_string(cc.image_width));
    }

    StagedDirectory dir(cfg.text("out"));
    const ClassifierTrainResult res = validated([&] { return train_classifier(train, test.size() ? &test : nullptr, cc); });
    write_text(dir.path() / "config.echo", classifier_echo(cfg, cc));
    write_text(dir.path() / "metrics.csv", encode_csv(res.metrics, seed_preamble(cfg)));
    write_text(dir.path() / "checkpoint.txt", encode_checkpoint(res.model.parameters()));
    dir.commit();

    // Final epoch summary, one line per split.
    for (const auto& row : res.metrics.rows) {
        if (std::get<std::int64_t>(row[0]) != cc.epochs) continue;
        out << "epoch " << cc.epochs << ' ' << std::get<std::string>(row[1]) << " loss "
            << fmt(std::get<double>(row[2]), "%.6f") << " accuracy " << fmt(std::get<double>(row[3]), "%.4f") << "\n";
    }
    out << "wrote " << cfg.text("out") << "\n";
    return kOk;
}

void write_gan_outputs(const fs::path& dir, const GanClassResult& r, const Config& cfg) {
    write_text(dir / "metrics.csv", encode_csv(r.metrics, seed_preamble(cfg)));
    ParamVector all = r.state.gen_params;
    const ParamVector& d = r.state.discriminator.parameters();
    all.values.conservativeResize(all.size() + d.size());
    all.values.tail(d.size()) = d.values;
    all.names.insert(all.names.end(), d.names.begin(), d.names.end());
    write_text(dir / "checkpoint.txt", encode_checkpoint(all));
    std::error_code ec;
    fs::create_directories(dir / "samples", ec);
    if (ec) throw IoFailure("cannot create " + (dir / "samples").string());
    for (const auto& s : r.samples) {
        char name[32];
        std::snprintf(name, sizeof name, "%04d.pgm", s.iteration);
        write_text(dir / "samples" / name, encode_pgm(s.image));
    }
}

}  // namespace

ImageSet gan_dataset(const Config& cfg, const GanConfig& gc) {
    ImageSet data;
    if (cfg.boolean("data.synthetic")) {
        if (gc.image_height != gc.image_width) throw ConfigError("synthetic data needs a square image");
        data = synthetic_images(cfg, gc.image_height);
    } else {
        data = load_images(cfg, "data.images", "data.labels");
    }
    const std::vector<int> classes = cfg.int_list("data.classes");
    if (!classes.empty()) {
        if (!data.labels) throw ConfigError("data.classes needs labelled data");
        const std::int64_t limit = cfg.integer("data.per_class");
        ImageSet sel = validated([&] {
            return select_classes(data, classes, limit > 0 ? static_cast<std::size_t>(limit) : data.size());
        });
        for (auto& l : *sel.labels) l = classes[static_cast<std::size_t>(l)];
        data = std::move(sel);
    } else if (cfg.integer("data.per_class") > 0 && data.labels) {
        throw ConfigError("data.per_class needs data.classes");
    }
    if (data.height != gc.image_height || data.width != gc.image_width) {
        throw ConfigError("preprocessed images are " + std::to_string(data.height) + "x" + std::to_string(data.width) +
                          " but the generator produces " + std::to_string(gc.image_height) + "x" + std::to_string(gc.image_width));
    }
    return data;
}

namespace {

int cmd_train_gan(std::span<const std::string> rest, std::ostream& out) {
    const Config cfg = load_config(rest, gan_schema());
    const GanConfig gc = gan_config(cfg);
    const ImageSet data = gan_dataset(cfg, gc);

    StagedDirectory dir(cfg.text("out"));
    const std::vector<GanClassResult> results = validated([&] { return train_gan(data, gc); });
    write_text(dir.path() / "config.echo", cfg.echo());
    if (results.size() == 1) {
        write_gan_outputs(dir.path(), results.front(), cfg);
    } else {
        for (const auto& r : results) {
            const fs::path sub = dir.path() / ("class_" + std::to_string(r.label));
            std::error_code ec;
            fs::create_directories(sub, ec);
            if (ec) throw IoFailure("cannot create " + sub.string());
            write_gan_outputs(sub, r, cfg);
        }
    }
    dir.commit();
    for (const auto& r : results) {
        if (r.metrics.rows.empty()) continue;
        const auto& last = r.metrics.rows.back();
        out << (r.label >= 0 ? "class " + std::to_string(r.label) + " " : std::string()) << "iteration "
            << std::get<std::int64_t>(last[0]) << " disc_loss " << fmt(std::get<double>(last[1]), "%.6f") << " gen_loss "
            << fmt(std::get<double>(last[2]), "%.6f") << " d_fake_mean " << fmt(std::get<double>(last[3]), "%.4f") << "\n";
    }
    out << "wrote " << cfg.text("out") << "\n";
    return kOk;
}

int cmd_report_params(std::span<const std::string> rest, std::ostream& out) {
    std::vector<std::string> args(rest.begin(), rest.end());
    std::string kind = "classifier";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--kind" && i + 1 < args.size()) {
            kind = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--kind=", 0) == 0) {
            kind = args[i].substr(7);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (kind == "classifier") {
        const Config cfg = load_config(args, classifier_schema());
        const ClassifierConfig cc = classifier_config(cfg);
        const ClassifierModel m(cc);
        out << "conv1_parameters " << m.conv1().num_parameters() << "\n"
            << "conv2_parameters " << (m.conv2() ? m.conv2()->num_parameters() : 0) << "\n"
            << "quantum_parameters " << m.num_quantum_parameters() << "\n"
            << "head_parameters " << m.num_head_parameters() << "\n"
            << "total_parameters " << m.parameters().size() << "\n"
            << "classical_cnn_parameters " << classical_analogue_parameter_count(cc) << "\n";
        return kOk;
    }
    if (kind == "gan") {
        const Config cfg = load_config(args, gan_schema());
        const GanConfig gc = gan_config(cfg);
        std::mt19937_64 rng(gc.seed);
        const GanState st = make_gan_state(gc, rng);
        out << "sub_generator_parameters " << gc.shape.num_parameters() << "\n"
            << "generator_parameters " << st.generator.num_parameters() << "\n"
            << "discriminator_parameters " << st.discriminator.parameters().size() << "\n"
            << "latent_dim " << st.generator.latent_dim() << "\n"
            << "patch_pixels " << gc.shape.patch_size() << "\n";
        return kOk;
    }
    throw UsageError("--kind must be classifier or gan");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"qvml: quantum circuit simulation and hybrid quantum machine learning experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qvml 0.1.0");

    SimOptions sim;
    auto* sim_cmd = app.add_subcommand("sim", "simulate a circuit file and print outcome probabilities");
    sim_cmd->add_option("file", sim.file, "circuit file")->required();
    sim_cmd->add_flag("--noisy", sim.noisy, "use the density-matrix backend");
    sim_cmd->add_flag("--ignore-noise", sim.ignore_noise, "skip noise instructions on the ideal backend");
    sim_cmd->add_option("--param", sim.params, "name=value binding (repeatable)");
    sim_cmd->add_option("--expect", sim.expects, "Pauli product such as \"Z0 Z1\" (repeatable)");
    sim_cmd->add_option("--noise", sim.noise, "end-of-circuit channel kind:p[:end|layer] on all qubits (repeatable)");
    sim_cmd->add_option("--threshold", sim.threshold, "smallest probability printed");

    int gc_circuits = 50;
    std::uint64_t gc_seed = 1;
    double gc_tol = 1e-5;
    auto* gc_cmd = app.add_subcommand("grad-check", "compare parameter-shift gradients with finite differences");
    gc_cmd->add_option("--circuits", gc_circuits, "random circuits per backend");
    gc_cmd->add_option("--seed", gc_seed, "random seed");
    gc_cmd->add_option("--tolerance", gc_tol, "largest allowed deviation");

    double qpe_phase = 0.125;
    int qpe_counting = 3;
    std::vector<double> qpe_depol;
    std::string qpe_out;
    auto* qpe_cmd = app.add_subcommand("qpe-demo", "phase estimation under increasing depolarizing noise");
    qpe_cmd->add_option("--phase", qpe_phase, "eigenphase in [0, 1)");
    qpe_cmd->add_option("--counting", qpe_counting, "counting qubits (1-8)");
    qpe_cmd->add_option("--depol", qpe_depol, "depolarizing probability (repeatable; default 0.02 0.05 0.1)");
    qpe_cmd->add_option("--out", qpe_out, "CSV path (default: stdout)");

    auto* tc_cmd = app.add_subcommand("train-classifier", "train the quantum convolution classifier: [config] [--key value ...]");
    auto* tg_cmd = app.add_subcommand("train-gan", "train the patch quantum GAN: [config] [--key value ...]");
    auto* rp_cmd = app.add_subcommand("report-params", "print parameter counts: [config] [--kind classifier|gan] [--key value ...]");
    for (auto* c : {tc_cmd, tg_cmd, rp_cmd}) {
        c->allow_extras();
        c->prefix_command();
    }

    std::vector<std::string> argv_store(args.begin(), args.end());
    if (argv_store.empty()) argv_store.emplace_back("qvml");
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sim_cmd) return cmd_sim(sim, out);
        if (*gc_cmd) return cmd_grad_check(gc_circuits, gc_seed, gc_tol, out);
        if (*qpe_cmd) return cmd_qpe(qpe_phase, qpe_counting, qpe_depol.empty() ? std::vector<double>{0.02, 0.05, 0.1} : qpe_depol, qpe_out, out);
        if (*tc_cmd) return cmd_train_classifier(tc_cmd->remaining(), out);
        if (*tg_cmd) return cmd_train_gan(tg_cmd->remaining(), out);
        if (*rp_cmd) return cmd_report_params(rp_cmd->remaining(), out);
        return kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const CheckpointError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoFailure& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const IdxError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const TrainingDivergedError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const GanDivergedError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const PostselectionError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::domain_error& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace qvml::cli
