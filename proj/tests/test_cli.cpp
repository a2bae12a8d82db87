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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qvml/checkpoint.hpp"
#include "qvml/cli.hpp"

namespace {

using namespace qvml;
namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result qvml_run(std::vector<std::string> args) {
    args.insert(args.begin(), "qvml");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qvml_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    fs::path dir_;
};

const std::vector<std::string> kTinyClassifier{"--data.synthetic", "true", "--data.synthetic_count", "12",
                                               "--model.image_height", "4", "--model.image_width", "4",
                                               "--qubits", "2", "--layers", "1", "--epochs", "2"};

const std::vector<std::string> kTinyGan{"--data.synthetic", "true", "--data.synthetic_count", "80",
                                        "--generator.image_height", "4", "--generator.image_width", "4",
                                        "--sub_generators", "2", "--data_qubits", "3", "--depth", "1",
                                        "--hidden", "4,4", "--iterations", "3", "--sample_every", "2",
                                        "--batch_size", "4"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

TEST(Config, ParsesSectionsCommentsAndOverrides) {
    const Config c = Config::parse("# run\nseed = 7\n\n[train]\nepochs = 3  # short\n[model]\nqubits=2\n",
                                   cli::classifier_schema());
    EXPECT_EQ(c.integer("seed"), 7);
    EXPECT_EQ(c.integer("train.epochs"), 3);
    EXPECT_EQ(c.integer("model.qubits"), 2);
    EXPECT_EQ(c.real("train.learning_rate"), 1e-3);
    Config d = c;
    const std::vector<std::string> args{"--epochs", "5", "--model.layers=4"};
    d.apply_overrides(args);
    EXPECT_EQ(d.integer("train.epochs"), 5);
    EXPECT_EQ(d.integer("model.layers"), 4);
    EXPECT_EQ(Config::parse(d.echo(), cli::classifier_schema()).echo(), d.echo());
}

TEST(Config, Errors) {
    const auto& s = cli::classifier_schema();
    try {
        Config::parse("seed = 1\n[train]\nepochz = 3\n", s);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_THROW(Config::parse("[train]\nepochs = many\n", s), ConfigError);
    EXPECT_THROW(Config::parse("[train\n", s), ConfigError);
    EXPECT_THROW(Config::parse("epochs\n", s), ConfigError);
    Config c(s);
    EXPECT_THROW(c.set("window", "2"), ConfigError);  // conv1_window vs conv2_window is not a prefix match
    EXPECT_THROW(c.set("nonsense", "1"), ConfigError);
}

TEST(Config, SharedQubitsAndLayersKeys) {
    Config c = Config::parse("[model]\nqubits = 2\nlayers = 4\nconv2_layers = 1\n", cli::classifier_schema());
    const ClassifierConfig cfg = cli::classifier_config(c);
    EXPECT_EQ(cfg.conv1.qubits, 2);
    EXPECT_EQ(cfg.conv2.qubits, 2);
    EXPECT_EQ(cfg.conv1.layers, 4);
    EXPECT_EQ(cfg.conv2.layers, 1);
}

TEST(Config, NoiseSection) {
    Config c = Config::parse("[noise]\nkind = flip\nparameter = 0.1\n", cli::classifier_schema());
    const auto nm = cli::noise_from_config(c);
    ASSERT_TRUE(nm.has_value());
    EXPECT_EQ(nm->entries().size(), 2u);
    c.set("noise.kind", "none");
    EXPECT_FALSE(cli::noise_from_config(c).has_value());
    c.set("noise.kind", "warp");
    EXPECT_THROW(cli::noise_from_config(c), ConfigError);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(qvml_run({}).code, cli::kUsage);
    EXPECT_EQ(qvml_run({"frobnicate"}).code, cli::kUsage);
    EXPECT_EQ(qvml_run({"sim"}).code, cli::kUsage);
    EXPECT_EQ(qvml_run({"sim", file("a.qc", "qubits 1\n"), "--bogus"}).code, cli::kUsage);
}

TEST_F(CliTest, SimPrintsDistributionAndExpectations) {
    const Result r = qvml_run({"sim", file("bell.qc", "qubits 2\nh 0\ncx 0 1\n"), "--expect", "Z0 Z1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "backend ideal\n00 0.5\n11 0.5\n<Z0 Z1> 1\n");

    const Result n = qvml_run({"sim", path("bell.qc"), "--noise", "phaseflip:0.5", "--expect", "X0 X1"});
    EXPECT_EQ(n.code, 0);
    EXPECT_NE(n.out.find("backend noisy"), std::string::npos);
    EXPECT_NE(n.out.find("<X0 X1> 0\n"), std::string::npos);

    const Result p = qvml_run({"sim", file("ry.qc", "qubits 1\nry 0 t\n"), "--param", "t=3.141592653589793"});
    EXPECT_EQ(p.code, 0);
    EXPECT_NE(p.out.find("\n1 1\n"), std::string::npos);
    EXPECT_EQ(qvml_run({"sim", path("ry.qc")}).code, cli::kUsage);  // unbound symbol
}

TEST_F(CliTest, SimInputErrors) {
    EXPECT_EQ(qvml_run({"sim", path("missing.qc")}).code, cli::kIo);
    const Result bad = qvml_run({"sim", file("bad.qc", "qubits 2\nfoo 1\n")});
    EXPECT_EQ(bad.code, cli::kIo);
    EXPECT_NE(bad.err.find("line 2"), std::string::npos);
    // Noise instructions on the ideal backend need an explicit choice.
    EXPECT_NE(qvml_run({"sim", file("n.qc", "qubits 1\nnoise depol 0 0.1\n")}).code, 0);
    EXPECT_EQ(qvml_run({"sim", path("n.qc"), "--ignore-noise"}).code, 0);
    EXPECT_EQ(qvml_run({"sim", path("n.qc"), "--noisy"}).code, 0);
}

TEST_F(CliTest, QpeDemoCsv) {
    const Result r = qvml_run({"qpe-demo", "--out", path("qpe.csv")});
    ASSERT_EQ(r.code, 0);
    std::istringstream in(slurp(path("qpe.csv")));
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header, "backend,depolarizing,success,000,001,010,011,100,101,110,111");
    std::vector<double> success;
    while (std::getline(in, line)) {
        const auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
        success.push_back(std::stod(line.substr(b + 1, c - b - 1)));
    }
    ASSERT_EQ(success.size(), 4u);
    EXPECT_GE(success[0], 0.999);
    EXPECT_GT(success[1], success[2]);
    EXPECT_GT(success[2], success[3]);
    EXPECT_EQ(qvml_run({"qpe-demo", "--counting", "0"}).code, cli::kUsage);
}

TEST_F(CliTest, GradCheck) {
    const Result r = qvml_run({"grad-check", "--circuits", "5"});
    EXPECT_EQ(r.code, 0);
    const cli::GradCheckReport rep = cli::grad_check(5, 1, 1e-4);
    EXPECT_EQ(rep.circuits, 5);
    EXPECT_LT(rep.ideal_max_deviation, 1e-5);
    EXPECT_LT(rep.noisy_max_deviation, 1e-5);
}

TEST_F(CliTest, TrainClassifierOutputsAreDeterministic) {
    ASSERT_EQ(qvml_run(concat({"train-classifier", "--out", path("a")}, kTinyClassifier)).code, 0);
    ASSERT_EQ(qvml_run(concat({"train-classifier", "--out", path("b")}, kTinyClassifier)).code, 0);
    for (const char* f : {"metrics.csv", "checkpoint.txt"}) {
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    }
    const std::string metrics = slurp(dir_ / "a" / "metrics.csv");
    EXPECT_EQ(metrics.rfind("# seed=1\nepoch,split,loss,accuracy\n1,train,", 0), 0u);
    EXPECT_FALSE(fs::exists(path("a.tmp")));

    // The echoed configuration reproduces the run.
    ASSERT_EQ(qvml_run({"train-classifier", (dir_ / "a" / "config.echo").string(), "--out", path("c")}).code, 0);
    EXPECT_EQ(slurp(dir_ / "a" / "metrics.csv"), slurp(dir_ / "c" / "metrics.csv"));

    // Checkpoints are bit-exact and restore by name.
    const ParamVector ck = parse_checkpoint(slurp(dir_ / "a" / "checkpoint.txt"));
    EXPECT_EQ(encode_checkpoint(ck), slurp(dir_ / "a" / "checkpoint.txt"));
    ParamVector target = ck;
    target.values.setZero();
    restore_checkpoint(ck, target);
    EXPECT_EQ(target.values, ck.values);
    ParamVector extra = ck;
    extra.names.push_back("head.b.99");
    extra.values.conservativeResize(extra.values.size() + 1);
    EXPECT_THROW(restore_checkpoint(ck, extra), CheckpointError);
}

TEST_F(CliTest, TrainClassifierFailuresLeaveNoOutput) {
    const Result unknown = qvml_run({"train-classifier", file("bad.ini", "[train]\nepochz = 2\n"), "--out", path("x")});
    EXPECT_EQ(unknown.code, cli::kConfig);
    const Result io = qvml_run({"train-classifier", "--data.images", path("nope"), "--data.labels", path("nope"),
                                "--out", path("y")});
    EXPECT_EQ(io.code, cli::kIo);
    const Result geom = qvml_run(concat(concat({"train-classifier", "--out", path("z")}, kTinyClassifier),
                                        {"--conv1_window", "9"}));
    EXPECT_EQ(geom.code, cli::kConfig);
    for (const char* d : {"x", "y", "z", "x.tmp", "y.tmp", "z.tmp"}) EXPECT_FALSE(fs::exists(path(d))) << d;
    EXPECT_EQ(qvml_run({"train-classifier", path("missing.ini")}).code, cli::kIo);
}

TEST_F(CliTest, TrainClassifierOnIdxFixture) {
    const Result r = qvml_run({"train-classifier", "configs/desk_classifier.ini", "--epochs", "1", "--train_per_class",
                               "4", "--test_per_class", "3", "--out", path("fx")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string metrics = slurp(dir_ / "fx" / "metrics.csv");
    EXPECT_NE(metrics.find("\n1,train,"), std::string::npos);
    EXPECT_NE(metrics.find("\n1,test,"), std::string::npos);
}

TEST_F(CliTest, TrainGanOutputsAreDeterministic) {
    ASSERT_EQ(qvml_run(concat({"train-gan", "--out", path("a")}, kTinyGan)).code, 0);
    ASSERT_EQ(qvml_run(concat({"train-gan", "--out", path("b")}, kTinyGan)).code, 0);
    // Synthetic bars and stripes carry two labels: one generator each.
    for (const char* cls : {"class_0", "class_1"}) {
        for (const char* f : {"metrics.csv", "checkpoint.txt", "samples/0002.pgm", "samples/0003.pgm"}) {
            const fs::path a = dir_ / "a" / cls / f;
            ASSERT_TRUE(fs::exists(a)) << a;
            EXPECT_EQ(slurp(a), slurp(dir_ / "b" / cls / f)) << a;
        }
    }
    EXPECT_EQ(slurp(dir_ / "a" / "class_0" / "metrics.csv").rfind("# seed=1\niteration,disc_loss,gen_loss,d_fake_mean\n", 0),
              0u);
    EXPECT_EQ(slurp(dir_ / "a" / "class_0" / "samples" / "0002.pgm").rfind("P2\n4 4\n255\n", 0), 0u);
}

TEST_F(CliTest, TrainGanSingleClassLayout) {
    const Result r = qvml_run(concat({"train-gan", "--out", path("g"), "--classes", "1"}, kTinyGan));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir_ / "g" / "metrics.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "g" / "samples" / "0003.pgm"));
    EXPECT_EQ(qvml_run(concat(concat({"train-gan", "--out", path("h")}, kTinyGan), {"--data.synthetic_count", "8"})).code,
              cli::kConfig);
    EXPECT_FALSE(fs::exists(path("h")));
}

TEST_F(CliTest, ReportParams) {
    const Result c = qvml_run({"report-params", "configs/desk_classifier.ini"});
    EXPECT_EQ(c.code, 0);
    EXPECT_NE(c.out.find("total_parameters 134\n"), std::string::npos);
    const Result g = qvml_run({"report-params", "configs/desk_gan.ini", "--kind", "gan"});
    EXPECT_EQ(g.code, 0);
    EXPECT_NE(g.out.find("generator_parameters 120\n"), std::string::npos);
    EXPECT_EQ(qvml_run({"report-params", "--kind", "circuit"}).code, cli::kUsage);
}

}  // namespace
