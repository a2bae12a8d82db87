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
 * The `qvml` experiment runner. Subcommands: sim, grad-check, qpe-demo,
 * train-classifier, train-gan, report-params.
 *
 * Exit codes: 0 success, 2 usage, 3 configuration, 4 I/O or malformed
 * input file, 5 numeric failure.
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "qvml/classifier.hpp"
#include "qvml/config.hpp"
#include "qvml/qgan.hpp"

namespace qvml::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kConfig = 3, kIo = 4, kNumeric = 5, kInternal = 1 };

/// `args[0]` is the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

const ConfigSchema& classifier_schema();
const ConfigSchema& gan_schema();

std::optional<NoiseModel> noise_from_config(const Config& cfg);
ClassifierConfig classifier_config(const Config& cfg);
GanConfig gan_config(const Config& cfg);

/// GAN training images after cropping, downsampling and class selection.
ImageSet gan_dataset(const Config& cfg, const GanConfig& gc);

struct GradCheckReport {
    double ideal_max_deviation = 0.0;
    double noisy_max_deviation = 0.0;
    int circuits = 0;
};

/// Parameter-shift vs central-difference comparison over random circuits
/// (up to 3 qubits and 12 symbols) on both backends.
GradCheckReport grad_check(int circuits, std::uint64_t seed, double h);

}  // namespace qvml::cli
