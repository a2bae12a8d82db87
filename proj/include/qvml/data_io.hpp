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
 * IDX image/label loading, image preprocessing, synthetic corpora, and the
 * PGM / CSV writers used for experiment outputs.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qvml {

/// Grayscale image, pixels in [0, 1], indexed (row, col).
using Image = Eigen::MatrixXd;

struct ImageSet {
    int height = 0;
    int width = 0;
    std::vector<Image> images;
    std::optional<std::vector<int>> labels;

    std::size_t size() const { return images.size(); }
};

enum class IdxErrorCode { io, bad_magic, truncated, trailing_data, count_mismatch, bad_dimensions };

class IdxError : public std::runtime_error {
  public:
    IdxError(IdxErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
    IdxErrorCode code() const { return code_; }

  private:
    IdxErrorCode code_;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

ImageSet parse_idx(std::span<const std::uint8_t> images,
                   std::optional<std::span<const std::uint8_t>> labels = std::nullopt);
ImageSet load_idx(const std::filesystem::path& images_path,
                  const std::optional<std::filesystem::path>& labels_path = std::nullopt);

/// Encodes an image set as IDX bytes (images, labels if present).
std::vector<std::uint8_t> encode_idx_images(const ImageSet& set);
std::vector<std::uint8_t> encode_idx_labels(const std::vector<int>& labels);

/// Non-overlapping factor x factor mean pooling.
Image downsample(const Image& img, int factor);
/// Central height x width window.
Image center_crop(const Image& img, int height, int width);
ImageSet downsample(const ImageSet& set, int factor);
ImageSet center_crop(const ImageSet& set, int height, int width);

/// Keeps images whose label is in `classes` (relabelled to their position in
/// `classes`), at most `limit_per_class` each, in input order.
ImageSet select_classes(const ImageSet& set, std::span<const int> classes, std::size_t limit_per_class);

/// Rows lit ("stripes", label 0) or columns lit ("bars", label 1); the
/// orientation is a fair coin and each line is lit independently with
/// probability 1/2.
ImageSet synth_bars_stripes(int size, std::size_t count, std::mt19937_64& rng);

std::string encode_pgm(const Image& img);
void write_pgm(const Image& img, const std::filesystem::path& path);
Image read_pgm(const std::filesystem::path& path);

/// Homogeneous records for a CSV file with a fixed header.
struct MetricsTable {
    using Cell = std::variant<std::int64_t, double, std::string>;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

/// Reals use 17 significant digits; LF line endings. Lines in `preamble`
/// are written first, each prefixed with "# ".
std::string encode_csv(const MetricsTable& table, std::span<const std::string> preamble = {});
void write_metrics(const MetricsTable& table, const std::filesystem::path& path,
                   std::span<const std::string> preamble = {});

/// Whole-file helpers.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qvml
