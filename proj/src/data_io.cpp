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


#include "qvml/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace qvml {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::uint8_t to_byte(double pixel) {
    const double v = std::round(std::clamp(pixel, 0.0, 1.0) * 255.0);
    return static_cast<std::uint8_t>(v);
}

}  // namespace

ImageSet parse_idx(std::span<const std::uint8_t> images, std::optional<std::span<const std::uint8_t>> labels) {
    if (images.size() < 16) throw IdxError(IdxErrorCode::truncated, "IDX image header truncated");
    const std::uint32_t magic = read_be32(images, 0);
    if (magic != kIdxImageMagic) {
        throw IdxError(IdxErrorCode::bad_magic, "IDX image magic " + std::to_string(magic) + " is not 0x00000803");
    }
    const std::uint64_t count = read_be32(images, 4);
    const std::uint64_t rows = read_be32(images, 8);
    const std::uint64_t cols = read_be32(images, 12);
    if (rows == 0 || cols == 0 || rows > 65536 || cols > 65536) {
        throw IdxError(IdxErrorCode::bad_dimensions, "IDX image dimensions out of range");
    }
    if (count > (images.size() - 16) / (rows * cols)) {
        throw IdxError(IdxErrorCode::truncated, "IDX image payload truncated");
    }
    const std::uint64_t expected = 16 + count * rows * cols;
    if (images.size() < expected) throw IdxError(IdxErrorCode::truncated, "IDX image payload truncated");
    if (images.size() > expected) throw IdxError(IdxErrorCode::trailing_data, "IDX image file has trailing bytes");

    ImageSet set;
    set.height = static_cast<int>(rows);
    set.width = static_cast<int>(cols);
    set.images.reserve(count);
    std::size_t offset = 16;
    for (std::uint64_t i = 0; i < count; ++i) {
        Image img(set.height, set.width);
        for (int r = 0; r < set.height; ++r) {
            for (int c = 0; c < set.width; ++c) img(r, c) = images[offset++] / 255.0;
        }
        set.images.push_back(std::move(img));
    }

    if (labels) {
        const auto lb = *labels;
        if (lb.size() < 8) throw IdxError(IdxErrorCode::truncated, "IDX label header truncated");
        const std::uint32_t lmagic = read_be32(lb, 0);
        if (lmagic != kIdxLabelMagic) {
            throw IdxError(IdxErrorCode::bad_magic, "IDX label magic " + std::to_string(lmagic) + " is not 0x00000801");
        }
        const std::uint64_t lcount = read_be32(lb, 4);
        if (lcount != count) {
            throw IdxError(IdxErrorCode::count_mismatch, std::to_string(count) + " images but " +
                                                             std::to_string(lcount) + " labels");
        }
        if (lb.size() < 8 + lcount) throw IdxError(IdxErrorCode::truncated, "IDX label payload truncated");
        if (lb.size() > 8 + lcount) throw IdxError(IdxErrorCode::trailing_data, "IDX label file has trailing bytes");
        set.labels.emplace(lb.begin() + 8, lb.end());
    }
    return set;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IdxError(IdxErrorCode::io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IdxError(IdxErrorCode::io, "read failed for " + path.string());
    return bytes;
}

ImageSet load_idx(const std::filesystem::path& images_path, const std::optional<std::filesystem::path>& labels_path) {
    const auto img = read_file_bytes(images_path);
    if (!labels_path) return parse_idx(img);
    const auto lab = read_file_bytes(*labels_path);
    return parse_idx(img, std::span<const std::uint8_t>(lab));
}

std::vector<std::uint8_t> encode_idx_images(const ImageSet& set) {
    std::vector<std::uint8_t> out;
    put_be32(out, kIdxImageMagic);
    put_be32(out, static_cast<std::uint32_t>(set.images.size()));
    put_be32(out, static_cast<std::uint32_t>(set.height));
    put_be32(out, static_cast<std::uint32_t>(set.width));
    for (const auto& img : set.images) {
        for (int r = 0; r < img.rows(); ++r)
            for (int c = 0; c < img.cols(); ++c) out.push_back(to_byte(img(r, c)));
    }
    return out;
}

std::vector<std::uint8_t> encode_idx_labels(const std::vector<int>& labels) {
    std::vector<std::uint8_t> out;
    put_be32(out, kIdxLabelMagic);
    put_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (int l : labels) out.push_back(static_cast<std::uint8_t>(l));
    return out;
}

Image downsample(const Image& img, int factor) {
    if (factor < 1 || img.rows() % factor != 0 || img.cols() % factor != 0) {
        throw std::invalid_argument("image " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
                                    " is not divisible by factor " + std::to_string(factor));
    }
    const Eigen::Index h = img.rows() / factor, w = img.cols() / factor;
    Image out(h, w);
    for (Eigen::Index r = 0; r < h; ++r) {
        for (Eigen::Index c = 0; c < w; ++c) {
            out(r, c) = img.block(r * factor, c * factor, factor, factor).mean();
        }
    }
    return out;
}

Image center_crop(const Image& img, int height, int width) {
    if (height < 1 || width < 1 || height > img.rows() || width > img.cols()) {
        throw std::invalid_argument("crop window larger than image");
    }
    return img.block((img.rows() - height) / 2, (img.cols() - width) / 2, height, width);
}

ImageSet downsample(const ImageSet& set, int factor) {
    ImageSet out = set;
    for (auto& img : out.images) img = downsample(img, factor);
    out.height = set.height / factor;
    out.width = set.width / factor;
    return out;
}

ImageSet center_crop(const ImageSet& set, int height, int width) {
    ImageSet out = set;
    for (auto& img : out.images) img = center_crop(img, height, width);
    out.height = height;
    out.width = width;
    return out;
}

ImageSet select_classes(const ImageSet& set, std::span<const int> classes, std::size_t limit_per_class) {
    if (!set.labels) throw std::invalid_argument("class selection needs labels");
    ImageSet out;
    out.height = set.height;
    out.width = set.width;
    out.labels.emplace();
    std::vector<std::size_t> taken(classes.size(), 0);
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        for (std::size_t k = 0; k < classes.size(); ++k) {
            if ((*set.labels)[i] == classes[k] && taken[k] < limit_per_class) {
                ++taken[k];
                out.images.push_back(set.images[i]);
                out.labels->push_back(static_cast<int>(k));
            }
        }
    }
    return out;
}

ImageSet synth_bars_stripes(int size, std::size_t count, std::mt19937_64& rng) {
    if (size < 2) throw std::invalid_argument("bars-and-stripes size must be at least 2");
    ImageSet out;
    out.height = out.width = size;
    out.labels.emplace();
    std::bernoulli_distribution coin(0.5);
    for (std::size_t n = 0; n < count; ++n) {
        const bool bars = coin(rng);
        Image img = Image::Zero(size, size);
        for (int line = 0; line < size; ++line) {
            if (!coin(rng)) continue;
            if (bars) {
                img.col(line).setOnes();
            } else {
                img.row(line).setOnes();
            }
        }
        out.images.push_back(std::move(img));
        out.labels->push_back(bars ? 1 : 0);
    }
    return out;
}

std::string encode_pgm(const Image& img) {
    std::string out = "P2\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
    for (Eigen::Index r = 0; r < img.rows(); ++r) {
        for (Eigen::Index c = 0; c < img.cols(); ++c) {
            if (c) out += ' ';
            out += std::to_string(static_cast<int>(to_byte(img(r, c))));
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_pgm(const Image& img, const std::filesystem::path& path) { write_text_file(path, encode_pgm(img)); }

Image read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P2" || w < 1 || h < 1 || maxval < 1) throw std::runtime_error("not an ASCII PGM: " + path.string());
    Image img(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            int v = -1;
            if (!(in >> v) || v < 0 || v > maxval) throw std::runtime_error("bad PGM pixel in " + path.string());
            img(r, c) = static_cast<double>(v) / maxval;
        }
    }
    return img;
}

void MetricsTable::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("metrics row width does not match header");
    rows.push_back(std::move(row));
}

std::string encode_csv(const MetricsTable& table, std::span<const std::string> preamble) {
    std::string out;
    for (const auto& line : preamble) out += "# " + line + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    char buf[40];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (const auto* v = std::get_if<std::int64_t>(&row[i])) {
                out += std::to_string(*v);
            } else if (const auto* d = std::get_if<double>(&row[i])) {
                std::snprintf(buf, sizeof buf, "%.17g", *d);
                out += buf;
            } else {
                out += std::get<std::string>(row[i]);
            }
        }
        out += '\n';
    }
    return out;
}

void write_metrics(const MetricsTable& table, const std::filesystem::path& path, std::span<const std::string> preamble) {
    write_text_file(path, encode_csv(table, preamble));
}

}  // namespace qvml
