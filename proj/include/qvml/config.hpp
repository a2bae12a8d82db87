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
 * Experiment configuration: line-based `key = value` files with `[section]`
 * headers, validated against a per-command schema, plus `--key value`
 * overrides.
 *
 *     seed = 7
 *     [train]
 *     learning_rate = 0.001   # comments run to end of line
 *
 * Keys are addressed as `section.key` (top-level keys have no prefix). An
 * override may drop the section when the bare key is unambiguous.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qvml {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ValueType { integer, real, boolean, text, int_list };

struct KeySpec {
    std::string key;  ///< `section.key` or bare top-level key
    ValueType type;
    std::string default_value;  ///< empty means "unset"
};

class ConfigSchema {
  public:
    explicit ConfigSchema(std::vector<KeySpec> keys);

    const std::vector<KeySpec>& keys() const { return keys_; }
    const KeySpec* find(std::string_view key) const;
    /// Full key for `name`, which may omit the section if unambiguous.
    std::string resolve(std::string_view name) const;

  private:
    std::vector<KeySpec> keys_;
};

class Config {
  public:
    explicit Config(const ConfigSchema& schema) : schema_(&schema) {}

    static Config parse(std::string_view text, const ConfigSchema& schema);

    /// Type-checks and stores `value` under the resolved key.
    void set(std::string_view key, std::string_view value);
    /// Applies `--key value` / `--key=value` pairs.
    void apply_overrides(std::span<const std::string> args);

    /// True when the effective value (explicit or default) is non-empty.
    bool has(std::string_view key) const;
    /// True when the key was given in the file or an override.
    bool is_set(std::string_view key) const { return values_.find(key) != values_.end(); }
    std::string text(std::string_view key) const;
    std::int64_t integer(std::string_view key) const;
    double real(std::string_view key) const;
    bool boolean(std::string_view key) const;
    std::vector<int> int_list(std::string_view key) const;

    /// Every schema key with its effective value, grouped by section.
    std::string echo() const;

  private:
    const std::string& raw(std::string_view key) const;

    const ConfigSchema* schema_;
    std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace qvml
