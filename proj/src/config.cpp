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


#include "qvml/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace qvml {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_int(std::string_view s, std::int64_t& out) {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size() && !s.empty();
}

bool parse_real(std::string_view s, double& out) {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size() && !s.empty();
}

bool parse_bool(std::string_view s, bool& out) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") {
        out = true;
        return true;
    }
    if (s == "false" || s == "0" || s == "no" || s == "off") {
        out = false;
        return true;
    }
    return false;
}

bool parse_list(std::string_view s, std::vector<int>& out) {
    out.clear();
    if (trim(s).empty()) return true;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = std::min(s.find(',', start), s.size());
        std::int64_t v = 0;
        if (!parse_int(trim(s.substr(start, comma - start)), v)) return false;
        out.push_back(static_cast<int>(v));
        start = comma + 1;
    }
    return true;
}

bool valid_value(ValueType t, std::string_view v) {
    std::int64_t i;
    double d;
    bool b;
    std::vector<int> l;
    switch (t) {
        case ValueType::integer: return parse_int(v, i);
        case ValueType::real: return parse_real(v, d);
        case ValueType::boolean: return parse_bool(v, b);
        case ValueType::int_list: return parse_list(v, l);
        case ValueType::text: return true;
    }
    return false;
}

std::string_view type_name(ValueType t) {
    switch (t) {
        case ValueType::integer: return "an integer";
        case ValueType::real: return "a number";
        case ValueType::boolean: return "true or false";
        case ValueType::int_list: return "a comma-separated integer list";
        case ValueType::text: return "text";
    }
    return "?";
}

}  // namespace

ConfigSchema::ConfigSchema(std::vector<KeySpec> keys) : keys_(std::move(keys)) {}

const KeySpec* ConfigSchema::find(std::string_view key) const {
    for (const auto& k : keys_) {
        if (k.key == key) return &k;
    }
    return nullptr;
}

std::string ConfigSchema::resolve(std::string_view name) const {
    if (find(name)) return std::string(name);
    std::vector<std::string> matches;
    for (const auto& k : keys_) {
        const auto dot = k.key.rfind('.');
        if (dot != std::string::npos && std::string_view(k.key).substr(dot + 1) == name) matches.push_back(k.key);
    }
    if (matches.size() == 1) return matches.front();
    if (matches.empty()) throw ConfigError("unknown configuration key '" + std::string(name) + "'");
    std::string list;
    for (const auto& m : matches) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError("ambiguous configuration key '" + std::string(name) + "' (" + list + ")");
}

Config Config::parse(std::string_view text, const ConfigSchema& schema) {
    Config cfg(schema);
    std::istringstream in{std::string(text)};
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view l = line;
        if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
        l = trim(l);
        if (l.empty()) continue;
        const std::string where = "config line " + std::to_string(lineno) + ": ";
        if (l.front() == '[') {
            if (l.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(trim(l.substr(1, l.size() - 2)));
            if (section.empty()) throw ConfigError(where + "empty section name");
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected `key = value`");
        const std::string key = std::string(trim(l.substr(0, eq)));
        if (key.empty()) throw ConfigError(where + "missing key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (!schema.find(full)) throw ConfigError(where + "unknown key '" + full + "'");
        try {
            cfg.set(full, trim(l.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return cfg;
}

void Config::set(std::string_view key, std::string_view value) {
    const std::string full = schema_->resolve(key);
    const KeySpec* spec = schema_->find(full);
    if (!valid_value(spec->type, value)) {
        throw ConfigError("value '" + std::string(value) + "' for '" + full + "' is not " + std::string(type_name(spec->type)));
    }
    values_[full] = std::string(value);
}

void Config::apply_overrides(std::span<const std::string> args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string_view a = args[i];
        if (a.substr(0, 2) != "--" || a.size() == 2) throw ConfigError("unexpected argument '" + args[i] + "'");
        a.remove_prefix(2);
        if (const auto eq = a.find('='); eq != std::string_view::npos) {
            set(a.substr(0, eq), a.substr(eq + 1));
            continue;
        }
        if (i + 1 >= args.size()) throw ConfigError("option '--" + std::string(a) + "' needs a value");
        set(a, args[++i]);
    }
}

const std::string& Config::raw(std::string_view key) const {
    if (const auto it = values_.find(key); it != values_.end()) return it->second;
    const KeySpec* spec = schema_->find(key);
    if (!spec) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    return spec->default_value;
}

bool Config::has(std::string_view key) const { return !raw(key).empty(); }

std::string Config::text(std::string_view key) const { return raw(key); }

std::int64_t Config::integer(std::string_view key) const {
    std::int64_t v = 0;
    if (!parse_int(raw(key), v)) throw ConfigError("'" + std::string(key) + "' is not set to an integer");
    return v;
}

double Config::real(std::string_view key) const {
    double v = 0;
    if (!parse_real(raw(key), v)) throw ConfigError("'" + std::string(key) + "' is not set to a number");
    return v;
}

bool Config::boolean(std::string_view key) const {
    bool v = false;
    if (!parse_bool(raw(key), v)) throw ConfigError("'" + std::string(key) + "' is not set to a boolean");
    return v;
}

std::vector<int> Config::int_list(std::string_view key) const {
    std::vector<int> v;
    if (!parse_list(raw(key), v)) throw ConfigError("'" + std::string(key) + "' is not an integer list");
    return v;
}

std::string Config::echo() const {
    // Top-level keys first, then sections in schema order.
    std::vector<std::string> sections{""};
    for (const auto& k : schema_->keys()) {
        const auto dot = k.key.find('.');
        const std::string sec = dot == std::string::npos ? "" : k.key.substr(0, dot);
        if (std::find(sections.begin(), sections.end(), sec) == sections.end()) sections.push_back(sec);
    }
    std::string out;
    for (const auto& sec : sections) {
        std::string body;
        for (const auto& k : schema_->keys()) {
            const auto dot = k.key.find('.');
            const std::string ksec = dot == std::string::npos ? "" : k.key.substr(0, dot);
            if (ksec != sec) continue;
            body += (dot == std::string::npos ? k.key : k.key.substr(dot + 1)) + " = " + raw(k.key) + "\n";
        }
        if (body.empty()) continue;
        if (!sec.empty()) out += (out.empty() ? "" : "\n") + ("[" + sec + "]\n");
        out += body;
    }
    return out;
}

}  // namespace qvml
