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


#include "qvml/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace qvml {

std::string encode_checkpoint(const ParamVector& params) {
    if (params.names.size() != static_cast<std::size_t>(params.size())) {
        throw CheckpointError("every checkpointed parameter needs a name");
    }
    std::string out;
    char buf[32];
    for (Eigen::Index i = 0; i < params.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", params.values[i]);
        out += params.names[static_cast<std::size_t>(i)];
        out += ' ';
        out += buf;
        out += '\n';
    }
    return out;
}

ParamVector parse_checkpoint(std::string_view text) {
    std::vector<std::string> names;
    std::vector<double> values;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string name, value, extra;
        if (!(ls >> name >> value) || (ls >> extra)) {
            throw CheckpointError("checkpoint line " + std::to_string(lineno) + ": expected `name value`");
        }
        double v = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw CheckpointError("checkpoint line " + std::to_string(lineno) + ": bad number '" + value + "'");
        }
        names.push_back(std::move(name));
        values.push_back(v);
    }
    ParamVector p(Eigen::VectorXd::Map(values.data(), static_cast<Eigen::Index>(values.size())));
    p.names = std::move(names);
    return p;
}

void restore_checkpoint(const ParamVector& source, ParamVector& target) {
    std::unordered_map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < source.names.size(); ++i) {
        if (!index.emplace(source.names[i], static_cast<Eigen::Index>(i)).second) {
            throw CheckpointError("duplicate checkpoint entry '" + source.names[i] + "'");
        }
    }
    if (source.names.size() != target.names.size()) {
        throw CheckpointError("checkpoint has " + std::to_string(source.names.size()) + " entries, model needs " +
                              std::to_string(target.names.size()));
    }
    for (std::size_t i = 0; i < target.names.size(); ++i) {
        const auto it = index.find(target.names[i]);
        if (it == index.end()) throw CheckpointError("checkpoint lacks '" + target.names[i] + "'");
        target.values[static_cast<Eigen::Index>(i)] = source.values[it->second];
    }
}

}  // namespace qvml
