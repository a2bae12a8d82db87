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
 * Flat text checkpoints: one `name value` line per parameter, values with
 * 17 significant digits so a save/load cycle is bit-exact.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "qvml/gradients.hpp"

namespace qvml {

class CheckpointError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string encode_checkpoint(const ParamVector& params);
ParamVector parse_checkpoint(std::string_view text);

/// Copies values from `source` into `target` by name; every target name
/// must be present exactly once in `source`.
void restore_checkpoint(const ParamVector& source, ParamVector& target);

}  // namespace qvml
