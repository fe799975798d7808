// Copyright 2026 The RENAS Search Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RENAS_CHECKPOINT_H_
#define RENAS_CHECKPOINT_H_

#include <filesystem>
#include <string>

#include "renas/tensor.h"

namespace renas::nn {

inline constexpr int kCheckpointVersion = 1;

// JSON document: {"format": "renas-params", "version": 1,
//                 "tensors": {name: {"rows", "cols", "data": [...]}}}.
// Doubles are written with round-trip precision.
std::string CheckpointToJson(const ConstNamedTensors& tensors);
// Fills every named tensor; throws std::runtime_error on a missing name,
// wrong shape, unknown version or malformed document.
void CheckpointFromJson(const std::string& json, const NamedTensors& tensors);

void SaveCheckpoint(const std::filesystem::path& path,
                    const ConstNamedTensors& tensors);
void LoadCheckpoint(const std::filesystem::path& path,
                    const NamedTensors& tensors);

}  // namespace renas::nn

#endif  // RENAS_CHECKPOINT_H_
