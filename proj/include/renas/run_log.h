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

// JSON forms of cells, mutation traces and step records, and a line-per-
// record log used for trace.jsonl files.

#ifndef RENAS_RUN_LOG_H_
#define RENAS_RUN_LOG_H_

#include <filesystem>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "renas/arch_space.h"
#include "renas/controller.h"
#include "renas/evolution.h"
#include "renas/reinforce.h"

namespace renas {

using Json = nlohmann::json;

Json ToJson(const MutationTrace& trace);
// Throws std::runtime_error on malformed input.
MutationTrace TraceFromJson(const Json& j);

Json ToJson(const UpdateDiagnostics& d);
Json ToJson(const Individual& ind);
Json ToJson(const StepRecord& rec);

// One compact JSON document per line.
class JsonlWriter {
 public:
  JsonlWriter() = default;
  // Throws std::runtime_error if the file cannot be opened.
  explicit JsonlWriter(const std::filesystem::path& path);
  bool is_open() const { return out_.is_open(); }
  void Write(const Json& record);

 private:
  std::ofstream out_;
};

// Throws std::runtime_error on unreadable files or bad lines.
std::vector<Json> ReadJsonl(const std::filesystem::path& path);

}  // namespace renas

#endif  // RENAS_RUN_LOG_H_
