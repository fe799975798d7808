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

#include "renas/checkpoint.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace renas::nn {

using nlohmann::json;

std::string CheckpointToJson(const ConstNamedTensors& tensors) {
  json doc;
  doc["format"] = "renas-params";
  doc["version"] = kCheckpointVersion;
  json& body = doc["tensors"];
  body = json::object();
  for (const auto& [name, t] : tensors) {
    body[name] = {{"rows", t->rows()}, {"cols", t->cols()}, {"data", t->data()}};
  }
  return doc.dump();
}

void CheckpointFromJson(const std::string& text, const NamedTensors& tensors) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("checkpoint parse error: ") + e.what());
  }
  if (doc.value("format", "") != "renas-params") {
    throw std::runtime_error("not a renas parameter checkpoint");
  }
  if (doc.value("version", -1) != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version");
  }
  const json& body = doc.at("tensors");
  for (const auto& [name, t] : tensors) {
    if (!body.contains(name)) {
      throw std::runtime_error("checkpoint lacks tensor " + name);
    }
    const json& entry = body.at(name);
    const auto rows = entry.at("rows").get<std::size_t>();
    const auto cols = entry.at("cols").get<std::size_t>();
    if (rows != t->rows() || cols != t->cols()) {
      throw std::runtime_error("checkpoint shape mismatch for " + name);
    }
    *t = Tensor2(rows, cols, entry.at("data").get<std::vector<double>>());
  }
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const ConstNamedTensors& tensors) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << CheckpointToJson(tensors) << '\n';
}

void LoadCheckpoint(const std::filesystem::path& path,
                    const NamedTensors& tensors) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  CheckpointFromJson(buf.str(), tensors);
}

}  // namespace renas::nn
