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

#include "renas/run_log.h"

#include <stdexcept>
#include <string>

namespace renas {

Json ToJson(const MutationTrace& trace) {
  Json actions = Json::array();
  for (const MutationAction& a : trace.actions) {
    Json j = {{"block", a.block},
              {"target", std::string(TargetName(a.target))},
              {"router_logprob", a.router_logprob},
              {"replace_logprob", a.replace_logprob},
              {"router_entropy", a.router_entropy},
              {"replace_entropy", a.replace_entropy}};
    if (const auto* in = std::get_if<InputRef>(&a.replacement)) {
      j["input"] = in->value();
    } else {
      j["op"] = std::string(OpName(std::get<Op>(a.replacement)));
    }
    actions.push_back(std::move(j));
  }
  return {{"actions", std::move(actions)},
          {"logprob", trace.total_logprob},
          {"entropy", trace.total_entropy}};
}

MutationTrace TraceFromJson(const Json& j) {
  try {
    MutationTrace trace;
    for (const Json& a : j.at("actions")) {
      MutationAction act;
      act.block = a.at("block").get<int>();
      const auto target = ParseTarget(a.at("target").get<std::string>());
      if (!target) throw std::runtime_error("unknown mutation target");
      act.target = *target;
      if (a.contains("input")) {
        act.replacement = InputRef::FromValue(a.at("input").get<int>());
      } else {
        const auto op = ParseOp(a.at("op").get<std::string>());
        if (!op) throw std::runtime_error("unknown op");
        act.replacement = *op;
      }
      act.router_logprob = a.at("router_logprob").get<double>();
      act.replace_logprob = a.at("replace_logprob").get<double>();
      act.router_entropy = a.at("router_entropy").get<double>();
      act.replace_entropy = a.at("replace_entropy").get<double>();
      trace.actions.push_back(act);
    }
    trace.total_logprob = j.at("logprob").get<double>();
    trace.total_entropy = j.at("entropy").get<double>();
    return trace;
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("bad mutation trace: ") + e.what());
  }
}

Json ToJson(const UpdateDiagnostics& d) {
  return {{"fitness", d.fitness},       {"reward", d.reward},
          {"advantage", d.advantage},   {"baseline", d.baseline},
          {"logprob", d.logprob},       {"entropy", d.entropy},
          {"grad_norm", d.grad_norm}};
}

Json ToJson(const Individual& ind) {
  Json j = {{"id", ind.id},
            {"parent_id", nullptr},
            {"birth_step", ind.birth_step},
            {"cell", ToText(ind.cell)},
            {"fitness", ind.fitness},
            {"maturity", ind.maturity},
            {"true_fitness", ind.true_fitness}};
  if (ind.parent_id) j["parent_id"] = *ind.parent_id;
  return j;
}

Json ToJson(const StepRecord& rec) {
  return {{"step", rec.step},
          {"sampled_ids", rec.sampled_ids},
          {"parent_id", rec.parent_id},
          {"parent_fitness", rec.parent_fitness},
          {"trace", ToJson(rec.trace)},
          {"child", ToJson(rec.child)},
          {"removed_id", rec.removed_id},
          {"removed_fitness", rec.removed_fitness},
          {"controller", rec.diagnostics ? ToJson(*rec.diagnostics) : Json()}};
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
}

void JsonlWriter::Write(const Json& record) {
  out_ << record.dump() << '\n';
}

std::vector<Json> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<Json> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  return out;
}

}  // namespace renas
