// Copyright 2026 The crisp Authors
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

#include "crisp/critic/wire.hpp"

#include <cstdint>
#include <utility>

#include "crisp/errors.hpp"

namespace crisp::critic {
namespace {

using nlohmann::json;

bool read_string(const json& obj, const char* key, std::string& out,
                 std::vector<std::string>& issues, bool required = true) {
  if (!obj.contains(key)) {
    if (required) issues.push_back(std::string("missing field '") + key + "'");
    return false;
  }
  if (!obj[key].is_string()) {
    issues.push_back(std::string("field '") + key + "' must be a string");
    return false;
  }
  out = obj[key].get<std::string>();
  return true;
}

bool read_number(const json& obj, const char* key, double& out,
                 std::vector<std::string>& issues, bool required = true) {
  if (!obj.contains(key)) {
    if (required) issues.push_back(std::string("missing field '") + key + "'");
    return false;
  }
  if (!obj[key].is_number()) {
    issues.push_back(std::string("field '") + key + "' must be a number");
    return false;
  }
  out = obj[key].get<double>();
  return true;
}

bool read_bool(const json& obj, const char* key, bool& out,
               std::vector<std::string>& issues) {
  if (!obj.contains(key)) {
    issues.push_back(std::string("missing field '") + key + "'");
    return false;
  }
  if (!obj[key].is_boolean()) {
    issues.push_back(std::string("field '") + key + "' must be a boolean");
    return false;
  }
  out = obj[key].get<bool>();
  return true;
}

bool read_int(const json& obj, const char* key, int& out,
              std::vector<std::string>& issues, bool required = true) {
  if (!obj.contains(key)) {
    if (required) issues.push_back(std::string("missing field '") + key + "'");
    return false;
  }
  if (!obj[key].is_number_integer()) {
    issues.push_back(std::string("field '") + key + "' must be an integer");
    return false;
  }
  out = obj[key].get<int>();
  return true;
}

int read_hint(const json& obj, std::vector<std::string>& issues) {
  int hint = 0;
  if (obj.contains("direction_hint")) {
    if (read_int(obj, "direction_hint", hint, issues) &&
        (hint < -1 || hint > 1)) {
      issues.push_back("field 'direction_hint' must be -1, 0, or 1");
      hint = 0;
    }
  }
  return hint;
}

StructuredReply parse_action(const json& obj, std::vector<std::string>& issues) {
  ActionReply reply;
  read_bool(obj, "feasible", reply.feasible, issues);
  read_string(obj, "action", reply.action, issues);
  read_string(obj, "reason", reply.reason, issues, /*required=*/false);
  if (reply.feasible && reply.action.empty()) {
    issues.push_back("feasible replies need a nonempty 'action'");
  }
  return reply;
}

StructuredReply parse_plan(const json& obj, std::vector<std::string>& issues) {
  PlanReply reply;
  if (!obj.contains("steps") || !obj["steps"].is_array()) {
    issues.push_back("missing array field 'steps'");
    return reply;
  }
  for (const json& item : obj["steps"]) {
    if (!item.is_object()) {
      issues.push_back("each step must be an object");
      continue;
    }
    PlanStepSpec step;
    read_string(item, "description", step.description, issues);
    read_number(item, "start_time", step.start_time, issues);
    read_number(item, "end_time", step.end_time, issues);
    reply.steps.push_back(std::move(step));
  }
  // An empty list is schema-conformant; plan emptiness is judged downstream.
  return reply;
}

StructuredReply parse_commands(const json& obj,
                               std::vector<std::string>& issues) {
  CommandsReply reply;
  if (!obj.contains("commands") || !obj["commands"].is_array()) {
    issues.push_back("missing array field 'commands'");
    return reply;
  }
  for (const json& item : obj["commands"]) {
    reply.commands.push_back(command_from_json(item, issues));
  }
  if (reply.commands.empty()) issues.push_back("'commands' must be nonempty");
  reply.direction_hint = read_hint(obj, issues);
  return reply;
}

StructuredReply parse_candidates(const json& obj,
                                 std::vector<std::string>& issues) {
  CandidatesReply reply;
  if (!obj.contains("joints") || !obj["joints"].is_array()) {
    issues.push_back("missing array field 'joints'");
    return reply;
  }
  for (const json& item : obj["joints"]) {
    if (!item.is_string()) {
      issues.push_back("'joints' entries must be strings");
      continue;
    }
    reply.joints.push_back(item.get<std::string>());
  }
  if (reply.joints.empty()) issues.push_back("'joints' must be nonempty");
  return reply;
}

StructuredReply parse_evaluation(const json& obj,
                                 std::vector<std::string>& issues) {
  EvaluationReply reply;
  read_bool(obj, "pass", reply.pass, issues);
  read_string(obj, "critique", reply.critique, issues, /*required=*/false);
  if (!reply.pass && reply.critique.empty()) {
    issues.push_back("failing evaluations need a nonempty 'critique'");
  }
  return reply;
}

StructuredReply parse_pinpoint(const json& obj,
                               std::vector<std::string>& issues) {
  PinpointReply reply;
  // Accepts a single index or a list; bounds are the caller's business.
  if (obj.contains("step_indices")) {
    if (!obj["step_indices"].is_array()) {
      issues.push_back("field 'step_indices' must be an array");
    } else {
      for (const json& item : obj["step_indices"]) {
        if (!item.is_number_integer()) {
          issues.push_back("'step_indices' entries must be integers");
          continue;
        }
        reply.step_indices.push_back(item.get<int>());
      }
    }
  } else {
    int single = 0;
    if (read_int(obj, "step_index", single, issues)) {
      reply.step_indices.push_back(single);
    }
  }
  if (reply.step_indices.empty() && issues.empty()) {
    issues.push_back("'step_indices' must name at least one step");
  }
  read_string(obj, "reason", reply.reason, issues, /*required=*/false);
  return reply;
}

StructuredReply parse_proposal(const json& obj,
                               std::vector<std::string>& issues) {
  ProposalReply reply;
  std::string kind;
  if (read_string(obj, "kind", kind, issues)) {
    if (kind == "adjust") {
      reply.kind = ProposalKind::kAdjust;
    } else if (kind == "delete") {
      reply.kind = ProposalKind::kDelete;
    } else if (kind == "add") {
      reply.kind = ProposalKind::kAdd;
    } else {
      issues.push_back("'kind' must be adjust, delete, or add");
    }
  }
  read_int(obj, "step_index", reply.step_index, issues);
  if (reply.kind == ProposalKind::kDelete) {
    if (read_string(obj, "joint", reply.command.joint, issues) &&
        reply.command.joint.empty()) {
      issues.push_back("delete proposals need a nonempty 'joint'");
    }
  } else {
    if (!obj.contains("command") || !obj["command"].is_object()) {
      issues.push_back("adjust/add proposals need an object field 'command'");
    } else {
      reply.command = command_from_json(obj["command"], issues);
    }
  }
  reply.direction_hint = read_hint(obj, issues);
  read_string(obj, "rationale", reply.rationale, issues, /*required=*/false);
  return reply;
}

StructuredReply parse_score(const json& obj, std::vector<std::string>& issues) {
  ScoreReply reply;
  if (read_int(obj, "reward", reply.reward, issues) &&
      (reply.reward < 1 || reply.reward > 10)) {
    issues.push_back("'reward' must be between 1 and 10");
  }
  read_string(obj, "rationale", reply.rationale, issues, /*required=*/false);
  return reply;
}

}  // namespace

std::string strip_code_fences(const std::string& text) {
  size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  size_t end = text.find_last_not_of(" \t\r\n") + 1;
  std::string body = text.substr(begin, end - begin);
  if (body.rfind("```", 0) == 0) {
    size_t line_end = body.find('\n');
    size_t close = body.rfind("```");
    if (line_end != std::string::npos && close > line_end) {
      body = body.substr(line_end + 1, close - line_end - 1);
      size_t b = body.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return {};
      size_t e = body.find_last_not_of(" \t\r\n") + 1;
      body = body.substr(b, e - b);
    }
  }
  return body;
}

pipeline::JointCommand command_from_json(const nlohmann::json& value,
                                         std::vector<std::string>& issues) {
  pipeline::JointCommand cmd;
  if (!value.is_object()) {
    issues.push_back("each command must be an object");
    return cmd;
  }
  std::string type;
  if (read_string(value, "type", type, issues)) {
    if (type == "target") {
      cmd.kind = pipeline::CommandKind::kSetTarget;
    } else if (type == "oscillate") {
      cmd.kind = pipeline::CommandKind::kOscillate;
    } else {
      issues.push_back("command 'type' must be target or oscillate");
    }
  }
  if (read_string(value, "joint", cmd.joint, issues) && cmd.joint.empty()) {
    issues.push_back("command 'joint' must be nonempty");
  }
  if (cmd.kind == pipeline::CommandKind::kSetTarget) {
    read_number(value, "value", cmd.value, issues);
  } else {
    read_number(value, "center", cmd.center, issues);
    if (read_number(value, "amplitude", cmd.amplitude, issues) &&
        cmd.amplitude < 0.0) {
      issues.push_back("'amplitude' must be nonnegative");
    }
    if (value.contains("cycles")) {
      if (read_number(value, "cycles", cmd.cycles, issues) &&
          !(cmd.cycles > 0.0)) {
        issues.push_back("'cycles' must be positive");
      }
    }
  }
  return cmd;
}

nlohmann::json command_to_json(const pipeline::JointCommand& command) {
  json out;
  out["joint"] = command.joint;
  if (command.kind == pipeline::CommandKind::kSetTarget) {
    out["type"] = "target";
    out["value"] = command.value;
  } else {
    out["type"] = "oscillate";
    out["center"] = command.center;
    out["amplitude"] = command.amplitude;
    out["cycles"] = command.cycles;
  }
  return out;
}

StructuredReply parse_reply(ReplySchema schema, const std::string& raw) {
  std::string body = strip_code_fences(raw);
  std::vector<std::string> issues;
  json obj = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw SchemaViolationError({"reply is not a JSON object"}, {raw});
  }

  StructuredReply reply;
  switch (schema) {
    case ReplySchema::kAction: reply = parse_action(obj, issues); break;
    case ReplySchema::kPlan: reply = parse_plan(obj, issues); break;
    case ReplySchema::kCommands: reply = parse_commands(obj, issues); break;
    case ReplySchema::kCandidates: reply = parse_candidates(obj, issues); break;
    case ReplySchema::kEvaluation: reply = parse_evaluation(obj, issues); break;
    case ReplySchema::kPinpoint: reply = parse_pinpoint(obj, issues); break;
    case ReplySchema::kProposal: reply = parse_proposal(obj, issues); break;
    case ReplySchema::kScore: reply = parse_score(obj, issues); break;
  }
  if (!issues.empty()) throw SchemaViolationError(issues, {raw});
  return reply;
}

nlohmann::json reply_to_json(const StructuredReply& reply) {
  json out;
  std::visit(
      [&out](const auto& value) {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, ActionReply>) {
          out["feasible"] = value.feasible;
          out["action"] = value.action;
          out["reason"] = value.reason;
        } else if constexpr (std::is_same_v<T, PlanReply>) {
          out["steps"] = json::array();
          for (const PlanStepSpec& step : value.steps) {
            out["steps"].push_back({{"description", step.description},
                                    {"start_time", step.start_time},
                                    {"end_time", step.end_time}});
          }
        } else if constexpr (std::is_same_v<T, CommandsReply>) {
          out["commands"] = json::array();
          for (const auto& cmd : value.commands) {
            out["commands"].push_back(command_to_json(cmd));
          }
          out["direction_hint"] = value.direction_hint;
        } else if constexpr (std::is_same_v<T, CandidatesReply>) {
          out["joints"] = value.joints;
        } else if constexpr (std::is_same_v<T, EvaluationReply>) {
          out["pass"] = value.pass;
          out["critique"] = value.critique;
        } else if constexpr (std::is_same_v<T, PinpointReply>) {
          out["step_indices"] = value.step_indices;
          out["reason"] = value.reason;
        } else if constexpr (std::is_same_v<T, ProposalReply>) {
          out["kind"] = to_string(value.kind);
          out["step_index"] = value.step_index;
          if (value.kind == ProposalKind::kDelete) {
            out["joint"] = value.command.joint;
          } else {
            out["command"] = command_to_json(value.command);
          }
          out["direction_hint"] = value.direction_hint;
          out["rationale"] = value.rationale;
        } else if constexpr (std::is_same_v<T, ScoreReply>) {
          out["reward"] = value.reward;
          out["rationale"] = value.rationale;
        }
      },
      reply);
  return out;
}

const char* schema_contract(ReplySchema schema) {
  switch (schema) {
    case ReplySchema::kAction:
      return R"({"feasible": <bool>, "action": <string>, "reason": <string>})";
    case ReplySchema::kPlan:
      return R"({"steps": [{"description": <string>, "start_time": <seconds>, "end_time": <seconds>}, ...]})";
    case ReplySchema::kCommands:
      return R"({"commands": [{"type": "target", "joint": <string>, "value": <number>} | {"type": "oscillate", "joint": <string>, "center": <number>, "amplitude": <number>, "cycles": <number>}, ...], "direction_hint": <-1|0|1>})";
    case ReplySchema::kCandidates:
      return R"({"joints": [<string>, ...]})";
    case ReplySchema::kEvaluation:
      return R"({"pass": <bool>, "critique": <string>})";
    case ReplySchema::kPinpoint:
      return R"({"step_indices": [<int>, ...], "reason": <string>})";
    case ReplySchema::kProposal:
      return R"({"kind": "adjust"|"delete"|"add", "step_index": <int>, "command": <command object; delete passes "joint": <string> instead>, "direction_hint": <-1|0|1>, "rationale": <string>})";
    case ReplySchema::kScore:
      return R"({"reward": <int 1..10>, "rationale": <string>})";
  }
  return "{}";
}

std::string base64_encode(const std::vector<uint8_t>& bytes) {
  static const char* kAlphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    uint32_t n = bytes[i] << 16 | bytes[i + 1] << 8 | bytes[i + 2];
    out.push_back(kAlphabet[n >> 18 & 63]);
    out.push_back(kAlphabet[n >> 12 & 63]);
    out.push_back(kAlphabet[n >> 6 & 63]);
    out.push_back(kAlphabet[n & 63]);
  }
  if (i + 1 == bytes.size()) {
    uint32_t n = bytes[i] << 16;
    out.push_back(kAlphabet[n >> 18 & 63]);
    out.push_back(kAlphabet[n >> 12 & 63]);
    out += "==";
  } else if (i + 2 == bytes.size()) {
    uint32_t n = bytes[i] << 16 | bytes[i + 1] << 8;
    out.push_back(kAlphabet[n >> 18 & 63]);
    out.push_back(kAlphabet[n >> 12 & 63]);
    out.push_back(kAlphabet[n >> 6 & 63]);
    out.push_back('=');
  }
  return out;
}

std::string request_hash(const CriticRequest& request) {
  uint64_t hash = 1469598103934665603ULL;  // FNV-1a offset basis
  auto mix = [&hash](std::string_view text) {
    for (unsigned char c : text) {
      hash ^= c;
      hash *= 1099511628211ULL;  // FNV prime
    }
    hash ^= 0x1F;  // field separator
    hash *= 1099511628211ULL;
  };
  mix(role_name(request.role));
  mix(schema_name(request.schema));
  for (const TextSection& section : request.sections) {
    mix(section.title);
    mix(section.body);
  }
  for (const kinesim::LabeledImage& image : request.images) {
    mix(image.label);
  }
  static const char* kHex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

}  // namespace crisp::critic
