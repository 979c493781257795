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

#include "crisp/artifact/artifact.hpp"

#include <fstream>
#include <iterator>
#include <string>
#include <system_error>
#include <utility>

#include "crisp/canonical.hpp"
#include "crisp/critic/wire.hpp"
#include "crisp/errors.hpp"
#include "json.hpp"

namespace crisp::artifact {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorKind::kIo, what);
}

// Deterministic emitter: nlohmann objects iterate in key order already, so
// the only work is pinning float text and whitespace.
void emit(const json& value, std::string& out, int depth) {
  switch (value.type()) {
    case json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::string pad(2 * (depth + 1), ' ');
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, depth + 1);
      }
      out += '\n';
      out.append(2 * depth, ' ');
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      std::string pad(2 * (depth + 1), ' ');
      bool first = true;
      for (const json& item : value) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        emit(item, out, depth + 1);
      }
      out += '\n';
      out.append(2 * depth, ' ');
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(value.get<double>());
      return;
    default:
      out += value.dump();
      return;
  }
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    fail(std::string("artifact is missing field '") + key + "'");
  }
  return *it;
}

std::string get_string(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) fail(std::string("artifact field '") + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_boolean()) fail(std::string("artifact field '") + key + "' must be a boolean");
  return v.get<bool>();
}

int get_int(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    fail(std::string("artifact field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

std::uint64_t get_u64(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail(std::string("artifact field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double get_double(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) fail(std::string("artifact field '") + key + "' must be a number");
  return v.get<double>();
}

const json& get_array(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_array()) fail(std::string("artifact field '") + key + "' must be an array");
  return v;
}

const json& get_object(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_object()) fail(std::string("artifact field '") + key + "' must be an object");
  return v;
}

ArtifactStatus status_from_string(const std::string& text) {
  if (text == "in_progress") return ArtifactStatus::kInProgress;
  if (text == "accepted") return ArtifactStatus::kAccepted;
  if (text == "abandoned") return ArtifactStatus::kAbandoned;
  fail("unknown artifact status '" + text + "'");
}

ras::RefinementStatus refinement_status_from_string(const std::string& text) {
  if (text == "success") return ras::RefinementStatus::kSuccess;
  if (text == "joint_failure") return ras::RefinementStatus::kJointFailure;
  if (text == "budget_exhausted") return ras::RefinementStatus::kBudgetExhausted;
  fail("unknown refinement status '" + text + "'");
}

json record_to_json(const ras::CandidateSet& record) {
  json out;
  out["t"] = record.iteration;
  out["sigma"] = record.sigma;
  out["values"] = record.values;
  out["rewards"] = record.rewards;
  out["v_star"] = record.v_star;
  out["reward_star"] = record.reward_star;
  return out;
}

ras::CandidateSet record_from_json(const json& obj) {
  ras::CandidateSet record;
  record.iteration = get_int(obj, "t");
  record.sigma = get_double(obj, "sigma");
  for (const json& v : get_array(obj, "values")) {
    if (!v.is_number()) fail("candidate values must be numbers");
    record.values.push_back(v.get<double>());
  }
  for (const json& v : get_array(obj, "rewards")) {
    if (!v.is_number_integer()) fail("candidate rewards must be integers");
    record.rewards.push_back(v.get<int>());
  }
  if (record.values.empty() || record.rewards.size() != record.values.size()) {
    fail("candidate record needs matching nonempty values and rewards");
  }
  record.v_star = get_double(obj, "v_star");
  record.reward_star = get_int(obj, "reward_star");
  return record;
}

// The two invariants a reader may rely on. Checked before bytes leave and
// after bytes arrive, so no conforming writer can strand a reader.
void validate(const BehaviorArtifact& artifact) {
  if (artifact.proposals.size() != artifact.outcomes.size()) {
    fail("artifact has " + std::to_string(artifact.proposals.size()) +
         " proposals but " + std::to_string(artifact.outcomes.size()) +
         " outcomes; they must be index-aligned");
  }
  if (artifact.status == ArtifactStatus::kAccepted &&
      (artifact.critiques.empty() || !artifact.critiques.back().pass)) {
    fail("accepted artifact requires a passing final critique");
  }
}

}  // namespace

const char* to_string(ArtifactStatus status) {
  switch (status) {
    case ArtifactStatus::kInProgress: return "in_progress";
    case ArtifactStatus::kAccepted: return "accepted";
    case ArtifactStatus::kAbandoned: return "abandoned";
  }
  return "unknown";
}

StepLog& append_step_record(StepLog& log, const ras::CandidateSet& record) {
  int expected = log.records.empty() ? 0 : log.records.back().iteration + 1;
  if (record.iteration != expected) {
    throw Error(ErrorKind::kNonMonotonicIteration,
                "step log expects iteration " + std::to_string(expected) +
                    ", got " + std::to_string(record.iteration));
  }
  log.records.push_back(record);
  return log;
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;  // FNV-1a 64 offset basis
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  static const char* kHex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

std::string serialize_artifact(const BehaviorArtifact& artifact) {
  validate(artifact);
  json root;
  root["schema_version"] = kSchemaVersion;
  root["context"] = artifact.context;
  root["robot"] = {{"name", artifact.model_name},
                   {"content_hash", artifact.model_hash}};

  json plan;
  plan["action"] = artifact.plan.action;
  plan["steps"] = json::array();
  for (const pipeline::BehaviorStep& step : artifact.plan.steps) {
    plan["steps"].push_back({{"index", step.index},
                             {"description", step.description},
                             {"start_time", step.start_time},
                             {"end_time", step.end_time}});
  }
  root["plan"] = std::move(plan);

  root["sequence"] = json::array();
  for (const pipeline::StepCommands& step : artifact.sequence.steps) {
    json commands = json::array();
    for (const pipeline::JointCommand& command : step.commands) {
      commands.push_back(critic::command_to_json(command));
    }
    root["sequence"].push_back(
        {{"step_index", step.step_index}, {"commands", std::move(commands)}});
  }

  root["critiques"] = json::array();
  for (const Critique& critique : artifact.critiques) {
    root["critiques"].push_back(
        {{"pass", critique.pass}, {"text", critique.text}});
  }

  root["proposals"] = json::array();
  for (const critic::ProposalReply& proposal : artifact.proposals) {
    root["proposals"].push_back(
        critic::reply_to_json(critic::StructuredReply(proposal)));
  }

  root["outcomes"] = json::array();
  for (const ProposalOutcome& outcome : artifact.outcomes) {
    root["outcomes"].push_back({{"status", to_string(outcome.status)},
                                {"searched", outcome.searched},
                                {"v_final", outcome.v_final},
                                {"reward_final", outcome.reward_final},
                                {"iterations_used", outcome.iterations_used}});
  }

  root["step_logs"] = json::array();
  for (const StepLog& log : artifact.step_logs) {
    json records = json::array();
    for (const ras::CandidateSet& record : log.records) {
      records.push_back(record_to_json(record));
    }
    root["step_logs"].push_back({{"step_index", log.step_index},
                                 {"records", std::move(records)},
                                 {"blacklist", log.blacklist}});
  }

  root["status"] = to_string(artifact.status);
  root["ras_config"] = {
      {"tau", artifact.config.tau},
      {"sigma_base", artifact.config.sigma_base},
      {"alpha", artifact.config.alpha},
      {"beta", artifact.config.beta},
      {"max_iterations", artifact.config.max_iterations},
      {"candidates_per_iteration", artifact.config.candidates_per_iteration},
      {"low_reward_streak_limit", artifact.config.low_reward_streak_limit},
      {"rng_seed", artifact.config.rng_seed}};
  root["seed"] = artifact.seed;

  std::string out;
  emit(root, out, 0);
  out += '\n';
  return out;
}

BehaviorArtifact parse_artifact(const std::string& text) {
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_object()) {
    fail("artifact is not a JSON object");
  }
  int version = get_int(root, "schema_version");
  if (version != kSchemaVersion) {
    throw Error(ErrorKind::kSchemaVersionMismatch,
                "artifact carries schema_version " + std::to_string(version) +
                    "; this build reads " + std::to_string(kSchemaVersion));
  }

  BehaviorArtifact artifact;
  artifact.context = get_string(root, "context");
  const json& robot = get_object(root, "robot");
  artifact.model_name = get_string(robot, "name");
  artifact.model_hash = get_string(robot, "content_hash");

  const json& plan = get_object(root, "plan");
  artifact.plan.action = get_string(plan, "action");
  for (const json& step : get_array(plan, "steps")) {
    pipeline::BehaviorStep out;
    out.index = get_int(step, "index");
    out.description = get_string(step, "description");
    out.start_time = get_double(step, "start_time");
    out.end_time = get_double(step, "end_time");
    artifact.plan.steps.push_back(std::move(out));
  }

  for (const json& step : get_array(root, "sequence")) {
    pipeline::StepCommands out;
    out.step_index = get_int(step, "step_index");
    for (const json& command : get_array(step, "commands")) {
      std::vector<std::string> issues;
      out.commands.push_back(critic::command_from_json(command, issues));
      if (!issues.empty()) fail("artifact command is malformed: " + issues.front());
    }
    artifact.sequence.steps.push_back(std::move(out));
  }

  for (const json& critique : get_array(root, "critiques")) {
    artifact.critiques.push_back(
        {get_bool(critique, "pass"), get_string(critique, "text")});
  }

  for (const json& proposal : get_array(root, "proposals")) {
    try {
      artifact.proposals.push_back(std::get<critic::ProposalReply>(
          critic::parse_reply(critic::ReplySchema::kProposal, proposal.dump())));
    } catch (const SchemaViolationError& e) {
      fail(std::string("artifact proposal is malformed: ") + e.what());
    }
  }

  for (const json& outcome : get_array(root, "outcomes")) {
    ProposalOutcome out;
    out.status = refinement_status_from_string(get_string(outcome, "status"));
    out.searched = get_bool(outcome, "searched");
    out.v_final = get_double(outcome, "v_final");
    out.reward_final = get_int(outcome, "reward_final");
    out.iterations_used = get_int(outcome, "iterations_used");
    artifact.outcomes.push_back(out);
  }

  for (const json& log : get_array(root, "step_logs")) {
    StepLog out;
    out.step_index = get_int(log, "step_index");
    int expected = 0;
    for (const json& record : get_array(log, "records")) {
      ras::CandidateSet set = record_from_json(record);
      if (set.iteration != expected) {
        fail("step log iterations must run 0, 1, 2, ... without gaps");
      }
      ++expected;
      out.records.push_back(std::move(set));
    }
    for (const json& joint : get_array(log, "blacklist")) {
      if (!joint.is_string()) fail("blacklist entries must be joint names");
      out.blacklist.push_back(joint.get<std::string>());
    }
    artifact.step_logs.push_back(std::move(out));
  }

  artifact.status = status_from_string(get_string(root, "status"));
  const json& config = get_object(root, "ras_config");
  artifact.config.tau = get_int(config, "tau");
  artifact.config.sigma_base = get_double(config, "sigma_base");
  artifact.config.alpha = get_double(config, "alpha");
  artifact.config.beta = get_double(config, "beta");
  artifact.config.max_iterations = get_int(config, "max_iterations");
  artifact.config.candidates_per_iteration =
      get_int(config, "candidates_per_iteration");
  artifact.config.low_reward_streak_limit =
      get_int(config, "low_reward_streak_limit");
  artifact.config.rng_seed = get_u64(config, "rng_seed");
  artifact.seed = get_u64(root, "seed");

  validate(artifact);
  return artifact;
}

void write_artifact(const BehaviorArtifact& artifact,
                    const std::filesystem::path& path) {
  std::string text = serialize_artifact(artifact);
  std::error_code ec;
  if (!path.parent_path().empty()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) fail("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    fail("cannot move artifact into " + path.string() + ": " + ec.message());
  }
}

BehaviorArtifact read_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string() + " for reading");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) fail("cannot read " + path.string());
  return parse_artifact(text);
}

}  // namespace crisp::artifact
