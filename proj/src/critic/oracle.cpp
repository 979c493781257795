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

#include "crisp/critic/oracle.hpp"

#include <cmath>

#include "crisp/canonical.hpp"
#include "crisp/errors.hpp"
#include "json.hpp"

namespace crisp::critic {
namespace {

constexpr double kDirectionEps = 1e-9;

// Requests meant for the oracle carry one machine readable section.
nlohmann::json find_query(const CriticRequest& request) {
  for (const TextSection& section : request.sections) {
    if (section.title != "query") continue;
    nlohmann::json obj =
        nlohmann::json::parse(section.body, nullptr, /*allow_exceptions=*/false);
    if (obj.is_object()) return obj;
  }
  throw Error(ErrorKind::kOracleUnsupportedRole,
              "request lacks the machine readable 'query' section");
}

}  // namespace

int score_candidate(double candidate, double base, double target,
                    double limit_min, double limit_max) {
  double span = limit_max - limit_min;
  if (!(span > 0.0)) {
    throw Error(ErrorKind::kDegenerateRange,
                "score_candidate needs limit_min < limit_max");
  }
  double e = std::abs(candidate - target) / span;
  if (e <= 0.05) return 9;
  if (e <= 0.15) return 8;

  double want = target - base;
  double got = candidate - base;
  if (std::abs(want) <= kDirectionEps) return 3;  // was already on target
  if (std::abs(got) <= kDirectionEps) return 3;   // did not move
  if ((want > 0.0) == (got > 0.0)) return e <= 0.4 ? 6 : 5;
  return 2;
}

OracleBackend::OracleBackend(const mjcf::RobotModel& model,
                             std::map<std::string, double> targets)
    : model_(model), targets_(std::move(targets)) {
  for (const auto& [joint, value] : targets_) {
    if (model_.joint_index(joint) < 0) {
      throw Error(ErrorKind::kModelMismatch,
                  "oracle target names unknown joint '" + joint + "'");
    }
    (void)value;
  }
}

StructuredReply OracleBackend::complete(const CriticRequest& request) {
  switch (request.role) {
    case Role::kRewardScorer:
      return score(request);
    case Role::kRefinementProposer:
      return propose(request);
    default:
      throw Error(ErrorKind::kOracleUnsupportedRole,
                  std::string("oracle cannot play role ") +
                      role_name(request.role));
  }
}

StructuredReply OracleBackend::score(const CriticRequest& request) const {
  nlohmann::json query = find_query(request);
  if (!query.contains("joint") || !query["joint"].is_string() ||
      !query.contains("candidate") || !query["candidate"].is_number() ||
      !query.contains("base") || !query["base"].is_number()) {
    throw Error(ErrorKind::kOracleUnsupportedRole,
                "score query needs {joint, candidate, base}");
  }
  std::string joint = query["joint"].get<std::string>();
  auto target = targets_.find(joint);
  if (target == targets_.end()) {
    throw Error(ErrorKind::kModelMismatch,
                "oracle has no target for joint '" + joint + "'");
  }
  const mjcf::JointDescriptor& descriptor = model_.joint(joint);
  ScoreReply reply;
  reply.reward = score_candidate(query["candidate"].get<double>(),
                                 query["base"].get<double>(), target->second,
                                 descriptor.limit_min, descriptor.limit_max);
  reply.rationale = "target " + format_double(target->second) + ", miss " +
                    format_double(std::abs(query["candidate"].get<double>() -
                                           target->second));
  return reply;
}

StructuredReply OracleBackend::propose(const CriticRequest& request) const {
  nlohmann::json query = find_query(request);
  if (!query.contains("joint") || !query["joint"].is_string() ||
      !query.contains("step_index") ||
      !query["step_index"].is_number_integer() ||
      !query.contains("current") || !query["current"].is_number()) {
    throw Error(ErrorKind::kOracleUnsupportedRole,
                "proposal query needs {joint, step_index, current}");
  }
  std::string joint = query["joint"].get<std::string>();
  auto target = targets_.find(joint);
  if (target == targets_.end()) {
    throw Error(ErrorKind::kModelMismatch,
                "oracle has no target for joint '" + joint + "'");
  }

  double current = query["current"].get<double>();
  ProposalReply reply;
  reply.kind = ProposalKind::kAdjust;
  reply.step_index = query["step_index"].get<int>();
  reply.command.kind = pipeline::CommandKind::kSetTarget;
  reply.command.joint = joint;
  reply.command.value = target->second;
  double miss = target->second - current;
  reply.direction_hint = miss > kDirectionEps ? 1 : (miss < -kDirectionEps ? -1 : 0);
  reply.rationale = "move " + joint + " toward " + format_double(target->second);
  return reply;
}

}  // namespace crisp::critic
