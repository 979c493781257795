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

#ifndef CRISP_CRITIC_TYPES_HPP_
#define CRISP_CRITIC_TYPES_HPP_

#include <string>
#include <variant>
#include <vector>

#include "crisp/kinesim/image.hpp"
#include "crisp/pipeline/types.hpp"

namespace crisp::critic {

// Conversation roles the pipeline plays against the critic. Each role has a
// fixed reply schema (code generation admits two, selected per request).
enum class Role {
  kActionTranslator,
  kPlanDecomposer,
  kCodeGenerator,
  kHolisticEvaluator,
  kStepPinpointer,
  kRefinementProposer,
  kRewardScorer,
};

const char* role_name(Role role);

enum class ReplySchema {
  kAction,
  kPlan,
  kCommands,
  kCandidates,
  kEvaluation,
  kPinpoint,
  kProposal,
  kScore,
};

const char* schema_name(ReplySchema schema);

struct ActionReply {
  bool feasible = false;
  std::string action;  // normalized action phrase
  std::string reason;
};

struct PlanStepSpec {
  std::string description;
  double start_time = 0.0;
  double end_time = 0.0;
};

struct PlanReply {
  std::vector<PlanStepSpec> steps;
};

// Commands for one step. The first command is the primary motion; the
// direction hint orients refinement sampling (+1 increase, -1 decrease,
// 0 unknown).
struct CommandsReply {
  std::vector<pipeline::JointCommand> commands;
  int direction_hint = 0;
};

struct CandidatesReply {
  std::vector<std::string> joints;
};

struct EvaluationReply {
  bool pass = false;
  std::string critique;
};

// The critic may volunteer several suspect steps; the pipeline keeps the
// earliest valid one. Plan steps are numbered from 1.
struct PinpointReply {
  std::vector<int> step_indices;
  std::string reason;
};

enum class ProposalKind { kAdjust, kDelete, kAdd };

const char* to_string(ProposalKind kind);

struct ProposalReply {
  ProposalKind kind = ProposalKind::kAdjust;
  int step_index = 0;
  pipeline::JointCommand command;  // for kDelete only the joint name is set
  int direction_hint = 0;
  std::string rationale;
};

struct ScoreReply {
  int reward = 0;  // 1..10
  std::string rationale;
};

using StructuredReply =
    std::variant<ActionReply, PlanReply, CommandsReply, CandidatesReply,
                 EvaluationReply, PinpointReply, ProposalReply, ScoreReply>;

struct TextSection {
  std::string title;
  std::string body;
};

// One critic call. Text sections and image labels identify the request;
// pixels ride along for backends that can see.
struct CriticRequest {
  Role role = Role::kActionTranslator;
  ReplySchema schema = ReplySchema::kAction;
  std::vector<TextSection> sections;
  std::vector<kinesim::LabeledImage> images;
};

class CriticBackend {
 public:
  virtual ~CriticBackend() = default;
  virtual StructuredReply complete(const CriticRequest& request) = 0;
  virtual std::string name() const = 0;
};

}  // namespace crisp::critic

#endif  // CRISP_CRITIC_TYPES_HPP_
