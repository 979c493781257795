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

#include "crisp/critic/types.hpp"

namespace crisp::critic {

const char* role_name(Role role) {
  switch (role) {
    case Role::kActionTranslator: return "translator";
    case Role::kPlanDecomposer: return "planner";
    case Role::kCodeGenerator: return "code_generator";
    case Role::kHolisticEvaluator: return "holistic_evaluator";
    case Role::kStepPinpointer: return "step_pinpointer";
    case Role::kRefinementProposer: return "refinement_proposer";
    case Role::kRewardScorer: return "reward_scorer";
  }
  return "unknown";
}

const char* schema_name(ReplySchema schema) {
  switch (schema) {
    case ReplySchema::kAction: return "action";
    case ReplySchema::kPlan: return "plan";
    case ReplySchema::kCommands: return "commands";
    case ReplySchema::kCandidates: return "candidates";
    case ReplySchema::kEvaluation: return "evaluation";
    case ReplySchema::kPinpoint: return "pinpoint";
    case ReplySchema::kProposal: return "proposal";
    case ReplySchema::kScore: return "score";
  }
  return "unknown";
}

const char* to_string(ProposalKind kind) {
  switch (kind) {
    case ProposalKind::kAdjust: return "adjust";
    case ProposalKind::kDelete: return "delete";
    case ProposalKind::kAdd: return "add";
  }
  return "unknown";
}

}  // namespace crisp::critic
