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

#ifndef CRISP_PIPELINE_STAGES_HPP_
#define CRISP_PIPELINE_STAGES_HPP_

#include <string>
#include <vector>

#include "crisp/critic/types.hpp"
#include "crisp/kinesim/fk.hpp"
#include "crisp/kinesim/probes.hpp"
#include "crisp/mjcf/model.hpp"
#include "crisp/pipeline/types.hpp"

namespace crisp::pipeline {

// The semantic stages. Each builds one critic request from local facts and
// validates the reply; whatever the critic says, stored commands always end
// up inside joint limits and plans always satisfy their invariants.

// Normalizes a free-form instruction into an action phrase the robot can
// execute. Raises CapabilityMismatch when the critic marks the instruction
// infeasible or when the returned phrase names limbs (by the fixed limb
// vocabulary) that match no joint group, joint, or body of the model.
critic::ActionReply translate_action(critic::CriticBackend& backend,
                                     const mjcf::RobotModel& model,
                                     const std::string& instruction);

// Splits an action into timed steps numbered from 1 with ordered,
// non-overlapping windows. Structural violations earn one corrective
// reprompt; a second offense raises SchemaViolation (EmptyPlan when the
// critic insists on zero steps).
BehaviorPlan decompose_steps(critic::CriticBackend& backend,
                             const mjcf::RobotModel& model,
                             const std::string& action);

// Asks which joints could plausibly realize one step, showing the probe
// sheets. Unknown names are dropped; nothing left raises NoCandidateJoints.
std::vector<std::string> identify_candidate_joints(
    critic::CriticBackend& backend, const mjcf::RobotModel& model,
    const BehaviorStep& step, const std::vector<kinesim::JointProbe>& probes);

struct SelectedCommands {
  StepCommands commands;
  int direction_hint = 0;

  const std::string& primary_joint() const {
    return commands.commands.front().joint;
  }
};

// Turns a step plus candidate list into concrete commands, showing only the
// candidates' probe images. Commands naming joints absent from the model
// raise UnknownJoint; values are clipped and oscillations shrunk to fit.
SelectedCommands select_joint_and_value(
    critic::CriticBackend& backend, const mjcf::RobotModel& model,
    const BehaviorStep& step, const std::vector<std::string>& candidates,
    const kinesim::Pose& entry_pose,
    const std::vector<kinesim::JointProbe>& probes);

// Whole-behavior verdict over the captured frames. An empty frame list is a
// precondition failure (EmptyPlan) before any critic call.
critic::EvaluationReply evaluate_holistic(
    critic::CriticBackend& backend, const std::string& action,
    const BehaviorPlan& plan, const std::vector<kinesim::LabeledImage>& frames);

// Locates the erroneous step given a failing critique. The critic may name
// several; the minimum in-range index wins. No index in range raises
// IndexOutOfRange.
int pinpoint_erroneous_step(critic::CriticBackend& backend,
                            const std::string& action,
                            const BehaviorPlan& plan,
                            const std::string& critique);

// Requests a command repair for the pinpointed step. Adjust and Delete must
// reference a joint already commanded in that step; Add must name a model
// joint not yet commanded there. Violations raise InvalidProposal.
critic::ProposalReply propose_refinement(
    critic::CriticBackend& backend, const mjcf::RobotModel& model,
    const std::string& action, const BehaviorPlan& plan,
    const CommandSequence& sequence, int step_index,
    const std::string& critique,
    const std::vector<kinesim::LabeledImage>& frames);

// Command-list surgery for an accepted proposal: Adjust swaps the step's
// command for that joint in place, Delete removes it (the list may become
// empty), Add appends. Values are clipped on the way in. The plan itself is
// untouched. The same InvalidProposal rules as propose_refinement apply.
void apply_proposal(const mjcf::RobotModel& model,
                    CommandSequence& sequence,
                    const critic::ProposalReply& proposal);

// Deterministic prompt renderings, shared so fixtures can pin hashes.
std::string plan_text(const BehaviorPlan& plan);
std::string step_text(const BehaviorStep& step);
std::string commands_text(const std::vector<JointCommand>& commands);

// Clips a command into the joint's limits. Oscillations keep their center
// inside the range and shrink the amplitude to fit; an amplitude pinched to
// zero degrades to a plain target at the center.
JointCommand clip_command(const mjcf::RobotModel& model, JointCommand command);

}  // namespace crisp::pipeline

#endif  // CRISP_PIPELINE_STAGES_HPP_
