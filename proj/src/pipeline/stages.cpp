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

#include "crisp/pipeline/stages.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "crisp/canonical.hpp"
#include "crisp/errors.hpp"
#include "json.hpp"

namespace crisp::pipeline {
namespace {

using critic::CriticRequest;
using critic::ReplySchema;
using critic::Role;
using critic::TextSection;

TextSection section(std::string title, std::string body) {
  return {std::move(title), std::move(body)};
}

// Limb words whose appearance in an action phrase claims a capability.
// Deliberately anatomical; verbs and ordinary nouns never trip the check.
const std::set<std::string>& limb_lexicon() {
  static const std::set<std::string> kWords = {
      "arm",   "leg",      "wing",  "tail",   "head",  "neck",  "wrist",
      "elbow", "shoulder", "hip",   "knee",   "ankle", "torso", "waist",
      "hand",  "foot",     "feet",  "finger", "thumb", "beak",  "jaw",
      "spine", "chest",    "pelvis"};
  return kWords;
}

void split_name_tokens(const std::string& name, std::set<std::string>& out) {
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.insert(token);
    token.clear();
  };
  for (char c : name) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      token.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
}

// Every word the model can answer for: joint group names, joint names, and
// body names, split into lowercase alphabetic tokens.
std::set<std::string> capability_tokens(const mjcf::RobotModel& model) {
  std::set<std::string> tokens;
  for (const mjcf::JointDescriptor& joint : model.joints) {
    split_name_tokens(joint.name, tokens);
    split_name_tokens(mjcf::joint_group(model, joint), tokens);
  }
  for (const mjcf::BodyNode& body : model.bodies) {
    split_name_tokens(body.name, tokens);
  }
  return tokens;
}

std::vector<std::string> lowercase_words(const std::string& text) {
  std::vector<std::string> words;
  std::string word;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    } else if (!word.empty()) {
      words.push_back(std::move(word));
      word.clear();
    }
  }
  if (!word.empty()) words.push_back(std::move(word));
  return words;
}

// Limb words in the action that match nothing the model offers.
std::vector<std::string> missing_capabilities(const mjcf::RobotModel& model,
                                              const std::string& action) {
  const std::set<std::string>& lexicon = limb_lexicon();
  std::set<std::string> offered = capability_tokens(model);
  std::vector<std::string> missing;
  for (std::string word : lowercase_words(action)) {
    if (!lexicon.count(word)) {
      if (word.size() < 2 || word.back() != 's') continue;
      word.pop_back();  // plural form of a lexicon word
      if (!lexicon.count(word)) continue;
    }
    if (offered.count(word)) continue;
    if (std::find(missing.begin(), missing.end(), word) == missing.end()) {
      missing.push_back(word);
    }
  }
  return missing;
}

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> plan_reply_issues(const critic::PlanReply& reply) {
  std::vector<std::string> issues;
  if (reply.steps.empty()) {
    issues.push_back("the plan has no steps");
    return issues;
  }
  double previous_end = 0.0;
  for (size_t i = 0; i < reply.steps.size(); ++i) {
    const critic::PlanStepSpec& step = reply.steps[i];
    std::string where = "step " + std::to_string(i + 1);
    if (step.description.empty()) issues.push_back(where + " lacks a description");
    if (step.start_time < 0.0) issues.push_back(where + " starts before 0 s");
    if (!(step.start_time < step.end_time)) {
      issues.push_back(where + " needs start_time < end_time");
    }
    if (i > 0 && step.start_time < previous_end) {
      issues.push_back(where + " overlaps or reorders the previous window");
    }
    previous_end = step.end_time;
  }
  return issues;
}

const BehaviorStep& plan_step(const BehaviorPlan& plan, int step_index) {
  for (const BehaviorStep& step : plan.steps) {
    if (step.index == step_index) return step;
  }
  throw Error(ErrorKind::kIndexOutOfRange,
              "plan has no step " + std::to_string(step_index));
}

StepCommands& sequence_step(CommandSequence& sequence, int step_index) {
  for (StepCommands& step : sequence.steps) {
    if (step.step_index == step_index) return step;
  }
  throw Error(ErrorKind::kInvalidProposal,
              "command sequence has no step " + std::to_string(step_index));
}

const StepCommands& sequence_step(const CommandSequence& sequence,
                                  int step_index) {
  return sequence_step(const_cast<CommandSequence&>(sequence), step_index);
}

bool step_commands_joint(const StepCommands& step, const std::string& joint) {
  for (const JointCommand& cmd : step.commands) {
    if (cmd.joint == joint) return true;
  }
  return false;
}

// Shared by propose_refinement and apply_proposal so a stored proposal is
// held to the same rules as a fresh one.
void check_proposal(const mjcf::RobotModel& model,
                    const CommandSequence& sequence,
                    const critic::ProposalReply& proposal) {
  const StepCommands& step = sequence_step(sequence, proposal.step_index);
  const std::string& joint = proposal.command.joint;
  if (model.joint_index(joint) < 0) {
    throw Error(ErrorKind::kInvalidProposal,
                "proposal names unknown joint '" + joint + "'");
  }
  bool commanded = step_commands_joint(step, joint);
  switch (proposal.kind) {
    case critic::ProposalKind::kAdjust:
    case critic::ProposalKind::kDelete:
      if (!commanded) {
        throw Error(ErrorKind::kInvalidProposal,
                    std::string(to_string(proposal.kind)) + " of '" + joint +
                        "' but step " + std::to_string(proposal.step_index) +
                        " has no command for it");
      }
      break;
    case critic::ProposalKind::kAdd:
      if (commanded) {
        throw Error(ErrorKind::kInvalidProposal,
                    "add duplicates the existing command for '" + joint +
                        "' in step " + std::to_string(proposal.step_index));
      }
      break;
  }
}

std::string candidates_text(const mjcf::RobotModel& model,
                            const std::vector<std::string>& candidates,
                            const kinesim::Pose& pose) {
  std::string out;
  for (const std::string& name : candidates) {
    const mjcf::JointDescriptor& joint = model.joint(name);
    int index = model.joint_index(name);
    out += joint.name;
    out += ' ';
    out += mjcf::to_string(joint.kind);
    out += " [" + format_double(joint.limit_min) + ", " +
           format_double(joint.limit_max) + "]";
    out += " current " + format_double(pose[static_cast<size_t>(index)]);
    out += '\n';
  }
  return out;
}

template <typename Reply>
Reply complete_as(critic::CriticBackend& backend, const CriticRequest& request) {
  critic::StructuredReply reply = backend.complete(request);
  if (auto* typed = std::get_if<Reply>(&reply)) return std::move(*typed);
  throw SchemaViolationError(
      {std::string("backend '") + backend.name() +
       "' answered with the wrong reply type for schema " +
       critic::schema_name(request.schema)});
}

}  // namespace

std::string step_text(const BehaviorStep& step) {
  return "step " + std::to_string(step.index) + ": " + step.description +
         " [" + format_double(step.start_time) + "s.." +
         format_double(step.end_time) + "s]";
}

std::string plan_text(const BehaviorPlan& plan) {
  std::string out;
  for (const BehaviorStep& step : plan.steps) {
    out += step_text(step);
    out += '\n';
  }
  return out;
}

std::string commands_text(const std::vector<JointCommand>& commands) {
  if (commands.empty()) return "(none)\n";
  std::string out;
  for (const JointCommand& cmd : commands) {
    if (cmd.kind == CommandKind::kSetTarget) {
      out += "target " + cmd.joint + " -> " + format_double(cmd.value);
    } else {
      out += "oscillate " + cmd.joint + " center " + format_double(cmd.center) +
             " amplitude " + format_double(cmd.amplitude) + " cycles " +
             format_double(cmd.cycles);
    }
    out += '\n';
  }
  return out;
}

JointCommand clip_command(const mjcf::RobotModel& model, JointCommand command) {
  const mjcf::JointDescriptor& joint = model.joint(command.joint);
  auto clamp = [&joint](double v) {
    return std::clamp(v, joint.limit_min, joint.limit_max);
  };
  if (command.kind == CommandKind::kSetTarget) {
    command.value = clamp(command.value);
    return command;
  }
  command.center = clamp(command.center);
  double headroom = std::min(command.center - joint.limit_min,
                             joint.limit_max - command.center);
  command.amplitude = std::min(command.amplitude, headroom);
  if (!(command.amplitude > 0.0)) {
    command.kind = CommandKind::kSetTarget;
    command.value = command.center;
    command.amplitude = 0.0;
  }
  return command;
}

critic::ActionReply translate_action(critic::CriticBackend& backend,
                                     const mjcf::RobotModel& model,
                                     const std::string& instruction) {
  CriticRequest request;
  request.role = Role::kActionTranslator;
  request.schema = ReplySchema::kAction;
  request.sections.push_back(section("instruction", instruction));
  request.sections.push_back(
      section("morphology", mjcf::summarize_morphology(model).text));

  auto reply = complete_as<critic::ActionReply>(backend, request);
  if (!reply.feasible) {
    throw Error(ErrorKind::kCapabilityMismatch,
                "instruction rejected as infeasible: " +
                    (reply.reason.empty() ? reply.action : reply.reason));
  }
  std::vector<std::string> missing = missing_capabilities(model, reply.action);
  if (!missing.empty()) {
    throw Error(ErrorKind::kCapabilityMismatch,
                "action '" + reply.action +
                    "' references capabilities the robot lacks: " +
                    join(missing, ", "));
  }
  return reply;
}

BehaviorPlan decompose_steps(critic::CriticBackend& backend,
                             const mjcf::RobotModel& model,
                             const std::string& action) {
  CriticRequest request;
  request.role = Role::kPlanDecomposer;
  request.schema = ReplySchema::kPlan;
  request.sections.push_back(section("action", action));
  request.sections.push_back(
      section("morphology", mjcf::summarize_morphology(model).text));

  auto reply = complete_as<critic::PlanReply>(backend, request);
  std::vector<std::string> issues = plan_reply_issues(reply);
  if (!issues.empty()) {
    CriticRequest retry = request;
    retry.sections.push_back(section(
        "correction", "The previous plan was invalid: " + join(issues, "; ") +
                          ". Reply again with the same JSON shape."));
    reply = complete_as<critic::PlanReply>(backend, retry);
    issues = plan_reply_issues(reply);
    if (!issues.empty()) {
      if (reply.steps.empty()) {
        throw Error(ErrorKind::kEmptyPlan,
                    "planner produced no steps for action '" + action + "'");
      }
      throw SchemaViolationError(issues);
    }
  }

  BehaviorPlan plan;
  plan.action = action;
  plan.steps.reserve(reply.steps.size());
  for (size_t i = 0; i < reply.steps.size(); ++i) {
    const critic::PlanStepSpec& spec = reply.steps[i];
    plan.steps.push_back({static_cast<int>(i) + 1, spec.description,
                          spec.start_time, spec.end_time});
  }
  return plan;
}

std::vector<std::string> identify_candidate_joints(
    critic::CriticBackend& backend, const mjcf::RobotModel& model,
    const BehaviorStep& step, const std::vector<kinesim::JointProbe>& probes) {
  CriticRequest request;
  request.role = Role::kCodeGenerator;
  request.schema = ReplySchema::kCandidates;
  request.sections.push_back(section("step", step_text(step)));
  request.sections.push_back(
      section("joints", mjcf::summarize_morphology(model).text));
  for (const kinesim::JointProbe& probe : probes) {
    request.images.insert(request.images.end(), probe.images.begin(),
                          probe.images.end());
  }

  auto reply = complete_as<critic::CandidatesReply>(backend, request);
  std::vector<std::string> kept;
  for (const std::string& name : reply.joints) {
    if (model.joint_index(name) < 0) continue;  // unknown names are dropped
    if (std::find(kept.begin(), kept.end(), name) == kept.end()) {
      kept.push_back(name);
    }
  }
  if (kept.empty()) {
    throw Error(ErrorKind::kNoCandidateJoints,
                "no candidate joints survive filtering (critic offered: " +
                    join(reply.joints, ", ") + ")");
  }
  return kept;
}

SelectedCommands select_joint_and_value(
    critic::CriticBackend& backend, const mjcf::RobotModel& model,
    const BehaviorStep& step, const std::vector<std::string>& candidates,
    const kinesim::Pose& entry_pose,
    const std::vector<kinesim::JointProbe>& probes) {
  if (candidates.empty()) {
    throw Error(ErrorKind::kNoCandidateJoints,
                "select_joint_and_value needs at least one candidate");
  }
  kinesim::Pose pose = kinesim::clip_pose(model, entry_pose);

  CriticRequest request;
  request.role = Role::kCodeGenerator;
  request.schema = ReplySchema::kCommands;
  request.sections.push_back(section("step", step_text(step)));
  request.sections.push_back(
      section("candidates", candidates_text(model, candidates, pose)));
  for (const std::string& name : candidates) {
    auto it = std::find_if(
        probes.begin(), probes.end(),
        [&name](const kinesim::JointProbe& p) { return p.joint == name; });
    if (it == probes.end()) {
      throw Error(ErrorKind::kModelMismatch,
                  "no probe images cover candidate joint '" + name + "'");
    }
    request.images.insert(request.images.end(), it->images.begin(),
                          it->images.end());
  }

  auto reply = complete_as<critic::CommandsReply>(backend, request);
  SelectedCommands selected;
  selected.commands.step_index = step.index;
  selected.direction_hint = reply.direction_hint;
  for (const JointCommand& cmd : reply.commands) {
    if (model.joint_index(cmd.joint) < 0) {
      throw Error(ErrorKind::kUnknownJoint,
                  "command names unknown joint '" + cmd.joint + "'");
    }
    selected.commands.commands.push_back(clip_command(model, cmd));
  }
  return selected;
}

critic::EvaluationReply evaluate_holistic(
    critic::CriticBackend& backend, const std::string& action,
    const BehaviorPlan& plan,
    const std::vector<kinesim::LabeledImage>& frames) {
  if (frames.empty()) {
    throw Error(ErrorKind::kEmptyPlan,
                "holistic evaluation needs at least one frame");
  }
  CriticRequest request;
  request.role = Role::kHolisticEvaluator;
  request.schema = ReplySchema::kEvaluation;
  request.sections.push_back(section("action", action));
  request.sections.push_back(section("plan", plan_text(plan)));
  request.images = frames;
  return complete_as<critic::EvaluationReply>(backend, request);
}

int pinpoint_erroneous_step(critic::CriticBackend& backend,
                            const std::string& action,
                            const BehaviorPlan& plan,
                            const std::string& critique) {
  CriticRequest request;
  request.role = Role::kStepPinpointer;
  request.schema = ReplySchema::kPinpoint;
  request.sections.push_back(section("action", action));
  request.sections.push_back(section("plan", plan_text(plan)));
  request.sections.push_back(section("critique", critique));

  auto reply = complete_as<critic::PinpointReply>(backend, request);
  int best = 0;
  for (int index : reply.step_indices) {
    bool known = std::any_of(
        plan.steps.begin(), plan.steps.end(),
        [index](const BehaviorStep& step) { return step.index == index; });
    if (known && (best == 0 || index < best)) best = index;
  }
  if (best == 0) {
    std::vector<std::string> offered;
    for (int index : reply.step_indices) {
      offered.push_back(std::to_string(index));
    }
    throw Error(ErrorKind::kIndexOutOfRange,
                "pinpointed steps {" + join(offered, ", ") +
                    "} are all outside the plan (steps 1.." +
                    std::to_string(plan.steps.size()) + ")");
  }
  return best;
}

critic::ProposalReply propose_refinement(
    critic::CriticBackend& backend, const mjcf::RobotModel& model,
    const std::string& action, const BehaviorPlan& plan,
    const CommandSequence& sequence, int step_index,
    const std::string& critique,
    const std::vector<kinesim::LabeledImage>& frames) {
  const BehaviorStep& step = plan_step(plan, step_index);
  const StepCommands& commands = sequence_step(sequence, step_index);

  nlohmann::json query;
  if (!commands.commands.empty()) {
    const JointCommand& primary = commands.commands.front();
    query["joint"] = primary.joint;
    query["current"] = primary.kind == CommandKind::kSetTarget
                           ? primary.value
                           : primary.center;
  } else if (!model.joints.empty()) {
    const mjcf::JointDescriptor& fallback = model.joints.front();
    query["joint"] = fallback.name;
    query["current"] = fallback.default_value;
  }
  query["step_index"] = step_index;

  CriticRequest request;
  request.role = Role::kRefinementProposer;
  request.schema = ReplySchema::kProposal;
  request.sections.push_back(section("action", action));
  request.sections.push_back(section("step", step_text(step)));
  request.sections.push_back(
      section("commands", commands_text(commands.commands)));
  request.sections.push_back(section("critique", critique));
  request.sections.push_back(section("query", query.dump()));
  request.images = frames;

  auto reply = complete_as<critic::ProposalReply>(backend, request);
  if (reply.step_index != step_index) {
    throw Error(ErrorKind::kInvalidProposal,
                "proposal targets step " + std::to_string(reply.step_index) +
                    " but step " + std::to_string(step_index) +
                    " was pinpointed");
  }
  check_proposal(model, sequence, reply);
  return reply;
}

void apply_proposal(const mjcf::RobotModel& model, CommandSequence& sequence,
                    const critic::ProposalReply& proposal) {
  check_proposal(model, sequence, proposal);
  StepCommands& step = sequence_step(sequence, proposal.step_index);
  auto it = std::find_if(step.commands.begin(), step.commands.end(),
                         [&proposal](const JointCommand& cmd) {
                           return cmd.joint == proposal.command.joint;
                         });
  switch (proposal.kind) {
    case critic::ProposalKind::kAdjust:
      *it = clip_command(model, proposal.command);
      break;
    case critic::ProposalKind::kDelete:
      step.commands.erase(it);
      break;
    case critic::ProposalKind::kAdd:
      step.commands.push_back(clip_command(model, proposal.command));
      break;
  }
}

}  // namespace crisp::pipeline
