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

#ifndef CRISP_PIPELINE_TYPES_HPP_
#define CRISP_PIPELINE_TYPES_HPP_

#include <string>
#include <vector>

namespace crisp::pipeline {

// A behavior plan is an ordered list of timed steps numbered from 1. Times
// are seconds from behavior start; windows are inclusive and non overlapping
// by construction (start < end, each start >= previous end).
struct BehaviorStep {
  int index = 1;
  std::string description;
  double start_time = 0.0;
  double end_time = 0.0;

  double duration() const { return end_time - start_time; }
};

struct BehaviorPlan {
  std::string action;        // normalized action phrase
  std::vector<BehaviorStep> steps;
};

enum class CommandKind { kSetTarget, kOscillate };

// One joint directive inside a step window. kSetTarget eases the joint from
// its window-entry value to `value`. kOscillate runs `cycles` sine periods
// of amplitude `amplitude` around `center`.
struct JointCommand {
  CommandKind kind = CommandKind::kSetTarget;
  std::string joint;
  double value = 0.0;      // kSetTarget
  double center = 0.0;     // kOscillate
  double amplitude = 0.0;  // kOscillate, nonnegative
  double cycles = 1.0;     // kOscillate, positive
};

struct StepCommands {
  int step_index = 0;
  std::vector<JointCommand> commands;
};

struct CommandSequence {
  std::vector<StepCommands> steps;  // aligned with BehaviorPlan::steps
};

}  // namespace crisp::pipeline

#endif  // CRISP_PIPELINE_TYPES_HPP_
