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

#include "crisp/kinesim/trajectory.hpp"

#include <cmath>

#include "crisp/errors.hpp"

namespace crisp::kinesim {
namespace {

constexpr double kPi = 3.14159265358979323846;

int sample_count(double duration, double rate) {
  return static_cast<int>(std::lround(duration * rate)) + 1;
}

}  // namespace

std::vector<Pose> simulate_step(const mjcf::RobotModel& model,
                                const Pose& start_pose,
                                const std::vector<pipeline::JointCommand>& commands,
                                double duration, double rate) {
  if (!(rate > 0.0) || !(duration >= 0.0)) {
    throw Error(ErrorKind::kDegenerateRange,
                "simulate_step needs duration >= 0 and rate > 0");
  }
  Pose start = clip_pose(model, start_pose);
  for (const pipeline::JointCommand& cmd : commands) {
    if (model.joint_index(cmd.joint) < 0) {
      throw Error(ErrorKind::kUnknownJoint,
                  "command names unknown joint '" + cmd.joint + "'");
    }
  }

  int count = sample_count(duration, rate);
  std::vector<Pose> samples;
  samples.reserve(count);
  for (int k = 0; k < count; ++k) {
    double u = count > 1 ? static_cast<double>(k) / (count - 1) : 1.0;
    Pose pose = start;
    for (const pipeline::JointCommand& cmd : commands) {
      int j = model.joint_index(cmd.joint);
      if (cmd.kind == pipeline::CommandKind::kSetTarget) {
        double v0 = start[j];
        pose[j] = v0 + (cmd.value - v0) * 0.5 * (1.0 - std::cos(kPi * u));
      } else {
        pose[j] = cmd.center +
                  cmd.amplitude * std::sin(2.0 * kPi * cmd.cycles * u);
      }
    }
    samples.push_back(clip_pose(model, std::move(pose)));
  }
  return samples;
}

Timeline simulate_plan(const mjcf::RobotModel& model,
                       const pipeline::BehaviorPlan& plan,
                       const pipeline::CommandSequence& sequence,
                       double rate) {
  Timeline timeline;
  timeline.rate = rate;
  timeline.samples.push_back(clip_pose(model, model.default_pose));

  const std::vector<pipeline::JointCommand> kHold;
  double clock = 0.0;
  for (const pipeline::BehaviorStep& step : plan.steps) {
    // Hold through any gap before this window opens.
    if (step.start_time > clock) {
      int holds = sample_count(step.start_time - clock, rate) - 1;
      for (int i = 0; i < holds; ++i) {
        timeline.samples.push_back(timeline.samples.back());
      }
      clock = step.start_time;
    }

    const std::vector<pipeline::JointCommand>* commands = &kHold;
    for (const pipeline::StepCommands& sc : sequence.steps) {
      if (sc.step_index == step.index) {
        commands = &sc.commands;
        break;
      }
    }

    std::vector<Pose> window = simulate_step(
        model, timeline.samples.back(), *commands, step.duration(), rate);
    int first = static_cast<int>(timeline.samples.size()) - 1;
    // The window-entry pose is already in the timeline; append the rest.
    timeline.samples.insert(timeline.samples.end(), window.begin() + 1,
                            window.end());
    timeline.step_sample_ranges.emplace_back(
        first, static_cast<int>(timeline.samples.size()) - 1);
    clock = step.end_time;
  }
  return timeline;
}

}  // namespace crisp::kinesim
