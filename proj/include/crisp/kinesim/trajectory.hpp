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

#ifndef CRISP_KINESIM_TRAJECTORY_HPP_
#define CRISP_KINESIM_TRAJECTORY_HPP_

#include <utility>
#include <vector>

#include "crisp/kinesim/fk.hpp"
#include "crisp/mjcf/model.hpp"
#include "crisp/pipeline/types.hpp"

namespace crisp::kinesim {

inline constexpr double kDefaultSampleRate = 20.0;  // samples per second

// Samples one step window at `rate`. The result holds round(duration*rate)+1
// poses; sample k sits at phase u = k/(count-1). Targets ease in with
// (1-cos(pi*u))/2 from the window-entry value, oscillations run
// center + amplitude*sin(2*pi*cycles*u), uncommanded joints hold, and every
// sample is clipped to the joint limits.
std::vector<Pose> simulate_step(const mjcf::RobotModel& model,
                                const Pose& start_pose,
                                const std::vector<pipeline::JointCommand>& commands,
                                double duration, double rate);

// A whole behavior stitched together. Consecutive windows share their
// boundary sample; gaps between windows hold the pose.
struct Timeline {
  double rate = kDefaultSampleRate;
  std::vector<Pose> samples;
  // Inclusive [first, last] global sample index per plan step. A shared
  // boundary sample belongs to the earlier window for assignment purposes
  // and still opens the later one.
  std::vector<std::pair<int, int>> step_sample_ranges;
};

Timeline simulate_plan(const mjcf::RobotModel& model,
                       const pipeline::BehaviorPlan& plan,
                       const pipeline::CommandSequence& sequence,
                       double rate = kDefaultSampleRate);

}  // namespace crisp::kinesim

#endif  // CRISP_KINESIM_TRAJECTORY_HPP_
