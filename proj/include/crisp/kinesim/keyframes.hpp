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

#ifndef CRISP_KINESIM_KEYFRAMES_HPP_
#define CRISP_KINESIM_KEYFRAMES_HPP_

#include <vector>

#include "crisp/kinesim/fk.hpp"

namespace crisp::kinesim {

// Per-sample motion below this is treated as stillness (radians or meters
// per sample).
inline constexpr double kStillThreshold = 1e-4;

// Picks the samples worth showing the critic for one step window: the
// motion extrema where the commanded joints reverse or settle.
//
// Steps that only ease toward targets produce exactly one keyframe, the
// window end. Oscillating steps scan the dominant commanded joint's
// per-sample deltas: sample k is a candidate when the delta sign flips
// across it or all commanded joints are still on both sides, candidates at
// most 2 samples apart merge into one cluster, and each cluster keeps its
// stillest sample (ties resolve to the later one). No candidates means the
// window end alone.
//
// `moving_joints` holds model joint indices named by the step's commands.
// Returns strictly increasing sample indices; never empty for nonempty
// input.
std::vector<int> select_keyframes(const std::vector<Pose>& samples,
                                  const std::vector<int>& moving_joints,
                                  bool has_oscillation);

}  // namespace crisp::kinesim

#endif  // CRISP_KINESIM_KEYFRAMES_HPP_
