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

#include "crisp/kinesim/keyframes.hpp"

#include <cmath>
#include <cstdlib>

namespace crisp::kinesim {
namespace {

double joint_delta(const std::vector<Pose>& samples, int joint, int k) {
  return samples[k][joint] - samples[k - 1][joint];
}

}  // namespace

std::vector<int> select_keyframes(const std::vector<Pose>& samples,
                                  const std::vector<int>& moving_joints,
                                  bool has_oscillation) {
  if (samples.empty()) return {};
  int last = static_cast<int>(samples.size()) - 1;
  if (!has_oscillation || last < 2 || moving_joints.empty()) return {last};

  // The joint that travels farthest defines the signed delta sequence.
  int dominant = moving_joints.front();
  double best_travel = -1.0;
  for (int j : moving_joints) {
    double travel = 0.0;
    for (int k = 1; k <= last; ++k) travel += std::abs(joint_delta(samples, j, k));
    if (travel > best_travel) {
      best_travel = travel;
      dominant = j;
    }
  }

  auto delta = [&](int k) { return joint_delta(samples, dominant, k); };
  auto still = [&](int k) {
    for (int j : moving_joints) {
      if (std::abs(joint_delta(samples, j, k)) > kStillThreshold) return false;
    }
    return true;
  };

  std::vector<int> candidates;
  for (int k = 1; k < last; ++k) {
    bool reversal = delta(k) * delta(k + 1) <= 0.0;
    if (reversal || (still(k) && still(k + 1))) candidates.push_back(k);
  }
  if (still(last)) candidates.push_back(last);
  if (candidates.empty()) return {last};

  // Score favors the stillest sample of each cluster; k == last has no
  // trailing delta.
  auto score = [&](int k) {
    double s = std::abs(delta(k));
    if (k < last) s = std::max(s, std::abs(delta(k + 1)));
    return s;
  };

  std::vector<int> picks;
  size_t begin = 0;
  for (size_t i = 1; i <= candidates.size(); ++i) {
    if (i < candidates.size() && candidates[i] - candidates[i - 1] <= 2) continue;
    int rep = candidates[begin];
    for (size_t c = begin + 1; c < i; ++c) {
      if (score(candidates[c]) <= score(rep)) rep = candidates[c];
    }
    picks.push_back(rep);
    begin = i;
  }
  return picks;
}

}  // namespace crisp::kinesim
