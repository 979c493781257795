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

#ifndef CRISP_CRITIC_ORACLE_HPP_
#define CRISP_CRITIC_ORACLE_HPP_

#include <map>
#include <string>

#include "crisp/critic/types.hpp"
#include "crisp/mjcf/model.hpp"

namespace crisp::critic {

// Deterministic reward for one joint value against a known target, graded
// on the normalized miss e = |candidate - target| / (limit span):
//   e <= 0.05             -> 9   on target
//   e <= 0.15             -> 8   close enough to count as success
//   moving the right way  -> 6 (e <= 0.4) or 5
//   no usable direction   -> 3
//   moving the wrong way  -> 2
// `base` is the value the motion started from; direction is judged
// against target - base.
int score_candidate(double candidate, double base, double target,
                    double limit_min, double limit_max);

// Closed-loop stand-in for a seeing critic: it knows the intended target
// value per joint and answers only the scoring and refinement roles.
// Anything else raises OracleUnsupportedRole, which keeps accidental
// dependencies on ground truth out of the main pipeline.
class OracleBackend : public CriticBackend {
 public:
  OracleBackend(const mjcf::RobotModel& model,
                std::map<std::string, double> targets);

  StructuredReply complete(const CriticRequest& request) override;
  std::string name() const override { return "oracle"; }

  const std::map<std::string, double>& targets() const { return targets_; }

 private:
  StructuredReply score(const CriticRequest& request) const;
  StructuredReply propose(const CriticRequest& request) const;

  const mjcf::RobotModel& model_;
  std::map<std::string, double> targets_;
};

}  // namespace crisp::critic

#endif  // CRISP_CRITIC_ORACLE_HPP_
