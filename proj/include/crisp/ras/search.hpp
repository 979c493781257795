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

#ifndef CRISP_RAS_SEARCH_HPP_
#define CRISP_RAS_SEARCH_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "crisp/ras/rng.hpp"

namespace crisp::ras {

// Reward-based adaptive search over one scalar joint value: propose a
// candidate set, score it, narrow or widen the sampling spread by the best
// reward, repeat until the reward threshold, a hopeless streak, or the
// iteration budget ends it.

struct RasConfig {
  int tau = 8;                      // success threshold on the best reward
  double sigma_base = 0.6;
  double alpha = 0.4;               // fine search factor, in (0, 1)
  double beta = 1.5;                // broad search factor, > 1
  int max_iterations = 10;
  int candidates_per_iteration = 3;
  int low_reward_streak_limit = 2;  // consecutive R* <= 2 before giving up
  std::uint64_t rng_seed = 0;
};

void validate_config(const RasConfig& config);

struct CandidateSet {
  int iteration = 0;
  double sigma = 0.0;        // spread that generated the values
  std::vector<double> values;
  std::vector<int> rewards;  // filled once scored, element per value
  double v_star = 0.0;       // argmax value once scored
  int reward_star = 0;       // its reward
};

enum class RefinementStatus { kSuccess, kJointFailure, kBudgetExhausted };

const char* to_string(RefinementStatus status);

struct RefinementOutcome {
  RefinementStatus status = RefinementStatus::kBudgetExhausted;
  double v_final = 0.0;   // best value seen, success or not
  int reward_final = 0;
  int iterations_used = 0;
  std::vector<CandidateSet> history;  // one entry per scored iteration
};

// Candidate set at t = 0. Two spacings drawn uniformly in (0, sigma_base]
// push in the hinted direction from `current`, one pushes opposite; with a
// single-candidate budget only the hinted draw survives. A zero hint means
// increase. Everything clips into the limits.
CandidateSet init_candidates(double current, int direction_hint,
                             double limit_min, double limit_max,
                             const RasConfig& config, PinnedRng& rng);

// Spread for the next iteration, always rescaled from sigma_base: close
// bests (5 <= R* < tau) search fine at alpha, poor bests search broad at
// beta. Call only when R* did not already terminate the loop.
double update_sigma(int best_reward, const RasConfig& config);

// Independent draws from N(v_star, sigma_t^2), clipped into the limits.
CandidateSet sample_candidates(double v_star, double sigma_t,
                               double limit_min, double limit_max,
                               const RasConfig& config, PinnedRng& rng);

// Scores one candidate value with an integer reward in [1, 10].
using Scorer = std::function<int(double value)>;

// The full loop. The scorer is consulted once per candidate per iteration;
// its failures surface as ScorerFailure. Argmax ties go to the value
// closest to the set's sampling mean, then to the lowest index.
RefinementOutcome run_refinement(double current, int direction_hint,
                                 double limit_min, double limit_max,
                                 const Scorer& scorer, const RasConfig& config);

}  // namespace crisp::ras

#endif  // CRISP_RAS_SEARCH_HPP_
