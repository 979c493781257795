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

#include "crisp/ras/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crisp/errors.hpp"

namespace crisp::ras {
namespace {

constexpr double kMinSpan = 1e-6;

double clip(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

void require_span(double limit_min, double limit_max) {
  if (!(limit_max - limit_min >= kMinSpan)) {
    throw Error(ErrorKind::kDegenerateRange,
                "joint range [" + std::to_string(limit_min) + ", " +
                    std::to_string(limit_max) + "] is too narrow to search");
  }
}

// Argmax with the pinned tie order: reward, then distance to the sampling
// mean, then index.
int best_index(const std::vector<double>& values,
               const std::vector<int>& rewards, double mean) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (rewards[i] > rewards[best]) {
      best = i;
    } else if (rewards[i] == rewards[best] &&
               std::abs(values[i] - mean) < std::abs(values[best] - mean)) {
      best = i;
    }
  }
  return best;
}

}  // namespace

const char* to_string(RefinementStatus status) {
  switch (status) {
    case RefinementStatus::kSuccess: return "success";
    case RefinementStatus::kJointFailure: return "joint_failure";
    case RefinementStatus::kBudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

void validate_config(const RasConfig& config) {
  if (config.tau < 1 || config.tau > 10) {
    throw Error(ErrorKind::kInvalidConfig, "tau must be in [1, 10]");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "alpha must be in (0, 1)");
  }
  if (!(config.beta > 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "beta must be greater than 1");
  }
  if (!(config.sigma_base > 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "sigma_base must be positive");
  }
  if (config.max_iterations < 1) {
    throw Error(ErrorKind::kInvalidConfig, "max_iterations must be >= 1");
  }
  if (config.candidates_per_iteration < 1) {
    throw Error(ErrorKind::kInvalidConfig,
                "candidates_per_iteration must be >= 1");
  }
  if (config.low_reward_streak_limit < 1) {
    throw Error(ErrorKind::kInvalidConfig,
                "low_reward_streak_limit must be >= 1");
  }
}

CandidateSet init_candidates(double current, int direction_hint,
                             double limit_min, double limit_max,
                             const RasConfig& config, PinnedRng& rng) {
  require_span(limit_min, limit_max);
  double dir = direction_hint < 0 ? -1.0 : 1.0;  // unspecified means increase

  CandidateSet set;
  set.iteration = 0;
  set.sigma = config.sigma_base;
  int hinted = std::max(1, config.candidates_per_iteration - 1);
  for (int i = 0; i < hinted; ++i) {
    set.values.push_back(
        clip(current + dir * rng.uniform_open0(config.sigma_base), limit_min,
             limit_max));
  }
  if (config.candidates_per_iteration > 1) {
    set.values.push_back(
        clip(current - dir * rng.uniform_open0(config.sigma_base), limit_min,
             limit_max));
  }
  return set;
}

double update_sigma(int best_reward, const RasConfig& config) {
  return best_reward >= 5 ? config.alpha * config.sigma_base
                          : config.beta * config.sigma_base;
}

CandidateSet sample_candidates(double v_star, double sigma_t,
                               double limit_min, double limit_max,
                               const RasConfig& config, PinnedRng& rng) {
  CandidateSet set;
  set.sigma = sigma_t;
  for (int i = 0; i < config.candidates_per_iteration; ++i) {
    set.values.push_back(
        clip(rng.normal(v_star, sigma_t), limit_min, limit_max));
  }
  return set;
}

RefinementOutcome run_refinement(double current, int direction_hint,
                                 double limit_min, double limit_max,
                                 const Scorer& scorer,
                                 const RasConfig& config) {
  validate_config(config);
  require_span(limit_min, limit_max);

  PinnedRng rng(config.rng_seed);
  RefinementOutcome outcome;
  CandidateSet set =
      init_candidates(current, direction_hint, limit_min, limit_max, config,
                      rng);
  double mean = current;  // sampling center of the live set
  int streak = 0;

  for (int t = 0;; ++t) {
    set.iteration = t;
    set.rewards.clear();
    for (double value : set.values) {
      int reward = 0;
      try {
        reward = scorer(value);
      } catch (const std::exception& e) {
        throw Error(ErrorKind::kScorerFailure, e.what());
      }
      if (reward < 1 || reward > 10) {
        throw Error(ErrorKind::kScorerFailure,
                    "scorer returned reward " + std::to_string(reward) +
                        " outside [1, 10]");
      }
      set.rewards.push_back(reward);
    }
    int best = best_index(set.values, set.rewards, mean);
    double v_star = set.values[best];
    int r_star = set.rewards[best];
    set.v_star = v_star;
    set.reward_star = r_star;
    outcome.history.push_back(set);
    outcome.iterations_used = t;
    if (r_star > outcome.reward_final) {
      outcome.reward_final = r_star;
      outcome.v_final = v_star;
    }

    if (r_star >= config.tau) {
      outcome.status = RefinementStatus::kSuccess;
      outcome.v_final = v_star;
      outcome.reward_final = r_star;
      return outcome;
    }
    streak = r_star <= 2 ? streak + 1 : 0;
    if (streak >= config.low_reward_streak_limit) {
      outcome.status = RefinementStatus::kJointFailure;
      return outcome;
    }
    if (t == config.max_iterations) {
      outcome.status = RefinementStatus::kBudgetExhausted;
      return outcome;
    }

    double sigma = update_sigma(r_star, config);
    set = sample_candidates(v_star, sigma, limit_min, limit_max, config, rng);
    mean = v_star;
  }
}

}  // namespace crisp::ras
