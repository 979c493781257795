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

// Release gate. Every numbered check below must hold before a build ships;
// the binary prints one pass/fail line per criterion and exits nonzero if
// any line fails. Each criterion also carries a wall-clock budget, so a
// pathological slowdown fails the gate even when the math still holds.

#include <sys/wait.h>

#include <Eigen/Geometry>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "crisp/artifact/artifact.hpp"
#include "crisp/cli/runner.hpp"
#include "crisp/critic/oracle.hpp"
#include "crisp/critic/scripted.hpp"
#include "crisp/errors.hpp"
#include "crisp/kinesim/fk.hpp"
#include "crisp/kinesim/keyframes.hpp"
#include "crisp/kinesim/probes.hpp"
#include "crisp/kinesim/trajectory.hpp"
#include "crisp/mjcf/model.hpp"
#include "crisp/pipeline/stages.hpp"
#include "crisp/ras/rng.hpp"
#include "crisp/ras/search.hpp"

namespace {

using namespace crisp;

// Records the first failed requirement; later ones keep the first message.
struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& message) {
    if (ok && !condition) {
      ok = false;
      detail = message;
    }
  }
};

std::string fmt(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

std::filesystem::path models_dir() { return CRISP_MODELS_DIR; }
std::filesystem::path fixtures_dir() { return CRISP_FIXTURES_DIR; }
std::filesystem::path golden_dir() { return CRISP_GOLDEN_DIR; }

std::filesystem::path fresh_dir(const std::string& leaf) {
  auto dir = std::filesystem::temp_directory_path() / "crisp_acceptance" / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

mjcf::RobotModel load_model(const std::string& file) {
  return mjcf::parse_mjcf(slurp(models_dir() / file));
}

// ---------------------------------------------------------------------------
// 1. The spread schedule is exact: alpha and beta rescale sigma_base with no
//    accumulated drift, and reward 5 already counts as a close best.

void c01_sigma_schedule(Check& check) {
  ras::RasConfig config;
  check.require(config.sigma_base == 0.6 && config.alpha == 0.4 &&
                    config.beta == 1.5 && config.tau == 8,
                "defaults moved; the schedule checks below assume "
                "sigma_base 0.6, alpha 0.4, beta 1.5, tau 8");

  double fine = ras::update_sigma(6, config);
  double broad = ras::update_sigma(3, config);
  check.require(fine == 0.4 * 0.6,
                "update_sigma(6) = " + fmt(fine) + ", want alpha*sigma_base");
  check.require(broad == 1.5 * 0.6,
                "update_sigma(3) = " + fmt(broad) + ", want beta*sigma_base");
  check.require(std::abs(fine - 0.24) < 1e-15,
                "update_sigma(6) = " + fmt(fine) + ", want 0.24");
  check.require(std::abs(broad - 0.90) < 1e-15,
                "update_sigma(3) = " + fmt(broad) + ", want 0.90");

  // Reward 5 sits on the fine/broad boundary and must search fine.
  check.require(ras::update_sigma(5, config) == 0.4 * 0.6,
                "reward 5 must take the fine branch");
  check.require(ras::update_sigma(4, config) == 1.5 * 0.6,
                "reward 4 must take the broad branch");
  check.require(ras::update_sigma(7, config) == 0.4 * 0.6,
                "reward 7 must take the fine branch");
}

// ---------------------------------------------------------------------------
// 2. Initial candidate sets hold exactly three in-limit values, two pushed
//    the hinted way and one opposite. Draws that clipping collapsed onto a
//    bound (or back onto the current value) are exempt and tallied apart.

void c02_initial_candidates(Check& check) {
  ras::RasConfig config;
  ras::PinnedRng rng(2026);
  const double lo = -1.0;
  const double hi = 1.0;
  int clean = 0;
  int exempt = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    double current = lo + (hi - lo) * rng.uniform01();
    int hint = static_cast<int>(rng.uniform01() * 3.0) - 1;
    ras::CandidateSet set =
        ras::init_candidates(current, hint, lo, hi, config, rng);

    check.require(set.values.size() == 3, "expected 3 candidates, got " +
                                              std::to_string(set.values.size()));
    if (set.values.size() != 3) return;

    double sign = hint < 0 ? -1.0 : 1.0;  // zero hint means increase
    bool degenerate = false;
    int hinted = 0;
    int opposite = 0;
    for (double v : set.values) {
      check.require(v >= lo && v <= hi,
                    "candidate " + fmt(v) + " escaped the limits");
      if (v == lo || v == hi || v == current) {
        degenerate = true;
      } else if ((v - current) * sign > 0.0) {
        ++hinted;
      } else {
        ++opposite;
      }
    }
    if (degenerate) {
      ++exempt;
      continue;
    }
    ++clean;
    check.require(hinted == 2 && opposite == 1,
                  "trial " + std::to_string(trial) + ": " +
                      std::to_string(hinted) + " hinted + " +
                      std::to_string(opposite) + " opposite, want 2 + 1");
  }

  check.require(clean + exempt == 1000, "trial accounting is off");
  check.require(clean >= 500, "only " + std::to_string(clean) +
                                  " clean trials; the sweep is degenerate");
  check.require(exempt >= 1, "no boundary clipping was exercised");
}

// ---------------------------------------------------------------------------
// 3. Refinement reaches targets at least 0.15 of the normalized range away
//    from the start in at most 10 iterations for 95% of seeded trials, with
//    a median of at most 4 iterations.

void c03_convergence(Check& check) {
  const double lo = -1.0;
  const double hi = 1.0;
  ras::PinnedRng rng(77);
  int successes = 0;
  std::vector<int> iterations;

  for (int trial = 0; trial < 200; ++trial) {
    // Searches start from the joint's resting value, the midpoint here, the
    // way synthesized runs start from the model defaults.
    double current = 0.0;
    double target = current;
    while (std::abs(target - current) < 0.15 * (hi - lo)) {
      target = lo + (hi - lo) * rng.uniform01();
    }

    ras::RasConfig config;
    config.rng_seed = 9000 + static_cast<std::uint64_t>(trial);
    auto scorer = [current, target, lo, hi](double value) {
      return critic::score_candidate(value, current, target, lo, hi);
    };
    int hint = target > current ? 1 : -1;
    ras::RefinementOutcome outcome =
        ras::run_refinement(current, hint, lo, hi, scorer, config);

    iterations.push_back(outcome.iterations_used);
    if (outcome.status == ras::RefinementStatus::kSuccess) {
      check.require(outcome.iterations_used <= 10,
                    "success recorded past the iteration budget");
      ++successes;
    }
  }

  std::sort(iterations.begin(), iterations.end());
  double median = 0.5 * (iterations[99] + iterations[100]);
  check.require(successes >= 190, "only " + std::to_string(successes) +
                                      "/200 trials converged, want >= 190");
  check.require(median <= 4.0,
                "median iterations " + fmt(median) + ", want <= 4");
}

// ---------------------------------------------------------------------------
// 4. Termination: a reward stuck at 2 retires the joint after exactly the
//    low-reward streak limit, a 9 succeeds immediately, and a 6 burns the
//    whole budget and stops at exactly max_iterations.

void c04_termination(Check& check) {
  ras::RasConfig config;
  config.rng_seed = 4;
  auto constant = [](int reward) {
    return [reward](double) { return reward; };
  };

  ras::RefinementOutcome poor =
      ras::run_refinement(0.0, 1, -1.0, 1.0, constant(2), config);
  check.require(poor.status == ras::RefinementStatus::kJointFailure,
                "constant reward 2 must end in joint_failure");
  check.require(
      poor.history.size() == static_cast<size_t>(config.low_reward_streak_limit),
      "joint_failure after " + std::to_string(poor.history.size()) +
          " iterations, want exactly " +
          std::to_string(config.low_reward_streak_limit));

  ras::RefinementOutcome good =
      ras::run_refinement(0.0, 1, -1.0, 1.0, constant(9), config);
  check.require(good.status == ras::RefinementStatus::kSuccess,
                "constant reward 9 must succeed");
  check.require(good.iterations_used == 0 && good.history.size() == 1,
                "reward 9 must terminate at t = 0");
  check.require(good.reward_final == 9, "final reward must be 9");

  ras::RefinementOutcome middling =
      ras::run_refinement(0.0, 1, -1.0, 1.0, constant(6), config);
  check.require(middling.status == ras::RefinementStatus::kBudgetExhausted,
                "constant reward 6 must exhaust the budget");
  check.require(middling.iterations_used == config.max_iterations,
                "budget ended at iteration " +
                    std::to_string(middling.iterations_used) + ", want " +
                    std::to_string(config.max_iterations));
  check.require(
      middling.history.size() == static_cast<size_t>(config.max_iterations) + 1,
      "history must hold max_iterations + 1 scored sets");
}

// ---------------------------------------------------------------------------
// 5. Keyframe selection lands on motion extrema: a sampled sinusoid over n
//    half-periods yields exactly n keyframes, each within one sample period
//    of the analytic extremum; target-only windows yield the window end.

void c05_keyframes(Check& check) {
  struct Sweep {
    double amplitude;
    double frequency;
    double rate;  // at least 20 * frequency
    int half_periods;
  };
  const Sweep sweeps[] = {
      {0.8, 0.5, 20.0, 1},  {0.8, 0.5, 20.0, 4}, {0.3, 1.0, 40.0, 3},
      {0.5, 0.25, 10.0, 5}, {0.9, 2.0, 60.0, 6},
  };

  for (const Sweep& sweep : sweeps) {
    double duration = sweep.half_periods / (2.0 * sweep.frequency);
    int count = static_cast<int>(std::lround(duration * sweep.rate)) + 1;
    std::vector<kinesim::Pose> samples;
    samples.reserve(count);
    for (int k = 0; k < count; ++k) {
      double t = k / sweep.rate;
      samples.push_back(
          {sweep.amplitude * std::sin(2.0 * M_PI * sweep.frequency * t)});
    }

    std::vector<int> keys = kinesim::select_keyframes(samples, {0}, true);
    check.require(
        static_cast<int>(keys.size()) == sweep.half_periods,
        "sinusoid with " + std::to_string(sweep.half_periods) +
            " half-periods produced " + std::to_string(keys.size()) +
            " keyframes");
    if (static_cast<int>(keys.size()) != sweep.half_periods) continue;

    for (int k = 0; k < sweep.half_periods; ++k) {
      double extremum = (2.0 * k + 1.0) / (4.0 * sweep.frequency);
      double at = keys[k] / sweep.rate;
      check.require(std::abs(at - extremum) <= 1.0 / sweep.rate + 1e-12,
                    "keyframe at t = " + fmt(at) + " is more than one sample "
                    "from the extremum at t = " + fmt(extremum));
    }
  }

  // Target-only windows: one keyframe, the settled end pose.
  mjcf::RobotModel arm = load_model("arm3.xml");
  for (const auto& [joint, value] :
       std::vector<std::pair<std::string, double>>{{"j1", 1.0}, {"j3", -0.5}}) {
    pipeline::JointCommand command;
    command.kind = pipeline::CommandKind::kSetTarget;
    command.joint = joint;
    command.value = value;
    std::vector<kinesim::Pose> samples =
        kinesim::simulate_step(arm, arm.default_pose, {command}, 2.0, 20.0);
    std::vector<int> keys = kinesim::select_keyframes(
        samples, {arm.joint_index(joint)}, false);
    check.require(keys.size() == 1, "target step produced " +
                                        std::to_string(keys.size()) +
                                        " keyframes, want 1");
    check.require(!keys.empty() &&
                      keys.front() == static_cast<int>(samples.size()) - 1,
                  "target step keyframe must be the window end");
  }
}

// ---------------------------------------------------------------------------
// 6. Probe poses displace each joint by exactly half its half-range on both
//    sides of the default, clipped into the limits, and every joint ships
//    six labeled images.

void c06_probe_dataset(Check& check) {
  for (const char* file : {"arm3.xml", "duck.xml", "humanoid12.xml"}) {
    mjcf::RobotModel model = load_model(file);
    kinesim::ProbeOptions options;
    options.pixels = 64;  // value checks do not depend on resolution
    std::vector<kinesim::JointProbe> probes =
        kinesim::build_joint_probes(model, model.default_pose, options);

    check.require(probes.size() == model.joints.size(),
                  std::string(file) + ": one probe per joint");
    for (size_t j = 0; j < probes.size(); ++j) {
      const mjcf::JointDescriptor& joint = model.joints[j];
      const kinesim::JointProbe& probe = probes[j];
      double delta = 0.5 * ((joint.limit_max - joint.limit_min) / 2.0);
      double minus = std::clamp(probe.base_value - delta, joint.limit_min,
                                joint.limit_max);
      double plus = std::clamp(probe.base_value + delta, joint.limit_min,
                               joint.limit_max);

      check.require(probe.minus_value == minus,
                    std::string(file) + " " + joint.name + ": minus probe " +
                        fmt(probe.minus_value) + ", want " + fmt(minus));
      check.require(probe.plus_value == plus,
                    std::string(file) + " " + joint.name + ": plus probe " +
                        fmt(probe.plus_value) + ", want " + fmt(plus));
      check.require(probe.images.size() == 6,
                    std::string(file) + " " + joint.name + ": " +
                        std::to_string(probe.images.size()) +
                        " images, want 6");
      check.require(probe.minus_degenerate ==
                        (std::abs(minus - probe.base_value) < 1e-9),
                    std::string(file) + " " + joint.name +
                        ": minus degeneracy flag is wrong");
      check.require(probe.plus_degenerate ==
                        (std::abs(plus - probe.base_value) < 1e-9),
                    std::string(file) + " " + joint.name +
                        ": plus degeneracy flag is wrong");
    }
  }

  // The on-disk dataset mirrors the in-memory counts: 6 per joint.
  cli::LoadedModel arm =
      cli::load_model_file((models_dir() / "arm3.xml").string());
  int written = cli::write_visual_dataset(arm.model, fresh_dir("dataset"), 64);
  check.require(written == 18, "arm3 dataset wrote " +
                                   std::to_string(written) +
                                   " images, want 18");
}

// ---------------------------------------------------------------------------
// 7. Joint limits hold everywhere: candidate sets under absurd spreads,
//    commands built from hostile critic values, and every trajectory sample.

void c07_limits_hold(Check& check) {
  // Candidate sets survive adversarial spreads.
  ras::PinnedRng draws(11);
  for (int round = 0; round < 40; ++round) {
    double lo = -2.0 * draws.uniform01() - 0.01;
    double hi = 2.0 * draws.uniform01() + 0.01;
    ras::RasConfig config;
    config.sigma_base = 0.5 + 50.0 * draws.uniform01();
    config.alpha = 0.9;
    config.beta = 10.0;
    config.rng_seed = static_cast<std::uint64_t>(round);
    ras::PinnedRng rewards(31 * static_cast<std::uint64_t>(round) + 7);
    auto scorer = [&rewards](double) {
      return 1 + static_cast<int>(rewards.uniform01() * 7.0);
    };
    double start = lo + (hi - lo) * draws.uniform01();
    ras::RefinementOutcome outcome =
        ras::run_refinement(start, round % 3 - 1, lo, hi, scorer, config);
    for (const ras::CandidateSet& set : outcome.history) {
      for (double v : set.values) {
        check.require(v >= lo && v <= hi, "candidate " + fmt(v) +
                                              " left [" + fmt(lo) + ", " +
                                              fmt(hi) + "]");
      }
    }
    check.require(outcome.v_final >= lo && outcome.v_final <= hi,
                  "v_final escaped the limits");
  }

  // Commands assembled from hostile critic replies come back clipped.
  mjcf::RobotModel arm = load_model("arm3.xml");
  kinesim::ProbeOptions options;
  options.pixels = 48;
  std::vector<kinesim::JointProbe> probes =
      kinesim::build_joint_probes(arm, arm.default_pose, options);
  pipeline::BehaviorStep step;
  step.index = 1;
  step.description = "swing the arm";
  step.start_time = 0.0;
  step.end_time = 2.0;

  const char* hostile[] = {
      R"({"role": "code_generator", "reply": {"commands": [{"joint": "j1", "type": "target", "value": 1e9}], "direction_hint": 1}})",
      R"({"role": "code_generator", "reply": {"commands": [{"joint": "j2", "type": "target", "value": -1e9}], "direction_hint": -1}})",
      R"({"role": "code_generator", "reply": {"commands": [{"joint": "j2", "type": "oscillate", "center": 5.0, "amplitude": 99.0, "cycles": 2.0}], "direction_hint": 0}})",
      R"({"role": "code_generator", "reply": {"commands": [{"joint": "j3", "type": "oscillate", "center": -99.0, "amplitude": 1.0, "cycles": 1.0}], "direction_hint": 0}})",
  };
  std::vector<pipeline::JointCommand> clipped;
  for (const char* line : hostile) {
    critic::ScriptedBackend backend = critic::ScriptedBackend::from_text(line);
    pipeline::SelectedCommands selected = pipeline::select_joint_and_value(
        backend, arm, step, {"j1", "j2", "j3"}, arm.default_pose, probes);
    for (const pipeline::JointCommand& command : selected.commands.commands) {
      const mjcf::JointDescriptor& joint = arm.joint(command.joint);
      if (command.kind == pipeline::CommandKind::kSetTarget) {
        check.require(command.value >= joint.limit_min &&
                          command.value <= joint.limit_max,
                      command.joint + ": target " + fmt(command.value) +
                          " escaped the limits");
      } else {
        check.require(command.center - command.amplitude >= joint.limit_min &&
                          command.center + command.amplitude <= joint.limit_max,
                      command.joint + ": oscillation sweeps outside limits");
      }
      clipped.push_back(command);
    }
  }
  check.require(clipped.size() == 4, "every hostile reply must yield a command");

  // Raw out-of-range commands cannot push a trajectory sample outside.
  std::vector<pipeline::JointCommand> raw(4);
  raw[0] = {pipeline::CommandKind::kSetTarget, "j1", 1e9, 0.0, 0.0, 1.0};
  raw[1] = {pipeline::CommandKind::kSetTarget, "j3", -1e9, 0.0, 0.0, 1.0};
  raw[2] = {pipeline::CommandKind::kOscillate, "j2", 0.0, 0.0, 50.0, 3.0};
  raw[3] = {pipeline::CommandKind::kOscillate, "j1", 0.0, 1.5, 4.0, 2.0};
  for (const pipeline::JointCommand& command : raw) {
    std::vector<kinesim::Pose> samples =
        kinesim::simulate_step(arm, arm.default_pose, {command}, 1.0, 20.0);
    for (const kinesim::Pose& pose : samples) {
      for (size_t j = 0; j < pose.size(); ++j) {
        check.require(pose[j] >= arm.joints[j].limit_min &&
                          pose[j] <= arm.joints[j].limit_max,
                      arm.joints[j].name + ": sample " + fmt(pose[j]) +
                          " escaped the limits");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 8. When the critic blames several steps, the earliest valid index wins.
//    Exhaustive over every reply tuple of size 1..4 drawn from each plan's
//    index pool (valid indices plus one marker below and one above).

void c08_earliest_step(Check& check) {
  for (int length = 1; length <= 6; ++length) {
    pipeline::BehaviorPlan plan;
    plan.action = "inspect the shelf";
    for (int i = 1; i <= length; ++i) {
      pipeline::BehaviorStep step;
      step.index = i;
      step.description = "step " + std::to_string(i);
      step.start_time = 2.0 * (i - 1);
      step.end_time = 2.0 * i;
      plan.steps.push_back(step);
    }

    std::vector<int> pool;
    for (int v = 0; v <= length + 1; ++v) pool.push_back(v);

    // One scripted reply per tuple, consumed in generation order.
    std::vector<std::vector<int>> tuples;
    for (int size = 1; size <= 4; ++size) {
      std::vector<int> digits(size, 0);
      while (true) {
        std::vector<int> tuple;
        for (int d : digits) tuple.push_back(pool[d]);
        tuples.push_back(tuple);
        int d = size - 1;
        while (d >= 0 && ++digits[d] == static_cast<int>(pool.size())) {
          digits[d] = 0;
          --d;
        }
        if (d < 0) break;
      }
    }

    std::ostringstream script;
    for (const std::vector<int>& tuple : tuples) {
      script << R"({"role": "step_pinpointer", "reply": {"step_indices": [)";
      for (size_t i = 0; i < tuple.size(); ++i) {
        if (i) script << ", ";
        script << tuple[i];
      }
      script << "]}}\n";
    }

    critic::ScriptedBackend backend =
        critic::ScriptedBackend::from_text(script.str());
    for (const std::vector<int>& tuple : tuples) {
      int expected = length + 1;
      for (int v : tuple) {
        if (v >= 1 && v <= length) expected = std::min(expected, v);
      }
      if (expected <= length) {
        int got = pipeline::pinpoint_erroneous_step(backend, plan.action, plan,
                                                    "it looks wrong");
        if (got != expected) {
          std::ostringstream what;
          what << "plan length " << length << ", reply [";
          for (size_t i = 0; i < tuple.size(); ++i) {
            if (i) what << ", ";
            what << tuple[i];
          }
          what << "]: picked " << got << ", want " << expected;
          check.require(false, what.str());
          return;
        }
      } else {
        try {
          pipeline::pinpoint_erroneous_step(backend, plan.action, plan,
                                            "it looks wrong");
          check.require(false, "all-invalid reply must raise IndexOutOfRange");
          return;
        } catch (const Error& e) {
          check.require(e.kind() == ErrorKind::kIndexOutOfRange,
                        std::string("wrong error kind: ") + e.what());
        }
      }
    }

    // The single-index reply form obeys the same bounds.
    critic::ScriptedBackend single = critic::ScriptedBackend::from_text(
        R"({"role": "step_pinpointer", "reply": {"step_index": 1}})"
        "\n"
        R"({"role": "step_pinpointer", "reply": {"step_index": )" +
        std::to_string(length + 1) + "}}");
    check.require(pipeline::pinpoint_erroneous_step(single, plan.action, plan,
                                                    "still wrong") == 1,
                  "single-index reply must resolve to its step");
    try {
      pipeline::pinpoint_erroneous_step(single, plan.action, plan,
                                        "still wrong");
      check.require(false, "out-of-range single index must throw");
    } catch (const Error& e) {
      check.require(e.kind() == ErrorKind::kIndexOutOfRange,
                    std::string("wrong error kind: ") + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// 9. A scripted end-to-end run is deterministic: two consecutive runs with
//    the frozen reply script and seed 42 write artifacts byte-identical to
//    the checked-in golden file.

void c09_replay(Check& check) {
  std::string golden = slurp(golden_dir() / "wave_artifact.json");
  check.require(!golden.empty(), "golden artifact is missing");

  for (int attempt = 0; attempt < 2; ++attempt) {
    auto dir = fresh_dir("replay_" + std::to_string(attempt));
#ifdef CRISP_CLI_BIN
    std::string command =
        std::string(CRISP_CLI_BIN) + " run --model " +
        (models_dir() / "arm3.xml").string() +
        " --backend scripted --script " +
        (fixtures_dir() / "wave_greeting.jsonl").string() +
        " --context \"wave hello at the visitor\" --seed 42 --out " +
        dir.string() + " > /dev/null 2>&1";
    int status = std::system(command.c_str());
    check.require(WIFEXITED(status) && WEXITSTATUS(status) == 0,
                  "run " + std::to_string(attempt) + " did not exit 0");
#else
    critic::ScriptedBackend backend = critic::ScriptedBackend::from_file(
        (fixtures_dir() / "wave_greeting.jsonl").string());
    cli::RunConfig config;
    config.model_path = (models_dir() / "arm3.xml").string();
    config.context = "wave hello at the visitor";
    config.ras.rng_seed = 42;
    config.out_dir = dir;
    cli::RunResult result = cli::run_pipeline(backend, config);
    check.require(result.exit_code == 0,
                  "run " + std::to_string(attempt) + " did not exit 0");
#endif
    std::string bytes = slurp(dir / "artifact.json");
    check.require(bytes == golden,
                  "run " + std::to_string(attempt) +
                      " artifact differs from the golden bytes");
  }
}

// ---------------------------------------------------------------------------
// 10. Forward kinematics agrees with a naive recursive composition oracle on
//     random trees, to 1e-9 on every world transform entry.

Eigen::Matrix4d translation4(const Eigen::Vector3d& t) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 3) = t.x();
  m(1, 3) = t.y();
  m(2, 3) = t.z();
  return m;
}

Eigen::Matrix4d rotation4(const Eigen::Matrix3d& r) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 3>(0, 0) = r;
  return m;
}

// Textbook unit-quaternion matrix, written out so the oracle shares no code
// with the implementation under test.
Eigen::Matrix3d quaternion_matrix(double w, double x, double y, double z) {
  Eigen::Matrix3d m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return m;
}

// Rodrigues' rotation formula about a unit axis.
Eigen::Matrix3d axis_angle_matrix(const Eigen::Vector3d& axis, double angle) {
  Eigen::Matrix3d k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
         (1 - std::cos(angle)) * k * k;
}

Eigen::Matrix4d naive_world(const mjcf::RobotModel& model,
                            const kinesim::Pose& pose, int body_index) {
  if (body_index == 0) return Eigen::Matrix4d::Identity();
  const mjcf::BodyNode& body = model.bodies[body_index];
  Eigen::Matrix4d m = naive_world(model, pose, model.body_index(*body.parent));
  m = m * translation4(body.local_position);
  const Eigen::Quaterniond& q = body.local_orientation;
  m = m * rotation4(quaternion_matrix(q.w(), q.x(), q.y(), q.z()));
  for (const std::string& name : body.attached_joints) {
    int j = model.joint_index(name);
    const mjcf::JointDescriptor& joint = model.joints[j];
    if (joint.kind == mjcf::JointKind::kHinge) {
      m = m * translation4(joint.anchor) *
          rotation4(axis_angle_matrix(joint.axis, pose[j])) *
          translation4(-joint.anchor);
    } else {
      m = m * translation4(joint.axis * pose[j]);
    }
  }
  return m;
}

void c10_forward_kinematics(Check& check) {
  ras::PinnedRng rng(4242);
  auto coin = [&rng](double lo, double hi) {
    return lo + (hi - lo) * rng.uniform01();
  };

  for (int tree = 0; tree < 100; ++tree) {
    mjcf::RobotModel model;
    model.name = "rig";
    mjcf::BodyNode world;
    world.name = "world";
    model.bodies.push_back(world);

    int body_count = 1 + static_cast<int>(rng.uniform01() * 5.0);  // 1..5
    for (int b = 1; b <= body_count; ++b) {
      mjcf::BodyNode body;
      body.name = "b" + std::to_string(b);
      int parent = static_cast<int>(rng.uniform01() * b);  // 0..b-1
      body.parent = model.bodies[parent].name;
      body.local_position =
          Eigen::Vector3d(coin(-1, 1), coin(-1, 1), coin(-1, 1));
      Eigen::Vector4d raw(rng.normal(), rng.normal(), rng.normal(),
                          rng.normal());
      while (raw.norm() < 0.1) {
        raw = Eigen::Vector4d(rng.normal(), rng.normal(), rng.normal(),
                              rng.normal());
      }
      raw.normalize();
      body.local_orientation = Eigen::Quaterniond(raw(0), raw(1), raw(2),
                                                  raw(3));

      int joint_count = static_cast<int>(rng.uniform01() * 3.0);  // 0..2
      if (b == body_count && model.joints.empty() && joint_count == 0) {
        joint_count = 1;  // keep the pose nonempty
      }
      for (int j = 0; j < joint_count; ++j) {
        mjcf::JointDescriptor joint;
        joint.name = "q" + std::to_string(model.joints.size());
        joint.kind = rng.uniform01() < 0.5 ? mjcf::JointKind::kHinge
                                           : mjcf::JointKind::kSlide;
        joint.body = body.name;
        Eigen::Vector3d axis(coin(-1, 1), coin(-1, 1), coin(-1, 1));
        while (axis.norm() < 0.1) {
          axis = Eigen::Vector3d(coin(-1, 1), coin(-1, 1), coin(-1, 1));
        }
        joint.axis = axis.normalized();
        joint.anchor =
            Eigen::Vector3d(coin(-0.5, 0.5), coin(-0.5, 0.5), coin(-0.5, 0.5));
        joint.limit_min = -coin(0.5, 3.0);
        joint.limit_max = coin(0.5, 3.0);
        body.attached_joints.push_back(joint.name);
        model.joints.push_back(joint);
      }
      model.bodies[parent].children.push_back(body.name);
      model.bodies.push_back(body);
    }
    model.default_pose.assign(model.joints.size(), 0.0);

    kinesim::Pose pose;
    for (const mjcf::JointDescriptor& joint : model.joints) {
      pose.push_back(coin(joint.limit_min, joint.limit_max));
    }

    std::vector<Eigen::Isometry3d> fk = kinesim::forward_kinematics(model, pose);
    for (size_t b = 0; b < model.bodies.size(); ++b) {
      Eigen::Matrix4d expected = naive_world(model, pose, static_cast<int>(b));
      double gap = (fk[b].matrix() - expected).cwiseAbs().maxCoeff();
      check.require(gap < 1e-9, "tree " + std::to_string(tree) + " body " +
                                    model.bodies[b].name + ": max gap " +
                                    fmt(gap));
    }
  }
}

// ---------------------------------------------------------------------------
// 11. The ablation variants change the measured work profile: m4 halves the
//     images per evaluation, m3 raises them, m1 scores one candidate per
//     iteration instead of three, and m2 proposes for every plan step each
//     replan cycle.

void c11_variants(Check& check) {
  auto wave_stats = [&](cli::Variant variant) {
    critic::ScriptedBackend backend = critic::ScriptedBackend::from_file(
        (fixtures_dir() / "wave_greeting.jsonl").string());
    cli::RunConfig config;
    config.model_path = (models_dir() / "arm3.xml").string();
    config.context = "wave hello at the visitor";
    config.ras.rng_seed = 42;
    config.variant = variant;
    config.pixels = 96;
    return cli::run_pipeline(backend, config).stats;
  };

  critic::UsageStats full = wave_stats(cli::Variant::kFull);
  critic::UsageStats m4 = wave_stats(cli::Variant::kM4);
  critic::UsageStats m3 = wave_stats(cli::Variant::kM3);
  const std::string evaluator = "holistic_evaluator";
  check.require(full.requests_per_role.at(evaluator) == 2 &&
                    m4.requests_per_role.at(evaluator) == 2 &&
                    m3.requests_per_role.at(evaluator) == 2,
                "every wave run must evaluate twice");
  int full_images = full.images_per_role.at(evaluator);
  int m4_images = m4.images_per_role.at(evaluator);
  int m3_images = m3.images_per_role.at(evaluator);
  check.require(2 * m4_images == full_images,
                "m4 sent " + std::to_string(m4_images) +
                    " evaluation images, want exactly half of " +
                    std::to_string(full_images));
  check.require(m3_images > full_images,
                "m3 sent " + std::to_string(m3_images) +
                    " evaluation images, want more than " +
                    std::to_string(full_images));

  auto oracle_run = [&](cli::Variant variant,
                        const std::map<std::string, double>& targets) {
    cli::RunConfig config;
    config.model_path = (models_dir() / "arm3.xml").string();
    config.ras.rng_seed = 7;
    config.variant = variant;
    config.pixels = 96;
    return cli::run_pipeline(targets, config);
  };
  auto scoring_shape = [](const cli::RunResult& result) {
    std::pair<int, int> shape{0, 0};  // iterations, scored candidates
    for (const artifact::StepLog& log : result.artifact.step_logs) {
      for (const ras::CandidateSet& record : log.records) {
        shape.first += 1;
        shape.second += static_cast<int>(record.values.size());
      }
    }
    return shape;
  };

  const std::map<std::string, double> one_target{{"j1", 1.0}};
  cli::RunResult full_run = oracle_run(cli::Variant::kFull, one_target);
  cli::RunResult m1_run = oracle_run(cli::Variant::kM1, one_target);
  auto [full_iters, full_scored] = scoring_shape(full_run);
  auto [m1_iters, m1_scored] = scoring_shape(m1_run);
  const std::string scorer = "reward_scorer";
  check.require(full_iters > 0 && m1_iters > 0,
                "oracle runs must search at least one iteration");
  check.require(full_scored == 3 * full_iters &&
                    full_run.stats.requests_per_role.at(scorer) == full_scored,
                "full run must score three candidates per iteration");
  check.require(m1_scored == m1_iters &&
                    m1_run.stats.requests_per_role.at(scorer) == m1_scored,
                "m1 run must score one candidate per iteration");

  const std::map<std::string, double> two_targets{{"j1", 1.0}, {"j3", -0.5}};
  cli::RunResult m2_run = oracle_run(cli::Variant::kM2, two_targets);
  cli::RunResult full_pair = oracle_run(cli::Variant::kFull, two_targets);
  const std::string proposer = "refinement_proposer";
  int plan_length = static_cast<int>(m2_run.artifact.plan.steps.size());
  check.require(plan_length == 2, "two targets must synthesize two steps");
  check.require(m2_run.replans_used >= 1 && full_pair.replans_used >= 1,
                "default commands must miss the targets");
  check.require(m2_run.stats.requests_per_role.at(proposer) >=
                    plan_length * m2_run.replans_used,
                "m2 must propose for every step each cycle, saw " +
                    std::to_string(m2_run.stats.requests_per_role.at(proposer)) +
                    " proposals over " +
                    std::to_string(m2_run.replans_used) + " cycles");
  check.require(full_pair.stats.requests_per_role.at(proposer) ==
                    full_pair.replans_used,
                "the full pipeline proposes once per cycle");
}

// ---------------------------------------------------------------------------

struct Criterion {
  const char* label;
  double budget_seconds;
  void (*run)(Check&);
};

const Criterion kCriteria[] = {
    {"spread schedule is exact", 1.0, c01_sigma_schedule},
    {"initial candidates: 2 hinted + 1 opposite, in limits", 5.0,
     c02_initial_candidates},
    {"refinement converges on reachable targets", 30.0, c03_convergence},
    {"termination statuses honor their budgets", 1.0, c04_termination},
    {"keyframes land on motion extrema", 5.0, c05_keyframes},
    {"probe values and image counts are exact", 10.0, c06_probe_dataset},
    {"joint limits hold under adversarial inputs", 10.0, c07_limits_hold},
    {"earliest blamed step wins", 1.0, c08_earliest_step},
    {"scripted run replays byte for byte", 30.0, c09_replay},
    {"forward kinematics matches a naive oracle", 5.0, c10_forward_kinematics},
    {"ablation variants shift the work profile", 10.0, c11_variants},
};

}  // namespace

int main() {
  int failures = 0;
  for (size_t i = 0; i < std::size(kCriteria); ++i) {
    const Criterion& criterion = kCriteria[i];
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("unexpected exception: ") + e.what());
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    check.require(seconds < criterion.budget_seconds,
                  "took " + fmt(seconds) + "s, budget " +
                      fmt(criterion.budget_seconds) + "s");

    std::ostringstream line;
    line << "criterion " << (i + 1 < 10 ? " " : "") << i + 1 << ": "
         << (check.ok ? "pass" : "FAIL") << "  [" << std::fixed
         << std::setprecision(2) << seconds << "s]  " << criterion.label;
    if (!check.ok) {
      line << "\n    " << check.detail;
      ++failures;
    }
    std::cout << line.str() << "\n";
  }

  if (failures > 0) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
