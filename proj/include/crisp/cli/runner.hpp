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

#ifndef CRISP_CLI_RUNNER_HPP_
#define CRISP_CLI_RUNNER_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "crisp/artifact/artifact.hpp"
#include "crisp/critic/instrumented.hpp"
#include "crisp/critic/types.hpp"
#include "crisp/kinesim/trajectory.hpp"
#include "crisp/mjcf/model.hpp"
#include "crisp/pipeline/types.hpp"
#include "crisp/ras/search.hpp"

namespace crisp::cli {

// Behavioral variants. Each changes exactly one thing:
//   full  reference behavior
//   m1    refinement samples a single candidate per iteration instead of 3
//   m2    every refinement cycle repairs all plan steps, not just the
//         pinpointed one
//   m3    visual logs sample the timeline every log_interval seconds from
//         three fixed views instead of capturing motion keyframes
//   m4    zoom views are dropped from every critic image bundle
enum class Variant { kFull, kM1, kM2, kM3, kM4 };

const char* to_string(Variant variant);
Variant variant_from_name(const std::string& name);  // throws InvalidConfig

struct RunConfig {
  std::string model_path;
  std::string context;  // the behavior instruction
  ras::RasConfig ras;   // rng_seed doubles as the run's master seed
  int max_replans = 10;
  Variant variant = Variant::kFull;
  std::filesystem::path out_dir;  // empty keeps the run in memory
  int pixels = 256;
  double sample_rate = 20.0;   // trajectory samples per second
  double log_interval = 0.5;   // m3 frame spacing, seconds
};

void validate_run_config(const RunConfig& config);  // throws InvalidConfig

struct RunResult {
  artifact::BehaviorArtifact artifact;
  std::filesystem::path artifact_path;  // empty when out_dir was empty
  int exit_code = 0;  // 0 pass, 2 replan budget exhausted, 3 joint failure
  int replans_used = 0;
  critic::UsageStats stats;  // all critic traffic the run generated
};

struct LoadedModel {
  mjcf::RobotModel model;
  std::string xml;  // raw bytes, hashed into the artifact
};

LoadedModel load_model_file(const std::string& path);  // throws Io

// The full authoring loop: translate, plan, generate commands, then
// evaluate and refine until the critic passes, the replan budget (at most
// max_replans refinement cycles) runs out, or a refinement proposal names a
// joint already blacklisted for its step. Under out_dir the run leaves
// artifact.json (rewritten atomically after every change), probe images,
// per-evaluation frames, and trajectory.csv; on a stage error the artifact
// stays on disk in status in_progress and the error is rethrown with the
// stage name. The search for step k in refinement cycle c is seeded with
// ras.rng_seed + 7919 * c + k so identical runs replay bit for bit.
RunResult run_pipeline(critic::CriticBackend& backend,
                       const RunConfig& config);

// Closed-loop variant against known target poses: the plan (one step per
// target, model_path's defaults as starting commands) and the pass/fail
// evaluation (every target within 0.15 of its joint's normalized range) are
// synthesized locally; proposals and rewards flow through a geometric
// oracle, so the whole loop runs without a seeing critic.
RunResult run_pipeline(const std::map<std::string, double>& targets,
                       const RunConfig& config);

// Reruns the evaluate and refine loop over the artifact already sitting at
// out_dir/artifact.json, keeping its plan, commands, and history. The model
// file must hash to the artifact's recorded robot (ModelMismatch otherwise).
// Cycle numbering restarts, so resuming twice from the same bytes replays
// identically.
RunResult resume_refinement(critic::CriticBackend& backend,
                            const RunConfig& config);

// Oracle-judged resume; targets play the same role as in the oracle
// run_pipeline overload.
RunResult resume_refinement(const std::map<std::string, double>& targets,
                            const RunConfig& config);

// The critic's visual evidence for one evaluation pass, per the variant:
// keyframe captures with full and zoom views (full/m1/m2), zoomless
// keyframes (m4), or timeline samples every log_interval seconds from
// front, side, and top views (m3).
std::vector<kinesim::LabeledImage> render_visual_log(
    const mjcf::RobotModel& model, const pipeline::BehaviorPlan& plan,
    const pipeline::CommandSequence& sequence, Variant variant, int pixels,
    double sample_rate, double log_interval);

// Writes frames as <NNN>_<sanitized label>.png under dir, creating it.
void write_frame_sequence(const std::filesystem::path& dir,
                          const std::vector<kinesim::LabeledImage>& frames);

// time column plus one column per joint, canonical floats, LF lines.
std::string trajectory_csv(const mjcf::RobotModel& model,
                           const kinesim::Timeline& timeline);

// Fixed-width joint listing: name, kind, range, default, owning body.
std::string joint_table(const mjcf::RobotModel& model);

// Renders every joint's range-of-motion probe sheet into dir and writes a
// visual_dataset.json manifest describing the files. Returns the image
// count (six per joint: minus/base/plus in full and zoom views).
int write_visual_dataset(const mjcf::RobotModel& model,
                         const std::filesystem::path& dir, int pixels);

}  // namespace crisp::cli

#endif  // CRISP_CLI_RUNNER_HPP_
