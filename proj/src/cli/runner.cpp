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

#include "crisp/cli/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

#include "crisp/canonical.hpp"
#include "crisp/critic/oracle.hpp"
#include "crisp/errors.hpp"
#include "crisp/kinesim/keyframes.hpp"
#include "crisp/kinesim/png.hpp"
#include "crisp/kinesim/probes.hpp"
#include "crisp/kinesim/render.hpp"
#include "crisp/pipeline/stages.hpp"
#include "json.hpp"

namespace crisp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sanitize(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "frame" : out;
}

std::string padded(int value, int width) {
  std::string digits = std::to_string(value);
  while (static_cast<int>(digits.size()) < width) digits.insert(0, 1, '0');
  return digits;
}

int step_position(const pipeline::BehaviorPlan& plan, int step_index) {
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    if (plan.steps[i].index == step_index) return static_cast<int>(i);
  }
  throw Error(ErrorKind::kIndexOutOfRange,
              "plan has no step " + std::to_string(step_index));
}

pipeline::JointCommand* find_command(pipeline::CommandSequence& sequence,
                                     int step_index,
                                     const std::string& joint) {
  for (pipeline::StepCommands& step : sequence.steps) {
    if (step.step_index != step_index) continue;
    for (pipeline::JointCommand& command : step.commands) {
      if (command.joint == joint) return &command;
    }
  }
  return nullptr;
}

// One behavior run. Both entry points share this loop; they differ only in
// how the plan comes to exist and who judges the visual log.
struct Runner {
  critic::InstrumentedBackend& backend;
  const LoadedModel& loaded;
  const RunConfig& config;
  ras::RasConfig ras_cfg;

  std::string action;
  pipeline::BehaviorPlan plan;
  pipeline::CommandSequence sequence;
  std::vector<kinesim::JointProbe> probes;
  std::function<critic::EvaluationReply(
      const std::vector<kinesim::LabeledImage>&)>
      evaluate;
  std::function<int(const std::string&)> pinpoint;

  RunResult result;
  std::map<int, std::set<std::string>> blacklist;  // per step index
  const char* stage = "setup";

  const mjcf::RobotModel& model() const { return loaded.model; }

  Runner(critic::InstrumentedBackend& backend_in, const LoadedModel& loaded_in,
         const RunConfig& config_in, ras::RasConfig ras_in)
      : backend(backend_in),
        loaded(loaded_in),
        config(config_in),
        ras_cfg(ras_in) {
    result.artifact.context = config.context;
    result.artifact.model_name = loaded.model.name;
    result.artifact.model_hash = content_hash_of(loaded.xml);
    result.artifact.config = ras_cfg;
    result.artifact.seed = config.ras.rng_seed;
  }

  static std::string content_hash_of(const std::string& xml) {
    return artifact::content_hash(xml);
  }

  void persist() {
    if (config.out_dir.empty()) return;
    result.artifact_path = config.out_dir / "artifact.json";
    artifact::write_artifact(result.artifact, result.artifact_path);
  }

  // Stage errors leave the artifact on disk in status in_progress and
  // resurface with the stage name attached.
  template <typename Fn>
  RunResult execute(Fn&& flow) {
    try {
      flow();
    } catch (const Error& e) {
      persist();
      std::string what = e.what();
      std::string prefix = std::string(to_string(e.kind())) + ": ";
      if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
      throw Error(e.kind(), std::string("stage ") + stage + ": " + what);
    }
    result.stats = backend.stats();
    return std::move(result);
  }

  kinesim::ProbeOptions probe_options() const {
    kinesim::ProbeOptions options;
    options.pixels = config.pixels;
    options.include_zoom = config.variant != Variant::kM4;
    return options;
  }

  pipeline::CommandSequence generate_all_commands() {
    pipeline::CommandSequence out;
    kinesim::Pose pose = model().default_pose;
    for (const pipeline::BehaviorStep& step : plan.steps) {
      stage = "candidates";
      std::vector<std::string> candidates =
          pipeline::identify_candidate_joints(backend, model(), step, probes);
      stage = "codegen";
      pipeline::SelectedCommands selected = pipeline::select_joint_and_value(
          backend, model(), step, candidates, pose, probes);
      out.steps.push_back(selected.commands);
      pose = kinesim::simulate_step(model(), pose, selected.commands.commands,
                                    step.duration(), config.sample_rate)
                 .back();
    }
    return out;
  }

  kinesim::Pose entry_pose(const pipeline::CommandSequence& with,
                           int position) const {
    kinesim::Timeline timeline =
        kinesim::simulate_plan(model(), plan, with, config.sample_rate);
    return timeline.samples[timeline.step_sample_ranges[position].first];
  }

  // Final pose of the step with one candidate scalar swapped in, rendered
  // as the scorer's evidence.
  std::vector<kinesim::LabeledImage> candidate_frames(
      const pipeline::StepCommands& step_commands, int position,
      const std::string& joint, bool oscillating, double candidate,
      const kinesim::Pose& entry) const {
    std::vector<pipeline::JointCommand> commands = step_commands.commands;
    for (pipeline::JointCommand& command : commands) {
      if (command.joint != joint) continue;
      if (oscillating) {
        command.amplitude = candidate;
      } else {
        command.value = candidate;
      }
    }
    kinesim::Pose final_pose =
        kinesim::simulate_step(model(), entry, commands,
                               plan.steps[position].duration(),
                               config.sample_rate)
            .back();

    std::vector<kinesim::LabeledImage> frames;
    std::string base_label = "step " + std::to_string(plan.steps[position].index) +
                             " " + joint + " candidate " +
                             format_double(candidate);
    kinesim::CameraSpec camera;
    kinesim::RenderOptions options;
    options.pixels = config.pixels;
    options.label = base_label + " (full)";
    frames.push_back({options.label,
                      kinesim::render_model(model(), final_pose, camera,
                                            kinesim::full_view_frame(model(), camera),
                                            options)});
    if (config.variant != Variant::kM4) {
      int body = model().body_index(model().joint(joint).body);
      kinesim::RenderOptions zoom;
      zoom.pixels = config.pixels;
      zoom.label = base_label + " (zoom)";
      zoom.highlight_body = body;
      frames.push_back(
          {zoom.label,
           kinesim::render_model(model(), final_pose, camera,
                                 kinesim::zoom_view_frame(model(), final_pose,
                                                          camera, body),
                                 zoom)});
    }
    return frames;
  }

  // One proposal for one step: ask, validate against the blacklist, apply,
  // and search the scalar. Returns false when the run must end in joint
  // failure (the critic re-proposed a joint that already failed here).
  bool refine_step(int step_index, const std::string& critique,
                   const std::vector<kinesim::LabeledImage>& frames,
                   int cycle) {
    stage = "propose";
    std::string full_critique = critique;
    std::set<std::string>& black = blacklist[step_index];
    if (!black.empty()) {
      full_critique += "; joints unavailable for this step:";
      for (const std::string& joint : black) full_critique += " " + joint;
    }
    critic::ProposalReply proposal = pipeline::propose_refinement(
        backend, model(), action, plan, sequence, step_index, full_critique,
        frames);
    result.artifact.proposals.push_back(proposal);

    if (black.count(proposal.command.joint) != 0) {
      artifact::ProposalOutcome outcome;
      outcome.status = ras::RefinementStatus::kJointFailure;
      outcome.searched = false;
      result.artifact.outcomes.push_back(outcome);
      return false;
    }

    stage = "apply_proposal";
    pipeline::CommandSequence working = sequence;
    pipeline::apply_proposal(model(), working, proposal);

    if (proposal.kind == critic::ProposalKind::kDelete) {
      sequence = std::move(working);
      artifact::ProposalOutcome outcome;
      outcome.status = ras::RefinementStatus::kSuccess;
      outcome.searched = false;
      result.artifact.outcomes.push_back(outcome);
      return true;
    }

    stage = "refine";
    pipeline::JointCommand* target =
        find_command(working, step_index, proposal.command.joint);
    if (target == nullptr) {
      throw Error(ErrorKind::kInvalidProposal,
                  "refined command for joint '" + proposal.command.joint +
                      "' is missing after surgery");
    }
    const mjcf::JointDescriptor& joint = model().joint(target->joint);
    bool oscillating = target->kind == pipeline::CommandKind::kOscillate;
    int position = step_position(plan, step_index);
    kinesim::Pose entry = entry_pose(working, position);
    double base = entry[model().joint_index(target->joint)];

    double lo = joint.limit_min;
    double hi = joint.limit_max;
    double current = target->value;
    if (oscillating) {
      lo = 0.0;
      hi = std::min(target->center - joint.limit_min,
                    joint.limit_max - target->center);
      current = target->amplitude;
    }
    if (proposal.kind == critic::ProposalKind::kAdjust) {
      // Search starts from the faulty value, not the critic's suggestion.
      pipeline::JointCommand* old =
          find_command(sequence, step_index, proposal.command.joint);
      if (old != nullptr && old->kind == target->kind) {
        current = oscillating ? old->amplitude : old->value;
      }
    }
    current = std::clamp(current, lo, hi);

    if (!(hi - lo >= 1e-6)) {
      // Nothing to search: the scalar has no room. Same exit as a failed
      // search, so the evaluator can steer toward another joint.
      black.insert(target->joint);
      artifact::ProposalOutcome outcome;
      outcome.status = ras::RefinementStatus::kJointFailure;
      outcome.searched = false;
      result.artifact.outcomes.push_back(outcome);
      return true;
    }

    const pipeline::StepCommands& step_commands =
        *std::find_if(working.steps.begin(), working.steps.end(),
                      [&](const pipeline::StepCommands& s) {
                        return s.step_index == step_index;
                      });
    std::string joint_name = target->joint;
    ras::Scorer scorer = [&](double candidate) {
      critic::CriticRequest request;
      request.role = critic::Role::kRewardScorer;
      request.schema = critic::ReplySchema::kScore;
      request.sections.push_back({"action", action});
      request.sections.push_back(
          {"step", pipeline::step_text(plan.steps[position])});
      json query;
      query["joint"] = joint_name;
      query["candidate"] = candidate;
      query["base"] = base;
      request.sections.push_back({"query", query.dump()});
      request.images = candidate_frames(step_commands, position, joint_name,
                                        oscillating, candidate, entry);
      critic::StructuredReply reply = backend.complete(request);
      return std::get<critic::ScoreReply>(reply).reward;
    };

    ras::RasConfig search_cfg = ras_cfg;
    search_cfg.rng_seed = ras_cfg.rng_seed +
                          7919ULL * static_cast<std::uint64_t>(cycle) +
                          static_cast<std::uint64_t>(step_index);
    ras::RefinementOutcome outcome = ras::run_refinement(
        current, proposal.direction_hint, lo, hi, scorer, search_cfg);

    artifact::ProposalOutcome summary;
    summary.status = outcome.status;
    summary.searched = true;
    summary.v_final = outcome.v_final;
    summary.reward_final = outcome.reward_final;
    summary.iterations_used = outcome.iterations_used;
    result.artifact.outcomes.push_back(summary);

    if (outcome.status == ras::RefinementStatus::kJointFailure) {
      black.insert(joint_name);
    } else {
      if (oscillating) {
        target->amplitude = outcome.v_final;
      } else {
        target->value = outcome.v_final;
      }
      *target = pipeline::clip_command(model(), *target);
      sequence = std::move(working);
    }

    artifact::StepLog log;
    log.step_index = step_index;
    for (const ras::CandidateSet& record : outcome.history) {
      artifact::append_step_record(log, record);
    }
    log.blacklist.assign(black.begin(), black.end());
    result.artifact.step_logs.push_back(std::move(log));
    return true;
  }

  void write_cycle_outputs(int cycle,
                           const std::vector<kinesim::LabeledImage>& frames) {
    if (config.out_dir.empty()) return;
    write_frame_sequence(
        config.out_dir / "frames" / ("eval_" + padded(cycle, 2)), frames);
    kinesim::Timeline timeline =
        kinesim::simulate_plan(model(), plan, sequence, config.sample_rate);
    std::ofstream csv(config.out_dir / "trajectory.csv",
                      std::ios::binary | std::ios::trunc);
    csv << trajectory_csv(model(), timeline);
    if (!csv) {
      throw Error(ErrorKind::kIo, "cannot write trajectory.csv");
    }
  }

  void run_loop() {
    result.artifact.plan = plan;
    result.artifact.sequence = sequence;
    persist();
    int cycle = 0;
    while (true) {
      stage = "render";
      std::vector<kinesim::LabeledImage> frames = render_visual_log(
          model(), plan, sequence, config.variant, config.pixels,
          config.sample_rate, config.log_interval);
      write_cycle_outputs(cycle, frames);
      stage = "evaluate";
      critic::EvaluationReply verdict = evaluate(frames);
      result.artifact.critiques.push_back({verdict.pass, verdict.critique});
      result.artifact.sequence = sequence;
      if (verdict.pass) {
        result.artifact.status = artifact::ArtifactStatus::kAccepted;
        result.exit_code = 0;
        persist();
        return;
      }
      if (cycle == config.max_replans) {
        result.artifact.status = artifact::ArtifactStatus::kAbandoned;
        result.exit_code = 2;
        persist();
        return;
      }
      persist();
      ++cycle;
      result.replans_used = cycle;

      bool alive = true;
      if (config.variant == Variant::kM2) {
        // Whole-plan repair: every step gets a proposal and search.
        for (const pipeline::BehaviorStep& step : plan.steps) {
          alive = refine_step(step.index, verdict.critique, frames, cycle);
          if (!alive) break;
        }
      } else {
        stage = "pinpoint";
        int k = pinpoint(verdict.critique);
        alive = refine_step(k, verdict.critique, frames, cycle);
      }
      result.artifact.sequence = sequence;
      if (!alive) {
        result.artifact.status = artifact::ArtifactStatus::kAbandoned;
        result.exit_code = 3;
        persist();
        return;
      }
      persist();
    }
  }
};

}  // namespace

const char* to_string(Variant variant) {
  switch (variant) {
    case Variant::kFull: return "full";
    case Variant::kM1: return "m1";
    case Variant::kM2: return "m2";
    case Variant::kM3: return "m3";
    case Variant::kM4: return "m4";
  }
  return "unknown";
}

Variant variant_from_name(const std::string& name) {
  if (name == "full") return Variant::kFull;
  if (name == "m1") return Variant::kM1;
  if (name == "m2") return Variant::kM2;
  if (name == "m3") return Variant::kM3;
  if (name == "m4") return Variant::kM4;
  throw Error(ErrorKind::kInvalidConfig,
              "unknown variant '" + name + "' (use full, m1, m2, m3, or m4)");
}

void validate_run_config(const RunConfig& config) {
  if (config.model_path.empty()) {
    throw Error(ErrorKind::kInvalidConfig, "a model path is required");
  }
  if (config.max_replans < 0) {
    throw Error(ErrorKind::kInvalidConfig, "max_replans must be >= 0");
  }
  if (config.pixels < 32) {
    throw Error(ErrorKind::kInvalidConfig, "render size must be >= 32 pixels");
  }
  if (!(config.sample_rate > 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "sample_rate must be positive");
  }
  if (!(config.log_interval > 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "log_interval must be positive");
  }
  ras::validate_config(config.ras);
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open model file " + path);
  }
  LoadedModel loaded;
  loaded.xml.assign((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorKind::kIo, "cannot read model file " + path);
  }
  std::string stem = fs::path(path).stem().string();
  loaded.model = mjcf::parse_mjcf(loaded.xml, stem.empty() ? "robot" : stem);
  return loaded;
}

void write_frame_sequence(const std::filesystem::path& dir,
                          const std::vector<kinesim::LabeledImage>& frames) {
  fs::create_directories(dir);
  int i = 0;
  for (const kinesim::LabeledImage& frame : frames) {
    fs::path file = dir / (padded(i, 3) + "_" + sanitize(frame.label) + ".png");
    kinesim::write_png(file.string(), frame.image);
    ++i;
  }
}

std::vector<kinesim::LabeledImage> render_visual_log(
    const mjcf::RobotModel& model, const pipeline::BehaviorPlan& plan,
    const pipeline::CommandSequence& sequence, Variant variant, int pixels,
    double sample_rate, double log_interval) {
  std::vector<kinesim::LabeledImage> frames;
  if (plan.steps.empty()) return frames;
  kinesim::Timeline timeline =
      kinesim::simulate_plan(model, plan, sequence, sample_rate);

  if (variant == Variant::kM3) {
    const kinesim::CameraSpec views[3] = {{0.0, 0.0}, {90.0, 0.0}, {0.0, 70.0}};
    const char* names[3] = {"front", "side", "top"};
    kinesim::ViewFrame view_frames[3];
    for (int v = 0; v < 3; ++v) {
      view_frames[v] = kinesim::full_view_frame(model, views[v]);
    }
    int stride = std::max(1, static_cast<int>(std::lround(log_interval *
                                                          sample_rate)));
    for (size_t i = 0; i < plan.steps.size(); ++i) {
      auto [first, last] = timeline.step_sample_ranges[i];
      std::vector<int> picks;
      for (int s = first; s < last; s += stride) picks.push_back(s);
      picks.push_back(last);
      for (int g : picks) {
        double t = g / sample_rate;
        for (int v = 0; v < 3; ++v) {
          kinesim::RenderOptions options;
          options.pixels = pixels;
          options.label = "step " + std::to_string(plan.steps[i].index) +
                          " t=" + format_double(t) + "s (" + names[v] + ")";
          frames.push_back(
              {options.label,
               kinesim::render_model(model, timeline.samples[g], views[v],
                                     view_frames[v], options)});
        }
      }
    }
    return frames;
  }

  kinesim::CameraSpec camera;
  kinesim::ViewFrame full = kinesim::full_view_frame(model, camera);
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    auto [first, last] = timeline.step_sample_ranges[i];
    std::vector<kinesim::Pose> window(timeline.samples.begin() + first,
                                      timeline.samples.begin() + last + 1);
    const std::vector<pipeline::JointCommand>& commands =
        sequence.steps[i].commands;
    std::vector<int> moving;
    bool has_oscillation = false;
    for (const pipeline::JointCommand& command : commands) {
      int j = model.joint_index(command.joint);
      if (j >= 0) moving.push_back(j);
      has_oscillation |= command.kind == pipeline::CommandKind::kOscillate;
    }
    std::vector<int> keys =
        kinesim::select_keyframes(window, moving, has_oscillation);
    int zoom_body = -1;
    if (!commands.empty()) {
      zoom_body = model.body_index(model.joint(commands.front().joint).body);
    }
    for (int rel : keys) {
      int g = first + rel;
      double t = g / sample_rate;
      std::string base_label = "step " + std::to_string(plan.steps[i].index) +
                               " t=" + format_double(t) + "s";
      kinesim::RenderOptions options;
      options.pixels = pixels;
      options.label = base_label + " (full)";
      frames.push_back({options.label,
                        kinesim::render_model(model, timeline.samples[g],
                                              camera, full, options)});
      if (variant != Variant::kM4 && zoom_body >= 0) {
        kinesim::RenderOptions zoom;
        zoom.pixels = pixels;
        zoom.label = base_label + " (zoom)";
        zoom.highlight_body = zoom_body;
        frames.push_back(
            {zoom.label,
             kinesim::render_model(model, timeline.samples[g], camera,
                                   kinesim::zoom_view_frame(
                                       model, timeline.samples[g], camera,
                                       zoom_body),
                                   zoom)});
      }
    }
  }
  return frames;
}

std::string trajectory_csv(const mjcf::RobotModel& model,
                           const kinesim::Timeline& timeline) {
  std::string out = "time";
  for (const mjcf::JointDescriptor& joint : model.joints) {
    out += ",";
    out += joint.name;
  }
  out += "\n";
  for (size_t k = 0; k < timeline.samples.size(); ++k) {
    out += format_double(static_cast<double>(k) / timeline.rate);
    for (double value : timeline.samples[k]) {
      out += ",";
      out += format_double(value);
    }
    out += "\n";
  }
  return out;
}

std::string joint_table(const mjcf::RobotModel& model) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"joint", "kind", "range", "default", "body"});
  for (const mjcf::JointDescriptor& joint : model.joints) {
    rows.push_back({joint.name, mjcf::to_string(joint.kind),
                    "[" + format_double(joint.limit_min) + ", " +
                        format_double(joint.limit_max) + "]",
                    format_double(joint.default_value), joint.body});
  }
  std::vector<size_t> widths(5, 0);
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size()) {
        out.append(widths[c] - row[c].size() + 2, ' ');
      }
    }
    out += "\n";
  }
  return out;
}

int write_visual_dataset(const mjcf::RobotModel& model,
                         const std::filesystem::path& dir, int pixels) {
  fs::create_directories(dir);
  kinesim::ProbeOptions options;
  options.pixels = pixels;
  std::vector<kinesim::JointProbe> probes =
      kinesim::build_joint_probes(model, model.default_pose, options);

  json manifest;
  manifest["model"] = model.name;
  manifest["pixels"] = pixels;
  manifest["joints"] = json::array();
  int count = 0;
  for (const kinesim::JointProbe& probe : probes) {
    json entry;
    entry["joint"] = probe.joint;
    entry["base_value"] = probe.base_value;
    entry["minus_value"] = probe.minus_value;
    entry["plus_value"] = probe.plus_value;
    entry["minus_degenerate"] = probe.minus_degenerate;
    entry["plus_degenerate"] = probe.plus_degenerate;
    entry["images"] = json::array();
    int i = 0;
    for (const kinesim::LabeledImage& image : probe.images) {
      std::string file = sanitize(probe.joint) + "_" + std::to_string(i) + ".png";
      kinesim::write_png((dir / file).string(), image.image);
      entry["images"].push_back({{"file", file}, {"label", image.label}});
      ++count;
      ++i;
    }
    manifest["joints"].push_back(std::move(entry));
  }
  std::ofstream out(dir / "visual_dataset.json",
                    std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot write visual_dataset.json");
  }
  return count;
}

namespace {

ras::RasConfig effective_ras(const RunConfig& config) {
  ras::RasConfig ras_cfg = config.ras;
  if (config.variant == Variant::kM1) ras_cfg.candidates_per_iteration = 1;
  ras::validate_config(ras_cfg);
  return ras_cfg;
}

void install_critic_judge(Runner& runner) {
  runner.evaluate = [&runner](const std::vector<kinesim::LabeledImage>& f) {
    return pipeline::evaluate_holistic(runner.backend, runner.action,
                                       runner.plan, f);
  };
  runner.pinpoint = [&runner](const std::string& critique) {
    return pipeline::pinpoint_erroneous_step(runner.backend, runner.action,
                                             runner.plan, critique);
  };
}

void validate_targets(const mjcf::RobotModel& model,
                      const std::map<std::string, double>& targets) {
  if (targets.empty()) {
    throw Error(ErrorKind::kInvalidConfig,
                "an oracle run needs at least one joint target");
  }
  for (const auto& [joint, value] : targets) {
    int j = model.joint_index(joint);
    if (j < 0) {
      throw Error(ErrorKind::kUnknownJoint,
                  "oracle target names unknown joint '" + joint + "'");
    }
    const mjcf::JointDescriptor& descriptor = model.joints[j];
    if (value < descriptor.limit_min || value > descriptor.limit_max) {
      throw Error(ErrorKind::kInvalidConfig,
                  "target for '" + joint + "' lies outside its limits");
    }
  }
}

struct TargetMiss {
  int step = 0;  // plan step index blamed for the miss
  std::string text;
};

// Each target joint is judged at the end of the first step that commands
// it, or at the behavior's final pose when no step does.
std::vector<TargetMiss> judge_targets(
    const Runner& runner, const std::map<std::string, double>& targets) {
  kinesim::Timeline timeline =
      kinesim::simulate_plan(runner.model(), runner.plan, runner.sequence,
                             runner.config.sample_rate);
  std::vector<TargetMiss> misses;
  for (const auto& [joint, value] : targets) {
    int j = runner.model().joint_index(joint);
    const mjcf::JointDescriptor& descriptor = runner.model().joints[j];
    int sample = static_cast<int>(timeline.samples.size()) - 1;
    int blamed = runner.plan.steps.back().index;
    for (size_t p = 0; p < runner.sequence.steps.size(); ++p) {
      const pipeline::StepCommands& step = runner.sequence.steps[p];
      bool mentions = false;
      for (const pipeline::JointCommand& command : step.commands) {
        mentions |= command.joint == joint;
      }
      if (mentions) {
        sample = timeline.step_sample_ranges[p].second;
        blamed = runner.plan.steps[p].index;
        break;
      }
    }
    double final_value = timeline.samples[sample][j];
    double miss = std::abs(final_value - value) / descriptor.range();
    if (miss > 0.15) {
      misses.push_back({blamed,
                        "step " + std::to_string(blamed) + ": " + joint +
                            " ends at " + format_double(final_value) +
                            ", target " + format_double(value) +
                            ", normalized miss " + format_double(miss)});
    }
  }
  return misses;
}

void install_target_judge(Runner& runner,
                          const std::map<std::string, double>& targets) {
  runner.evaluate = [&runner,
                     targets](const std::vector<kinesim::LabeledImage>&) {
    critic::EvaluationReply reply;
    std::vector<TargetMiss> misses = judge_targets(runner, targets);
    reply.pass = misses.empty();
    if (reply.pass) {
      reply.critique = "all joints reach their targets";
    } else {
      for (size_t i = 0; i < misses.size(); ++i) {
        if (i > 0) reply.critique += "; ";
        reply.critique += misses[i].text;
      }
    }
    return reply;
  };
  runner.pinpoint = [&runner, targets](const std::string&) {
    std::vector<TargetMiss> misses = judge_targets(runner, targets);
    if (misses.empty()) {
      throw Error(ErrorKind::kIndexOutOfRange, "no failing step to pinpoint");
    }
    int best = misses.front().step;
    for (const TargetMiss& miss : misses) best = std::min(best, miss.step);
    return best;
  };
}

// Swaps a previously persisted artifact into the runner, keeping its plan,
// commands, and history but re-stamping the live configuration.
void adopt_artifact(Runner& runner, artifact::BehaviorArtifact existing) {
  runner.result.artifact = std::move(existing);
  runner.result.artifact.config = runner.ras_cfg;
  runner.result.artifact.seed = runner.config.ras.rng_seed;
  runner.result.artifact.status = artifact::ArtifactStatus::kInProgress;
  runner.action = runner.result.artifact.plan.action;
  runner.plan = runner.result.artifact.plan;
  runner.sequence = runner.result.artifact.sequence;
}

artifact::BehaviorArtifact load_existing(const RunConfig& config,
                                         const LoadedModel& loaded) {
  if (config.out_dir.empty()) {
    throw Error(ErrorKind::kInvalidConfig,
                "resuming needs an output directory holding artifact.json");
  }
  artifact::BehaviorArtifact existing =
      artifact::read_artifact(config.out_dir / "artifact.json");
  if (!existing.model_hash.empty() &&
      existing.model_hash != artifact::content_hash(loaded.xml)) {
    throw Error(ErrorKind::kModelMismatch,
                "artifact was authored against a different robot description");
  }
  if (existing.plan.steps.empty()) {
    throw Error(ErrorKind::kEmptyPlan, "artifact holds no plan to refine");
  }
  return existing;
}

}  // namespace

RunResult run_pipeline(critic::CriticBackend& backend,
                       const RunConfig& config) {
  validate_run_config(config);
  LoadedModel loaded = load_model_file(config.model_path);
  critic::InstrumentedBackend instrumented(backend);
  ras::RasConfig ras_cfg = effective_ras(config);

  Runner runner(instrumented, loaded, config, ras_cfg);
  return runner.execute([&] {
    runner.stage = "analyze";
    if (!config.out_dir.empty()) {
      write_visual_dataset(loaded.model, config.out_dir / "probes",
                           config.pixels);
    }
    runner.stage = "translate";
    critic::ActionReply translated = pipeline::translate_action(
        runner.backend, runner.model(), config.context);
    runner.action = translated.action;
    runner.stage = "plan";
    runner.plan =
        pipeline::decompose_steps(runner.backend, runner.model(), runner.action);
    runner.stage = "codegen";
    runner.probes = kinesim::build_joint_probes(
        runner.model(), runner.model().default_pose, runner.probe_options());
    runner.sequence = runner.generate_all_commands();
    install_critic_judge(runner);
    runner.run_loop();
  });
}

RunResult run_pipeline(const std::map<std::string, double>& targets,
                       const RunConfig& config) {
  validate_run_config(config);
  LoadedModel loaded = load_model_file(config.model_path);
  validate_targets(loaded.model, targets);

  critic::OracleBackend oracle(loaded.model, targets);
  critic::InstrumentedBackend instrumented(oracle);
  ras::RasConfig ras_cfg = effective_ras(config);

  Runner runner(instrumented, loaded, config, ras_cfg);
  return runner.execute([&] {
    runner.stage = "analyze";
    if (!config.out_dir.empty()) {
      write_visual_dataset(loaded.model, config.out_dir / "probes",
                           config.pixels);
    }
    runner.stage = "plan";
    runner.action = "reach the configured joint targets";
    double clock = 0.0;
    int index = 1;
    for (const auto& [joint, value] : targets) {
      pipeline::BehaviorStep step;
      step.index = index;
      step.description = "drive " + joint + " to " + format_double(value);
      step.start_time = clock;
      step.end_time = clock + 2.0;
      runner.plan.steps.push_back(step);

      pipeline::JointCommand command;
      command.kind = pipeline::CommandKind::kSetTarget;
      command.joint = joint;
      command.value =
          loaded.model.default_pose[loaded.model.joint_index(joint)];
      pipeline::StepCommands commands;
      commands.step_index = index;
      commands.commands.push_back(command);
      runner.sequence.steps.push_back(commands);

      clock = step.end_time;
      ++index;
    }
    runner.plan.action = runner.action;
    install_target_judge(runner, targets);
    runner.run_loop();
  });
}

RunResult resume_refinement(critic::CriticBackend& backend,
                            const RunConfig& config) {
  validate_run_config(config);
  LoadedModel loaded = load_model_file(config.model_path);
  artifact::BehaviorArtifact existing = load_existing(config, loaded);

  critic::InstrumentedBackend instrumented(backend);
  ras::RasConfig ras_cfg = effective_ras(config);
  Runner runner(instrumented, loaded, config, ras_cfg);
  adopt_artifact(runner, std::move(existing));
  return runner.execute([&] {
    install_critic_judge(runner);
    runner.run_loop();
  });
}

RunResult resume_refinement(const std::map<std::string, double>& targets,
                            const RunConfig& config) {
  validate_run_config(config);
  LoadedModel loaded = load_model_file(config.model_path);
  validate_targets(loaded.model, targets);
  artifact::BehaviorArtifact existing = load_existing(config, loaded);

  critic::OracleBackend oracle(loaded.model, targets);
  critic::InstrumentedBackend instrumented(oracle);
  ras::RasConfig ras_cfg = effective_ras(config);
  Runner runner(instrumented, loaded, config, ras_cfg);
  adopt_artifact(runner, std::move(existing));
  return runner.execute([&] {
    install_target_judge(runner, targets);
    runner.run_loop();
  });
}

}  // namespace crisp::cli
