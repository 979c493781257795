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

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "crisp/artifact/artifact.hpp"
#include "crisp/canonical.hpp"
#include "crisp/cli/runner.hpp"
#include "crisp/critic/http.hpp"
#include "crisp/critic/instrumented.hpp"
#include "crisp/critic/oracle.hpp"
#include "crisp/critic/scripted.hpp"
#include "crisp/errors.hpp"
#include "crisp/kinesim/trajectory.hpp"
#include "crisp/mjcf/model.hpp"
#include "crisp/pipeline/stages.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using namespace crisp;

struct Options {
  std::vector<std::string> models;
  std::vector<std::string> contexts;
  std::string backend = "scripted";
  std::string endpoint;
  std::string script;
  std::string oracle_targets;
  ras::RasConfig ras;  // tau/sigma_base/alpha/beta/seed flags land here
  int max_replans = 10;
  std::string variant = "full";
  std::string out = "crisp_out";
  int jobs = 1;
  int pixels = 256;
};

std::unique_ptr<critic::CriticBackend> make_backend(const Options& opt) {
  if (opt.backend == "scripted") {
    if (opt.script.empty()) {
      throw Error(ErrorKind::kInvalidConfig,
                  "--backend scripted needs --script <replies.jsonl>");
    }
    return std::make_unique<critic::ScriptedBackend>(
        critic::ScriptedBackend::from_file(opt.script));
  }
  if (opt.backend == "http") {
    if (opt.endpoint.empty()) {
      throw Error(ErrorKind::kInvalidConfig,
                  "--backend http needs --endpoint <scheme://host[:port]>");
    }
    critic::HttpConfig config;
    config.endpoint = opt.endpoint;
    return std::make_unique<critic::HttpBackend>(config);
  }
  throw Error(ErrorKind::kInvalidConfig,
              "unknown backend '" + opt.backend +
                  "' (use http, scripted, or oracle)");
}

// Accepts either inline JSON or a path to a JSON file mapping joint names
// to target values.
std::map<std::string, double> load_targets(const std::string& spec) {
  if (spec.empty()) {
    throw Error(ErrorKind::kInvalidConfig,
                "--backend oracle needs --oracle-targets");
  }
  std::string text = spec;
  if (spec.front() != '{') {
    std::ifstream in(spec, std::ios::binary);
    if (!in) {
      throw Error(ErrorKind::kIo, "cannot open targets file " + spec);
    }
    text.assign((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidConfig,
                std::string("targets are not valid JSON: ") + e.what());
  }
  if (!parsed.is_object()) {
    throw Error(ErrorKind::kInvalidConfig,
                "targets must be a JSON object of joint: value pairs");
  }
  std::map<std::string, double> targets;
  for (auto it = parsed.begin(); it != parsed.end(); ++it) {
    if (!it.value().is_number()) {
      throw Error(ErrorKind::kInvalidConfig,
                  "target for '" + it.key() + "' is not a number");
    }
    targets[it.key()] = it.value().get<double>();
  }
  return targets;
}

cli::RunConfig to_config(const Options& opt, const std::string& model,
                         const std::string& context, const fs::path& out) {
  cli::RunConfig config;
  config.model_path = model;
  config.context = context;
  config.ras = opt.ras;
  config.max_replans = opt.max_replans;
  config.variant = cli::variant_from_name(opt.variant);
  config.out_dir = out;
  config.pixels = opt.pixels;
  return config;
}

void print_run_summary(std::ostream& os, const std::string& prefix,
                       const cli::RunResult& result) {
  os << prefix << "status: " << artifact::to_string(result.artifact.status)
     << "\n";
  os << prefix << "replans used: " << result.replans_used << "\n";
  if (!result.artifact.critiques.empty()) {
    os << prefix << "critique: " << result.artifact.critiques.back().text
       << "\n";
  }
  if (!result.artifact_path.empty()) {
    os << prefix << "artifact: " << result.artifact_path.string() << "\n";
  }
  os << prefix << "critic requests: " << result.stats.requests
     << ", images sent: " << result.stats.images << "\n";
}

int cmd_analyze(const Options& opt) {
  cli::LoadedModel loaded = cli::load_model_file(opt.models.front());
  std::cout << cli::joint_table(loaded.model) << "\n";
  std::cout << mjcf::summarize_morphology(loaded.model).text << "\n";
  fs::path dir = fs::path(opt.out) / "probes";
  int count = cli::write_visual_dataset(loaded.model, dir, opt.pixels);
  std::cout << "\nwrote " << count << " probe images to " << dir.string()
            << "\n";
  return 0;
}

int cmd_visualize(const Options& opt) {
  cli::LoadedModel loaded = cli::load_model_file(opt.models.front());
  fs::path out(opt.out);
  artifact::BehaviorArtifact record =
      artifact::read_artifact(out / "artifact.json");
  if (!record.model_hash.empty() &&
      record.model_hash != artifact::content_hash(loaded.xml)) {
    throw Error(ErrorKind::kModelMismatch,
                "artifact was authored against a different robot description");
  }
  if (record.plan.steps.empty()) {
    throw Error(ErrorKind::kEmptyPlan, "artifact holds no plan to render");
  }
  std::vector<kinesim::LabeledImage> frames = cli::render_visual_log(
      loaded.model, record.plan, record.sequence,
      cli::variant_from_name(opt.variant), opt.pixels,
      kinesim::kDefaultSampleRate, 0.5);
  fs::path dir = out / "frames" / "visualize";
  cli::write_frame_sequence(dir, frames);
  kinesim::Timeline timeline = kinesim::simulate_plan(
      loaded.model, record.plan, record.sequence, kinesim::kDefaultSampleRate);
  std::ofstream csv(out / "trajectory.csv", std::ios::binary | std::ios::trunc);
  csv << cli::trajectory_csv(loaded.model, timeline);
  if (!csv) {
    throw Error(ErrorKind::kIo, "cannot write trajectory.csv");
  }
  std::cout << "wrote " << frames.size() << " frames to " << dir.string()
            << "\n";
  std::cout << "wrote " << (out / "trajectory.csv").string() << "\n";
  return 0;
}

int cmd_plan(const Options& opt) {
  cli::LoadedModel loaded = cli::load_model_file(opt.models.front());
  std::unique_ptr<critic::CriticBackend> backend = make_backend(opt);
  std::string context = opt.contexts.empty() ? "" : opt.contexts.front();
  critic::ActionReply reply =
      pipeline::translate_action(*backend, loaded.model, context);
  pipeline::BehaviorPlan plan =
      pipeline::decompose_steps(*backend, loaded.model, reply.action);
  std::cout << "action: " << reply.action << "\n\n";
  std::cout << pipeline::plan_text(plan) << "\n";
  return 0;
}

int cmd_codegen(const Options& opt) {
  cli::LoadedModel loaded = cli::load_model_file(opt.models.front());
  std::unique_ptr<critic::CriticBackend> backend = make_backend(opt);
  std::string context = opt.contexts.empty() ? "" : opt.contexts.front();
  cli::Variant variant = cli::variant_from_name(opt.variant);

  critic::ActionReply reply =
      pipeline::translate_action(*backend, loaded.model, context);
  pipeline::BehaviorPlan plan =
      pipeline::decompose_steps(*backend, loaded.model, reply.action);
  kinesim::ProbeOptions probe_options;
  probe_options.pixels = opt.pixels;
  probe_options.include_zoom = variant != cli::Variant::kM4;
  std::vector<kinesim::JointProbe> probes = kinesim::build_joint_probes(
      loaded.model, loaded.model.default_pose, probe_options);

  std::cout << "action: " << reply.action << "\n";
  kinesim::Pose pose = loaded.model.default_pose;
  for (const pipeline::BehaviorStep& step : plan.steps) {
    std::vector<std::string> candidates = pipeline::identify_candidate_joints(
        *backend, loaded.model, step, probes);
    pipeline::SelectedCommands selected = pipeline::select_joint_and_value(
        *backend, loaded.model, step, candidates, pose, probes);
    std::cout << "\n" << pipeline::step_text(step) << "\n";
    std::cout << pipeline::commands_text(selected.commands.commands) << "\n";
    pose = kinesim::simulate_step(loaded.model, pose,
                                  selected.commands.commands, step.duration(),
                                  kinesim::kDefaultSampleRate)
               .back();
  }
  return 0;
}

cli::RunResult dispatch_run(const Options& opt, const cli::RunConfig& config) {
  if (opt.backend == "oracle") {
    return cli::run_pipeline(load_targets(opt.oracle_targets), config);
  }
  std::unique_ptr<critic::CriticBackend> backend = make_backend(opt);
  return cli::run_pipeline(*backend, config);
}

int cmd_evaluate(const Options& opt) {
  Options once = opt;
  once.max_replans = 0;  // a single evaluation pass, no refinement
  std::string context = once.contexts.empty() ? "" : once.contexts.front();
  cli::RunConfig config =
      to_config(once, once.models.front(), context, fs::path(once.out));
  cli::RunResult result = dispatch_run(once, config);
  const artifact::Critique& verdict = result.artifact.critiques.back();
  std::cout << "verdict: " << (verdict.pass ? "pass" : "fail") << "\n";
  std::cout << "critique: " << verdict.text << "\n";
  print_run_summary(std::cout, "", result);
  return result.exit_code;
}

int cmd_refine(const Options& opt) {
  std::string context = opt.contexts.empty() ? "" : opt.contexts.front();
  cli::RunConfig config =
      to_config(opt, opt.models.front(), context, fs::path(opt.out));
  cli::RunResult result;
  if (opt.backend == "oracle") {
    result = cli::resume_refinement(load_targets(opt.oracle_targets), config);
  } else {
    std::unique_ptr<critic::CriticBackend> backend = make_backend(opt);
    result = cli::resume_refinement(*backend, config);
  }
  print_run_summary(std::cout, "", result);
  return result.exit_code;
}

// Worst first: errors dominate, then unresolved joint failures, then an
// exhausted budget.
int worse_exit(int a, int b) {
  auto rank = [](int code) {
    switch (code) {
      case 1: return 3;
      case 3: return 2;
      case 2: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

int cmd_run(const Options& opt) {
  std::vector<std::string> contexts = opt.contexts;
  if (contexts.empty()) contexts.push_back("");
  if (contexts.size() == 1 && opt.models.size() > 1) {
    contexts.assign(opt.models.size(), contexts.front());
  }
  if (contexts.size() != opt.models.size()) {
    throw Error(ErrorKind::kInvalidConfig,
                "--context count must be 1 or match the --model count");
  }

  size_t n = opt.models.size();
  if (n == 1) {
    cli::RunConfig config =
        to_config(opt, opt.models.front(), contexts.front(), fs::path(opt.out));
    cli::RunResult result = dispatch_run(opt, config);
    print_run_summary(std::cout, "", result);
    return result.exit_code;
  }

  // Independent (model, context) pairs, each in its own directory. Output
  // is buffered per job and printed in submission order.
  struct Job {
    std::string summary;
    int exit_code = 0;
  };
  std::vector<Job> results(n);
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    while (true) {
      size_t i = cursor.fetch_add(1);
      if (i >= n) return;
      std::string label = "job " + std::to_string(i);
      fs::path out = fs::path(opt.out) / ("job_" + std::to_string(i));
      std::ostringstream os;
      os << label << ": " << opt.models[i] << "\n";
      try {
        cli::RunConfig config =
            to_config(opt, opt.models[i], contexts[i], out);
        cli::RunResult result = dispatch_run(opt, config);
        print_run_summary(os, "  ", result);
        results[i].exit_code = result.exit_code;
      } catch (const Error& e) {
        os << "  error: " << e.what() << "\n";
        results[i].exit_code = 1;
      }
      results[i].summary = os.str();
    }
  };
  int workers = std::clamp(opt.jobs, 1, static_cast<int>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  int exit_code = 0;
  for (const Job& job : results) {
    std::cout << job.summary;
    exit_code = worse_exit(exit_code, job.exit_code);
  }
  return exit_code;
}

void add_model_flag(CLI::App* cmd, Options& opt, bool repeatable) {
  auto* flag = cmd->add_option("--model", opt.models,
                               "robot description file (MJCF XML)");
  flag->required();
  if (!repeatable) flag->expected(1);
}

void add_backend_flags(CLI::App* cmd, Options& opt, bool with_oracle) {
  std::string kinds = with_oracle ? "http, scripted, or oracle"
                                  : "http or scripted";
  cmd->add_option("--backend", opt.backend, "critic backend: " + kinds)
      ->default_val("scripted");
  cmd->add_option("--endpoint", opt.endpoint,
                  "chat-completions service for --backend http; the key is "
                  "read from CRISP_API_KEY");
  cmd->add_option("--script", opt.script,
                  "JSONL reply script for --backend scripted");
  if (with_oracle) {
    cmd->add_option("--oracle-targets", opt.oracle_targets,
                    "JSON object or file of joint targets for --backend "
                    "oracle");
  }
}

void add_search_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--tau", opt.ras.tau, "reward threshold for success")
      ->default_val(opt.ras.tau);
  cmd->add_option("--sigma-base", opt.ras.sigma_base,
                  "base sampling spread for refinement")
      ->default_val(opt.ras.sigma_base);
  cmd->add_option("--alpha", opt.ras.alpha, "fine search factor")
      ->default_val(opt.ras.alpha);
  cmd->add_option("--beta", opt.ras.beta, "broad search factor")
      ->default_val(opt.ras.beta);
  cmd->add_option("--seed", opt.ras.rng_seed, "master random seed")
      ->default_val(opt.ras.rng_seed);
  cmd->add_option("--variant", opt.variant,
                  "behavior variant: full, m1, m2, m3, or m4")
      ->default_val(opt.variant);
}

void add_out_flag(CLI::App* cmd, Options& opt) {
  cmd->add_option("--out", opt.out, "output directory")
      ->default_val(opt.out);
  cmd->add_option("--pixels", opt.pixels, "render size in pixels")
      ->default_val(opt.pixels);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "crisp: parse a robot description, author joint-level behaviors "
      "against a vision-language critic, and refine them with adaptive "
      "search"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "print the joint table and morphology summary; write the "
                 "probe image dataset");
  add_model_flag(analyze, opt, false);
  add_out_flag(analyze, opt);

  CLI::App* visualize = app.add_subcommand(
      "visualize", "re-render the visual log of the artifact in --out");
  add_model_flag(visualize, opt, false);
  add_out_flag(visualize, opt);
  visualize->add_option("--variant", opt.variant,
                        "behavior variant: full, m1, m2, m3, or m4")
      ->default_val(opt.variant);

  CLI::App* plan = app.add_subcommand(
      "plan", "translate the context into an action and print its step plan");
  add_model_flag(plan, opt, false);
  plan->add_option("--context", opt.contexts, "behavior instruction")
      ->expected(1);
  add_backend_flags(plan, opt, false);

  CLI::App* codegen = app.add_subcommand(
      "codegen", "plan and print the generated joint commands per step");
  add_model_flag(codegen, opt, false);
  codegen->add_option("--context", opt.contexts, "behavior instruction")
      ->expected(1);
  add_backend_flags(codegen, opt, false);
  codegen->add_option("--variant", opt.variant,
                      "behavior variant: full, m1, m2, m3, or m4")
      ->default_val(opt.variant);
  codegen->add_option("--pixels", opt.pixels, "render size in pixels")
      ->default_val(opt.pixels);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "author the behavior and run one holistic evaluation");
  add_model_flag(evaluate, opt, false);
  evaluate->add_option("--context", opt.contexts, "behavior instruction")
      ->expected(1);
  add_backend_flags(evaluate, opt, true);
  add_search_flags(evaluate, opt);
  add_out_flag(evaluate, opt);

  CLI::App* refine = app.add_subcommand(
      "refine", "resume the evaluate and refine loop on the artifact in "
                "--out");
  add_model_flag(refine, opt, false);
  add_backend_flags(refine, opt, true);
  add_search_flags(refine, opt);
  refine->add_option("--max-replans", opt.max_replans,
                     "refinement cycle budget")
      ->default_val(opt.max_replans);
  add_out_flag(refine, opt);

  CLI::App* run = app.add_subcommand(
      "run", "full pipeline: analyze, plan, generate, evaluate, refine");
  add_model_flag(run, opt, true);
  run->add_option("--context", opt.contexts,
                  "behavior instruction (repeatable alongside --model)");
  add_backend_flags(run, opt, true);
  add_search_flags(run, opt);
  run->add_option("--max-replans", opt.max_replans,
                  "refinement cycle budget")
      ->default_val(opt.max_replans);
  add_out_flag(run, opt);
  run->add_option("--jobs", opt.jobs,
                  "worker threads for independent model/context pairs")
      ->default_val(opt.jobs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(opt);
    if (visualize->parsed()) return cmd_visualize(opt);
    if (plan->parsed()) return cmd_plan(opt);
    if (codegen->parsed()) return cmd_codegen(opt);
    if (evaluate->parsed()) return cmd_evaluate(opt);
    if (refine->parsed()) return cmd_refine(opt);
    if (run->parsed()) return cmd_run(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
