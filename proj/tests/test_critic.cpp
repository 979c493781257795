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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "crisp/critic/http.hpp"
#include "crisp/critic/instrumented.hpp"
#include "crisp/critic/oracle.hpp"
#include "crisp/critic/scripted.hpp"
#include "crisp/critic/wire.hpp"
#include "crisp/errors.hpp"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

using namespace crisp;
using namespace crisp::critic;
using nlohmann::json;

namespace {

CriticRequest make_request(Role role, ReplySchema schema,
                           const std::string& query_body = {}) {
  CriticRequest request;
  request.role = role;
  request.schema = schema;
  request.sections.push_back({"task", "wave the left arm"});
  if (!query_body.empty()) request.sections.push_back({"query", query_body});
  return request;
}

mjcf::RobotModel tiny_model() {
  return mjcf::parse_mjcf(R"(
    <mujoco model="tiny"><compiler angle="radian"/><worldbody>
      <body name="base">
        <joint name="lift" range="-1 1"/>
        <geom type="sphere" size="0.1"/>
      </body>
    </worldbody></mujoco>)");
}

}  // namespace

TEST_CASE("replies parse against their schema and survive a round trip") {
  auto score = std::get<ScoreReply>(
      parse_reply(ReplySchema::kScore, R"({"reward": 7, "rationale": "close"})"));
  CHECK(score.reward == 7);

  auto action = std::get<ActionReply>(parse_reply(
      ReplySchema::kAction,
      R"({"feasible": true, "action": "wave left arm", "reason": "arm present"})"));
  CHECK(action.feasible);
  CHECK(action.action == "wave left arm");

  auto plan = std::get<PlanReply>(parse_reply(ReplySchema::kPlan, R"({
    "steps": [
      {"description": "raise arm", "start_time": 0, "end_time": 2},
      {"description": "wave", "start_time": 2, "end_time": 4}
    ]})"));
  REQUIRE(plan.steps.size() == 2);
  CHECK(plan.steps[1].description == "wave");

  auto commands = std::get<CommandsReply>(parse_reply(ReplySchema::kCommands, R"({
    "commands": [
      {"type": "target", "joint": "lift", "value": 0.5},
      {"type": "oscillate", "joint": "lift", "center": 0.5, "amplitude": 0.2, "cycles": 3}
    ],
    "direction_hint": 1})"));
  REQUIRE(commands.commands.size() == 2);
  CHECK(commands.commands[1].kind == pipeline::CommandKind::kOscillate);
  CHECK(commands.commands[1].cycles == 3.0);
  CHECK(commands.direction_hint == 1);

  auto candidates = std::get<CandidatesReply>(
      parse_reply(ReplySchema::kCandidates, R"({"joints": ["a", "b"]})"));
  CHECK(candidates.joints == std::vector<std::string>{"a", "b"});

  auto evaluation = std::get<EvaluationReply>(parse_reply(
      ReplySchema::kEvaluation, R"({"pass": false, "critique": "arm too low"})"));
  CHECK_FALSE(evaluation.pass);

  auto pinpoint = std::get<PinpointReply>(parse_reply(
      ReplySchema::kPinpoint, R"({"step_index": 2, "reason": "wrong joint"})"));
  CHECK(pinpoint.step_indices == std::vector<int>{2});

  auto multi = std::get<PinpointReply>(parse_reply(
      ReplySchema::kPinpoint, R"({"step_indices": [2, 5], "reason": "late"})"));
  CHECK(multi.step_indices == std::vector<int>{2, 5});

  auto proposal = std::get<ProposalReply>(parse_reply(ReplySchema::kProposal, R"({
    "kind": "adjust", "step_index": 1,
    "command": {"type": "target", "joint": "lift", "value": 0.8},
    "direction_hint": -1, "rationale": "overshoot"})"));
  CHECK(proposal.kind == ProposalKind::kAdjust);
  CHECK(proposal.command.value == 0.8);

  // Serialization inverts parsing for every alternative.
  const std::vector<std::pair<ReplySchema, StructuredReply>> cases = {
      {ReplySchema::kScore, score},       {ReplySchema::kAction, action},
      {ReplySchema::kPlan, plan},         {ReplySchema::kCommands, commands},
      {ReplySchema::kCandidates, candidates},
      {ReplySchema::kEvaluation, evaluation},
      {ReplySchema::kPinpoint, pinpoint}, {ReplySchema::kProposal, proposal}};
  for (const auto& [schema, reply] : cases) {
    StructuredReply again = parse_reply(schema, reply_to_json(reply).dump());
    CHECK(reply_to_json(again) == reply_to_json(reply));
  }
}

TEST_CASE("schema violations are collected, not thrown one at a time") {
  try {
    parse_reply(ReplySchema::kScore, R"({"reward": 42})");
    FAIL("expected SchemaViolationError");
  } catch (const SchemaViolationError& e) {
    CHECK(e.issues().size() == 1);
    CHECK(e.raw_replies().size() == 1);
  }

  try {
    parse_reply(ReplySchema::kProposal,
                R"({"kind": "explode", "step_index": -3, "direction_hint": 9})");
    FAIL("expected SchemaViolationError");
  } catch (const SchemaViolationError& e) {
    CHECK(e.issues().size() >= 3);
  }

  CHECK_THROWS_AS(parse_reply(ReplySchema::kScore, "not json at all"),
                  SchemaViolationError);
  // A zero-step plan is wire-legal; its fate is decided downstream.
  CHECK(std::get<PlanReply>(parse_reply(ReplySchema::kPlan, R"({"steps": []})"))
            .steps.empty());
  CHECK_THROWS_AS(
      parse_reply(ReplySchema::kEvaluation, R"({"pass": false, "critique": ""})"),
      SchemaViolationError);
  CHECK_THROWS_AS(
      parse_reply(ReplySchema::kCommands,
                  R"({"commands": [{"type": "oscillate", "joint": "a",
                      "center": 0, "amplitude": -1}]})"),
      SchemaViolationError);
}

TEST_CASE("fenced replies are unwrapped before parsing") {
  std::string fenced = "```json\n{\"reward\": 8, \"rationale\": \"ok\"}\n```";
  auto reply = std::get<ScoreReply>(parse_reply(ReplySchema::kScore, fenced));
  CHECK(reply.reward == 8);

  CHECK(strip_code_fences("  plain  ") == "plain");
  CHECK(strip_code_fences("```\nbody\n```") == "body");
  CHECK(strip_code_fences("") == "");
}

TEST_CASE("request hashes identify text, not pixels") {
  CriticRequest a = make_request(Role::kRewardScorer, ReplySchema::kScore);
  a.images.push_back({"frame 1", kinesim::RasterImage(4, 4, {1, 2, 3})});

  CriticRequest b = a;
  b.images[0].image = kinesim::RasterImage(4, 4, {9, 9, 9});
  CHECK(request_hash(a) == request_hash(b));  // pixels differ, labels match
  CHECK(request_hash(a).size() == 16);

  CriticRequest c = a;
  c.images[0].label = "frame 2";
  CHECK(request_hash(a) != request_hash(c));

  CriticRequest d = a;
  d.role = Role::kHolisticEvaluator;
  CHECK(request_hash(a) != request_hash(d));

  CriticRequest e = a;
  e.sections[0].body += "!";
  CHECK(request_hash(a) != request_hash(e));
}

TEST_CASE("base64 matches the reference vectors") {
  auto enc = [](const std::string& s) {
    return base64_encode(std::vector<uint8_t>(s.begin(), s.end()));
  };
  CHECK(enc("") == "");
  CHECK(enc("f") == "Zg==");
  CHECK(enc("fo") == "Zm8=");
  CHECK(enc("foo") == "Zm9v");
  CHECK(enc("foob") == "Zm9vYg==");
  CHECK(enc("fooba") == "Zm9vYmE=");
  CHECK(enc("foobar") == "Zm9vYmFy");
}

TEST_CASE("scripted backends replay wildcard entries in order per role") {
  auto backend = ScriptedBackend::from_text(R"(
# two scores, then a pinpoint
{"role": "reward_scorer", "reply": {"reward": 5, "rationale": "a"}}
{"role": "reward_scorer", "reply": {"reward": 8, "rationale": "b"}}
{"role": "step_pinpointer", "reply": {"step_index": 1, "reason": "late"}}
)");
  CHECK(backend.replies_remaining() == 3);

  auto request = make_request(Role::kRewardScorer, ReplySchema::kScore);
  CHECK(std::get<ScoreReply>(backend.complete(request)).reward == 5);
  CHECK(std::get<ScoreReply>(backend.complete(request)).reward == 8);

  auto pin = make_request(Role::kStepPinpointer, ReplySchema::kPinpoint);
  CHECK(std::get<PinpointReply>(backend.complete(pin)).step_indices ==
        std::vector<int>{1});

  try {
    backend.complete(request);
    FAIL("expected ScriptExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kScriptExhausted);
    CHECK(std::string(e.what()).find("reward_scorer") != std::string::npos);
  }
}

TEST_CASE("hash-pinned entries outrank wildcards for the same role") {
  auto request = make_request(Role::kRewardScorer, ReplySchema::kScore);
  std::string hash = request_hash(request);

  auto backend = ScriptedBackend::from_text(
      "{\"role\": \"reward_scorer\", \"reply\": {\"reward\": 3, \"rationale\": \"wild\"}}\n"
      "{\"role\": \"reward_scorer\", \"request_hash\": \"" + hash +
      "\", \"reply\": {\"reward\": 9, \"rationale\": \"pinned\"}}\n");

  CHECK(std::get<ScoreReply>(backend.complete(request)).reward == 9);
  CHECK(std::get<ScoreReply>(backend.complete(request)).reward == 3);
}

TEST_CASE("scripted replies still pass schema validation") {
  auto backend = ScriptedBackend::from_text(
      R"({"role": "reward_scorer", "reply": {"reward": 77}})");
  auto request = make_request(Role::kRewardScorer, ReplySchema::kScore);
  CHECK_THROWS_AS(backend.complete(request), SchemaViolationError);
}

TEST_CASE("scripts reject malformed lines and missing files") {
  CHECK_THROWS_AS(ScriptedBackend::from_text("{\"role\": \"x\"}\n"), Error);
  CHECK_THROWS_AS(ScriptedBackend::from_text("not json\n"), Error);
  try {
    ScriptedBackend::from_file("/nonexistent/script.jsonl");
    FAIL("expected Io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

TEST_CASE("candidate scoring follows the reward bands") {
  // Limits [-1, 1], span 2. Base 0, target 0.8.
  auto s = [](double candidate, double base = 0.0, double target = 0.8) {
    return score_candidate(candidate, base, target, -1.0, 1.0);
  };
  CHECK(s(0.8) == 9);            // exact
  CHECK(s(0.72) == 9);           // e = 0.04
  CHECK(s(0.9) == 9);            // e = 0.05 inclusive
  CHECK(s(0.65) == 8);           // e = 0.075
  CHECK(s(0.505) == 8);          // e = 0.1475, just inside the band
  CHECK(s(0.495) == 6);          // e = 0.1525, just outside
  CHECK(s(0.4) == 6);            // right direction, e = 0.2
  // Right direction but still far away (e = 0.65).
  CHECK(score_candidate(-0.4, -0.5, 0.9, -1.0, 1.0) == 5);
  CHECK(s(0.0) == 3);            // no movement at all
  CHECK(s(-0.3) == 2);           // opposite direction
  CHECK(s(0.5, 0.5, 0.5) == 9);  // already on target stays success
  CHECK(s(0.0, 0.0, 0.0) == 9);
  // Already on target but wandered far: no direction to credit.
  CHECK(score_candidate(0.9, 0.2, 0.2, -1.0, 1.0) == 3);

  // Same-direction misses never score better when farther away.
  double prev = 10;
  for (double c : {0.8, 0.7, 0.6, 0.45, 0.3, 0.15, 0.05}) {
    int reward = s(c);
    CHECK(reward <= prev);
    prev = reward;
  }

  CHECK_THROWS_AS(score_candidate(0, 0, 0, 1.0, 1.0), Error);
}

TEST_CASE("the oracle answers scoring and proposals, nothing else") {
  auto model = tiny_model();
  OracleBackend oracle(model, {{"lift", 0.8}});

  auto score_request = make_request(
      Role::kRewardScorer, ReplySchema::kScore,
      R"({"joint": "lift", "candidate": 0.4, "base": 0.0})");
  auto score = std::get<ScoreReply>(oracle.complete(score_request));
  CHECK(score.reward == 6);

  auto propose_request = make_request(
      Role::kRefinementProposer, ReplySchema::kProposal,
      R"({"joint": "lift", "step_index": 2, "current": 0.1})");
  auto proposal = std::get<ProposalReply>(oracle.complete(propose_request));
  CHECK(proposal.kind == ProposalKind::kAdjust);
  CHECK(proposal.step_index == 2);
  CHECK(proposal.command.joint == "lift");
  CHECK(proposal.command.value == 0.8);
  CHECK(proposal.direction_hint == 1);

  try {
    oracle.complete(make_request(Role::kPlanDecomposer, ReplySchema::kPlan));
    FAIL("expected OracleUnsupportedRole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOracleUnsupportedRole);
  }

  auto ghost = make_request(Role::kRewardScorer, ReplySchema::kScore,
                            R"({"joint": "ghost", "candidate": 0, "base": 0})");
  try {
    oracle.complete(ghost);
    FAIL("expected ModelMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kModelMismatch);
  }

  CHECK_THROWS_AS(OracleBackend(model, {{"ghost", 0.0}}), Error);
}

TEST_CASE("instrumented backends count traffic by role") {
  auto scripted = ScriptedBackend::from_text(R"(
{"role": "reward_scorer", "reply": {"reward": 5, "rationale": "a"}}
{"role": "reward_scorer", "reply": {"reward": 6, "rationale": "b"}}
)");
  InstrumentedBackend counted(scripted);

  auto request = make_request(Role::kRewardScorer, ReplySchema::kScore);
  request.images.push_back({"frame", kinesim::RasterImage(2, 2)});
  counted.complete(request);
  counted.complete(request);

  CHECK(counted.stats().requests == 2);
  CHECK(counted.stats().images == 2);
  CHECK(counted.stats().requests_per_role.at("reward_scorer") == 2);
  CHECK(counted.name() == "scripted");
}

namespace {

// In-process chat completions endpoint capturing request bodies.
class FakeEndpoint {
 public:
  explicit FakeEndpoint(std::function<std::string(const json&, int)> responder)
      : responder_(std::move(responder)) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   json body = json::parse(req.body);
                   int call = calls_++;
                   requests_.push_back(body);
                   auth_headers_.push_back(req.get_header_value("Authorization"));
                   json reply = {
                       {"choices",
                        {{{"message",
                           {{"role", "assistant"},
                            {"content", responder_(body, call)}}}}}}};
                   res.set_content(reply.dump(), "application/json");
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }

  std::vector<json> requests_;
  std::vector<std::string> auth_headers_;

 private:
  httplib::Server server_;
  std::thread thread_;
  std::function<std::string(const json&, int)> responder_;
  std::atomic<int> calls_{0};
  int port_ = 0;
};

}  // namespace

TEST_CASE("the http backend speaks chat completions with inline frames") {
  FakeEndpoint fake([](const json&, int) {
    return R"({"reward": 7, "rationale": "looks right"})";
  });

  HttpConfig config;
  config.endpoint = fake.endpoint();
  config.model = "test-model";
  config.api_key = "sk-local";
  HttpBackend backend(config);

  CriticRequest request = make_request(Role::kRewardScorer, ReplySchema::kScore);
  request.images.push_back({"frame 0", kinesim::RasterImage(8, 8, {10, 20, 30})});

  auto reply = std::get<ScoreReply>(backend.complete(request));
  CHECK(reply.reward == 7);

  REQUIRE(fake.requests_.size() == 1);
  const json& sent = fake.requests_[0];
  CHECK(sent["model"] == "test-model");
  CHECK(sent["temperature"] == 0.0);
  REQUIRE(sent["messages"].size() == 2);
  CHECK(sent["messages"][0]["role"] == "system");
  std::string system = sent["messages"][0]["content"].get<std::string>();
  CHECK(system.find("reward_scorer") != std::string::npos);
  CHECK(system.find("reward") != std::string::npos);

  const json& content = sent["messages"][1]["content"];
  REQUIRE(content.is_array());
  bool has_image = false;
  for (const json& block : content) {
    if (block["type"] == "image_url") {
      has_image = true;
      std::string url = block["image_url"]["url"].get<std::string>();
      CHECK(url.rfind("data:image/png;base64,", 0) == 0);
    }
  }
  CHECK(has_image);
  CHECK(fake.auth_headers_[0] == "Bearer sk-local");
}

TEST_CASE("schema violations trigger corrective reprompts, then give up") {
  FakeEndpoint fake([](const json&, int call) {
    if (call == 0) return std::string("completely not json");
    return std::string(R"({"reward": 6, "rationale": "second try"})");
  });

  HttpConfig config;
  config.endpoint = fake.endpoint();
  HttpBackend backend(config);
  auto request = make_request(Role::kRewardScorer, ReplySchema::kScore);
  auto reply = std::get<ScoreReply>(backend.complete(request));
  CHECK(reply.reward == 6);
  REQUIRE(fake.requests_.size() == 2);

  // The retry carries the failed reply and a pointed correction.
  const json& retry = fake.requests_[1]["messages"];
  REQUIRE(retry.size() == 4);
  CHECK(retry[2]["role"] == "assistant");
  std::string complaint = retry[3]["content"].get<std::string>();
  CHECK(complaint.find("violated") != std::string::npos);

  FakeEndpoint hopeless([](const json&, int) { return std::string("{}"); });
  HttpConfig hopeless_config;
  hopeless_config.endpoint = hopeless.endpoint();
  HttpBackend stubborn(hopeless_config);
  try {
    stubborn.complete(request);
    FAIL("expected SchemaViolationError");
  } catch (const SchemaViolationError& e) {
    CHECK(e.raw_replies().size() == 3);  // one per attempt
  }
}

TEST_CASE("transport failures surface as Transport errors") {
  HttpConfig config;
  config.endpoint = "http://127.0.0.1:1";  // nothing listens here
  config.timeout_seconds = 2;
  HttpBackend backend(config);
  try {
    backend.complete(make_request(Role::kRewardScorer, ReplySchema::kScore));
    FAIL("expected Transport error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTransport);
  }

  CHECK_THROWS_AS(HttpBackend(HttpConfig{}), Error);
  HttpConfig https;
  https.endpoint = "https://example.com";
  CHECK_THROWS_AS(HttpBackend{https}, Error);
}

TEST_CASE("the api key falls back to the environment") {
  setenv("CRISP_API_KEY", "sk-from-env", 1);
  FakeEndpoint fake([](const json&, int) {
    return std::string(R"({"reward": 5, "rationale": "ok"})");
  });
  HttpConfig config;
  config.endpoint = fake.endpoint();
  HttpBackend backend(config);
  backend.complete(make_request(Role::kRewardScorer, ReplySchema::kScore));
  CHECK(fake.auth_headers_.at(0) == "Bearer sk-from-env");
  unsetenv("CRISP_API_KEY");
}
