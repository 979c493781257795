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
#include <cmath>
#include <fstream>
#include <sstream>

#include "crisp/errors.hpp"
#include "crisp/kinesim/fk.hpp"
#include "crisp/kinesim/keyframes.hpp"
#include "crisp/kinesim/png.hpp"
#include "crisp/kinesim/probes.hpp"
#include "crisp/kinesim/render.hpp"
#include "crisp/kinesim/trajectory.hpp"
#include "doctest.h"

using namespace crisp;
using namespace crisp::kinesim;

namespace {

mjcf::RobotModel load_model(const char* name) {
  std::ifstream in(std::string(CRISP_MODELS_DIR) + "/" + name,
                   std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  return mjcf::parse_mjcf(text.str());
}

Eigen::Vector3d body_position(const mjcf::RobotModel& model, const Pose& pose,
                              const char* body) {
  auto world = forward_kinematics(model, pose);
  return world[model.body_index(body)].translation();
}

constexpr double kHalfPi = 1.5707963267948966;

}  // namespace

TEST_CASE("fk places the arm3 chain by summing link offsets at rest") {
  auto model = load_model("arm3.xml");
  Pose zero(3, 0.0);
  CHECK(body_position(model, zero, "arm1").isApprox(
      Eigen::Vector3d(0, 0, 0.05), 1e-12));
  CHECK(body_position(model, zero, "arm2").isApprox(
      Eigen::Vector3d(0, 0, 0.35), 1e-12));
  CHECK(body_position(model, zero, "arm3").isApprox(
      Eigen::Vector3d(0, 0, 0.60), 1e-12));

  // Tip sphere center: arm3 origin plus the local 0.2 z offset.
  auto world = forward_kinematics(model, zero);
  Eigen::Vector3d tip =
      world[model.body_index("arm3")] * Eigen::Vector3d(0, 0, 0.2);
  CHECK(tip.isApprox(Eigen::Vector3d(0, 0, 0.8), 1e-12));
}

TEST_CASE("a hinge rotates its subtree about the joint axis") {
  auto model = load_model("arm3.xml");

  // Base joint at +90 degrees folds the whole chain onto +X.
  Pose pose{kHalfPi, 0.0, 0.0};
  CHECK(body_position(model, pose, "arm2").isApprox(
      Eigen::Vector3d(0.30, 0, 0.05), 1e-9));
  CHECK(body_position(model, pose, "arm3").isApprox(
      Eigen::Vector3d(0.55, 0, 0.05), 1e-9));

  // The elbow alone bends only the distal links.
  Pose elbow{0.0, kHalfPi, 0.0};
  CHECK(body_position(model, elbow, "arm2").isApprox(
      Eigen::Vector3d(0, 0, 0.35), 1e-12));
  CHECK(body_position(model, elbow, "arm3").isApprox(
      Eigen::Vector3d(0.25, 0, 0.35), 1e-9));
}

TEST_CASE("hinge anchors shift the center of rotation") {
  auto model = mjcf::parse_mjcf(R"(
    <mujoco><compiler angle="radian"/><worldbody><body name="b">
      <joint name="a" axis="0 1 0" pos="0 0 0.5" range="-3.14 3.14"/>
      <geom type="sphere" size="0.05" pos="0 0 1"/>
    </body></worldbody></mujoco>)");
  auto world = forward_kinematics(model, {kHalfPi});
  Eigen::Vector3d p = world[1] * Eigen::Vector3d(0, 0, 1);
  CHECK(p.isApprox(Eigen::Vector3d(0.5, 0, 0.5), 1e-9));
}

TEST_CASE("a slide translates along its axis") {
  auto model = load_model("duck.xml");
  Pose pose(4, 0.0);
  Eigen::Vector3d head0 = body_position(model, pose, "head");
  int j = model.joint_index("neck_extend");
  pose[j] = 0.2;
  Eigen::Vector3d head1 = body_position(model, pose, "head");
  CHECK((head1 - head0).isApprox(Eigen::Vector3d(0, 0, 0.2), 1e-12));
}

TEST_CASE("stacked joints on one body compose in document order") {
  auto model = load_model("humanoid12.xml");
  Pose pose(12, 0.0);
  pose[model.joint_index("waist_yaw")] = kHalfPi;
  Eigen::Vector3d shoulder = body_position(model, pose, "left_shoulder");
  CHECK(shoulder.isApprox(Eigen::Vector3d(-0.24, 0, 1.37), 1e-9));
}

TEST_CASE("clip_pose clamps into limits and validates length") {
  auto model = load_model("arm3.xml");
  Pose clipped = clip_pose(model, {9.0, -9.0, 0.5});
  CHECK(clipped == Pose{1.57, -2.0, 0.5});

  CHECK_THROWS_AS(clip_pose(model, {0.0}), Error);
  try {
    forward_kinematics(model, {0.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kPoseLengthMismatch);
  }
}

TEST_CASE("model reach bounds every reachable point, pose independently") {
  auto model = load_model("arm3.xml");
  double reach = model_reach(model);
  CHECK(reach == doctest::Approx(0.845));

  // Sample a few extreme poses; nothing escapes the bound.
  for (Pose pose : {Pose{1.57, 2.0, 1.0}, Pose{-1.57, -2.0, -1.0},
                    Pose{1.57, -2.0, 1.0}}) {
    auto world = forward_kinematics(model, pose);
    for (size_t b = 0; b < model.bodies.size(); ++b) {
      for (const auto& geom : model.bodies[b].geoms) {
        Eigen::Vector3d center = world[b] * geom.pos;
        CHECK(center.norm() <= reach + 1e-9);
      }
    }
  }
}

TEST_CASE("subtree enumeration is preorder from the requested body") {
  auto model = load_model("arm3.xml");
  auto subtree = subtree_bodies(model, model.body_index("arm2"));
  REQUIRE(subtree.size() == 2);
  CHECK(model.bodies[subtree[0]].name == "arm2");
  CHECK(model.bodies[subtree[1]].name == "arm3");
}

TEST_CASE("camera bases for the canonical viewpoints") {
  auto front = camera_basis({0.0, 0.0});
  CHECK(front.right.isApprox(Eigen::Vector3d::UnitX(), 1e-12));
  CHECK(front.up.isApprox(Eigen::Vector3d::UnitZ(), 1e-12));
  CHECK(front.forward.isApprox(Eigen::Vector3d::UnitY(), 1e-12));

  auto side = camera_basis({90.0, 0.0});
  CHECK(side.forward.isApprox(-Eigen::Vector3d::UnitX(), 1e-9));
  CHECK(side.right.isApprox(Eigen::Vector3d::UnitY(), 1e-9));

  auto top = camera_basis({0.0, 90.0});
  CHECK(top.forward.isApprox(-Eigen::Vector3d::UnitZ(), 1e-9));
  CHECK(top.up.isApprox(Eigen::Vector3d::UnitY(), 1e-9));
}

TEST_CASE("full view frames ignore the pose; zoom frames track it") {
  auto model = load_model("arm3.xml");
  CameraSpec camera;
  ViewFrame a = full_view_frame(model, camera);
  ViewFrame b = full_view_frame(model, camera);
  CHECK(a.center == b.center);
  CHECK(a.half_size == b.half_size);
  CHECK(a.half_size == doctest::Approx(0.845 * 1.1));

  int tip = model.body_index("arm3");
  ViewFrame zoom0 = zoom_view_frame(model, {0, 0, 0}, camera, tip);
  ViewFrame zoom1 = zoom_view_frame(model, {1.0, 0, 0}, camera, tip);
  CHECK(zoom0.half_size < a.half_size);
  // Moving the base joint displaces the subtree, so the zoom recenters.
  CHECK((zoom0.center - zoom1.center).norm() > 0.01);
}

TEST_CASE("rendering is deterministic and shows the robot") {
  auto model = load_model("arm3.xml");
  CameraSpec camera;
  ViewFrame frame = full_view_frame(model, camera);
  RenderOptions options;
  options.pixels = 128;

  RasterImage a = render_model(model, {0, 0, 0}, camera, frame, options);
  RasterImage b = render_model(model, {0, 0, 0}, camera, frame, options);
  CHECK(a.pixels == b.pixels);

  // The upright arm covers the center column above the root.
  Rgb background{235, 238, 240};
  int cx = 64;
  int arm_y = static_cast<int>((frame.half_size - (0.3 - frame.center.y())) /
                               (2 * frame.half_size) * 128);
  CHECK(a.at(cx, arm_y) != background);

  // A different pose changes pixels.
  RasterImage c = render_model(model, {1.0, 0, 0}, camera, frame, options);
  CHECK(c.pixels != a.pixels);

  // Corners stay background.
  CHECK(a.at(2, 2) == background);
  CHECK(a.at(125, 2) == background);
}

TEST_CASE("labels and highlights reach the raster") {
  auto model = load_model("arm3.xml");
  CameraSpec camera;
  ViewFrame frame = full_view_frame(model, camera);
  RenderOptions options;
  options.pixels = 128;
  options.label = "j1 plus 0.5 rad (full)";
  options.highlight_body = model.body_index("arm3");

  RasterImage image = render_model(model, {0, 0, 0}, camera, frame, options);
  bool label_ink = false;
  for (int x = 4; x < 100 && !label_ink; ++x) {
    for (int y = 4; y < 12 && !label_ink; ++y) {
      label_ink = image.at(x, y) == Rgb{20, 20, 20};
    }
  }
  CHECK(label_ink);

  bool highlight_ink = false;
  for (int y = 0; y < 128 && !highlight_ink; ++y) {
    for (int x = 0; x < 128 && !highlight_ink; ++x) {
      highlight_ink = image.at(x, y) == Rgb{235, 140, 50};
    }
  }
  CHECK(highlight_ink);
}

TEST_CASE("png encoding round-trips pixels and is byte stable") {
  RasterImage image(33, 17, {200, 100, 50});
  draw_text(image, 2, 2, "OK 1.5", {0, 0, 0});
  image.set(32, 16, {1, 2, 3});

  auto bytes = encode_png(image);
  auto again = encode_png(image);
  CHECK(bytes == again);
  CHECK(bytes[0] == 137);
  CHECK(bytes[1] == 'P');

  RasterImage decoded = decode_png(bytes);
  CHECK(decoded.width == 33);
  CHECK(decoded.height == 17);
  CHECK(decoded.pixels == image.pixels);

  CHECK_THROWS_AS(decode_png({1, 2, 3}), Error);
}

TEST_CASE("text is measured and drawn without touching out-of-bounds pixels") {
  RasterImage image(20, 10, {255, 255, 255});
  draw_text(image, 15, 2, "WWW", {0, 0, 0});  // clips off the right edge
  CHECK(text_width("WWW") == 17);
  CHECK(text_width("") == 0);
  CHECK(image.at(19, 19) == Rgb{});  // out of bounds reads are zero
}

TEST_CASE("target commands ease in and land exactly on the target") {
  auto model = load_model("arm3.xml");
  pipeline::JointCommand cmd;
  cmd.kind = pipeline::CommandKind::kSetTarget;
  cmd.joint = "j1";
  cmd.value = 1.2;

  auto samples = simulate_step(model, {0, 0, 0}, {cmd}, 2.0, 20.0);
  REQUIRE(samples.size() == 41);
  CHECK(samples.front()[0] == 0.0);
  CHECK(samples.back()[0] == doctest::Approx(1.2).epsilon(1e-15));
  // Halfway in time is halfway in value for the cosine profile.
  CHECK(samples[20][0] == doctest::Approx(0.6));

  // The approach is monotone.
  for (size_t k = 1; k < samples.size(); ++k) {
    CHECK(samples[k][0] >= samples[k - 1][0] - 1e-12);
  }
  // Uncommanded joints hold.
  for (const auto& s : samples) {
    CHECK(s[1] == 0.0);
    CHECK(s[2] == 0.0);
  }
}

TEST_CASE("oscillation commands trace a sine and respect limits") {
  auto model = load_model("arm3.xml");
  pipeline::JointCommand cmd;
  cmd.kind = pipeline::CommandKind::kOscillate;
  cmd.joint = "j3";
  cmd.center = 0.0;
  cmd.amplitude = 0.5;
  cmd.cycles = 2.0;

  auto samples = simulate_step(model, {0, 0, 0}, {cmd}, 4.0, 20.0);
  REQUIRE(samples.size() == 81);
  CHECK(samples[10][2] == doctest::Approx(0.5));    // first crest
  CHECK(samples[20][2] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(samples[30][2] == doctest::Approx(-0.5));   // first trough

  // Amplitudes beyond the range clip at the limit.
  cmd.amplitude = 5.0;
  auto clipped = simulate_step(model, {0, 0, 0}, {cmd}, 4.0, 20.0);
  double max_seen = 0.0;
  for (const auto& s : clipped) max_seen = std::max(max_seen, std::abs(s[2]));
  CHECK(max_seen == 1.0);  // j3 range is [-1, 1]
}

TEST_CASE("step simulation validates commands and counts samples by rate") {
  auto model = load_model("arm3.xml");
  pipeline::JointCommand bad;
  bad.joint = "ghost";
  CHECK_THROWS_AS(simulate_step(model, {0, 0, 0}, {bad}, 1.0, 20.0), Error);

  auto samples = simulate_step(model, {0, 0, 0}, {}, 1.55, 20.0);
  CHECK(samples.size() == 32);  // round(31.0) + 1
}

TEST_CASE("plans stitch windows with shared boundaries and hold in gaps") {
  auto model = load_model("arm3.xml");
  pipeline::BehaviorPlan plan;
  plan.steps.push_back({1, "raise", 0.0, 2.0});
  plan.steps.push_back({2, "hold off", 2.5, 3.5});

  pipeline::CommandSequence sequence;
  pipeline::JointCommand raise;
  raise.joint = "j1";
  raise.value = 1.0;
  sequence.steps.push_back({1, {raise}});
  pipeline::JointCommand back;
  back.joint = "j1";
  back.value = 0.25;
  sequence.steps.push_back({2, {back}});

  Timeline timeline = simulate_plan(model, plan, sequence, 20.0);
  // 41 for step 0, 10 held for the 0.5 s gap, 20 more for step 1.
  CHECK(timeline.samples.size() == 71);
  REQUIRE(timeline.step_sample_ranges.size() == 2);
  CHECK(timeline.step_sample_ranges[0] == std::pair{0, 40});
  CHECK(timeline.step_sample_ranges[1] == std::pair{50, 70});

  for (int k = 41; k <= 50; ++k) {
    CHECK(timeline.samples[k][0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(timeline.samples.back()[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("pure target steps produce exactly one keyframe at the end") {
  auto model = load_model("arm3.xml");
  pipeline::JointCommand cmd;
  cmd.joint = "j1";
  cmd.value = 1.0;
  auto samples = simulate_step(model, {0, 0, 0}, {cmd}, 2.0, 20.0);
  auto keys = select_keyframes(samples, {0}, false);
  CHECK(keys == std::vector<int>{40});
}

TEST_CASE("oscillation keyframes land on the motion extrema") {
  auto model = load_model("arm3.xml");
  pipeline::JointCommand cmd;
  cmd.kind = pipeline::CommandKind::kOscillate;
  cmd.joint = "j3";
  cmd.amplitude = 0.5;
  cmd.cycles = 2.0;
  auto samples = simulate_step(model, {0, 0, 0}, {cmd}, 4.0, 20.0);
  auto keys = select_keyframes(samples, {2}, true);
  CHECK(keys == std::vector<int>{10, 30, 50, 70});
}

TEST_CASE("a still window collapses to its final sample") {
  std::vector<Pose> still(31, Pose{0.4, 0.0, 0.0});
  auto keys = select_keyframes(still, {0}, true);
  CHECK(keys == std::vector<int>{30});

  CHECK(select_keyframes({}, {0}, true).empty());
  CHECK(select_keyframes(still, {}, true) == std::vector<int>{30});
}

TEST_CASE("clipped oscillations keep one keyframe per plateau") {
  auto model = load_model("arm3.xml");
  pipeline::JointCommand cmd;
  cmd.kind = pipeline::CommandKind::kOscillate;
  cmd.joint = "j3";
  cmd.amplitude = 3.0;  // saturates the [-1, 1] range
  cmd.cycles = 1.0;
  auto samples = simulate_step(model, {0, 0, 0}, {cmd}, 4.0, 20.0);
  auto keys = select_keyframes(samples, {2}, true);
  REQUIRE(!keys.empty());
  for (size_t i = 1; i < keys.size(); ++i) CHECK(keys[i] > keys[i - 1]);
  // One keyframe inside the saturated crest, one inside the trough.
  bool crest = false, trough = false;
  for (int k : keys) {
    if (samples[k][2] == 1.0) crest = true;
    if (samples[k][2] == -1.0) trough = true;
  }
  CHECK(crest);
  CHECK(trough);
}

TEST_CASE("joint probes perturb by half the half-range and flag clipping") {
  auto model = load_model("arm3.xml");
  ProbeOptions options;
  options.pixels = 96;
  auto probes = build_joint_probes(model, {0, 0, 0}, options);
  REQUIRE(probes.size() == 3);

  const JointProbe& p0 = probes[0];
  CHECK(p0.joint == "j1");
  CHECK(p0.minus_value == doctest::Approx(-0.785));
  CHECK(p0.plus_value == doctest::Approx(0.785));
  CHECK_FALSE(p0.minus_degenerate);
  CHECK_FALSE(p0.plus_degenerate);
  REQUIRE(p0.images.size() == 6);
  CHECK(p0.images[0].label == "j1 minus -0.785 rad (full)");
  CHECK(p0.images[5].label == "j1 plus 0.785 rad (zoom)");

  // A joint resting on its limit degenerates on the clipped side.
  auto duck = load_model("duck.xml");
  auto duck_probes = build_joint_probes(duck, {0, 0, 0, 0}, options);
  int neck = duck.joint_index("neck_extend");
  CHECK(duck_probes[neck].minus_degenerate);
  CHECK_FALSE(duck_probes[neck].plus_degenerate);
  CHECK(duck_probes[neck].plus_value == doctest::Approx(0.075));
  CHECK(duck_probes[neck].images[1].label == "neck_extend base 0 m (full)");

  // Zoom-free probes halve the image count.
  options.include_zoom = false;
  auto flat = build_joint_probes(model, {0, 0, 0}, options);
  CHECK(flat[0].images.size() == 3);
}

TEST_CASE("probe rendering is reproducible byte for byte") {
  auto model = load_model("arm3.xml");
  ProbeOptions options;
  options.pixels = 64;
  auto a = build_joint_probes(model, {0.2, -0.3, 0.1}, options);
  auto b = build_joint_probes(model, {0.2, -0.3, 0.1}, options);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].images.size() == b[i].images.size());
    for (size_t k = 0; k < a[i].images.size(); ++k) {
      CHECK(a[i].images[k].label == b[i].images[k].label);
      CHECK(a[i].images[k].image.pixels == b[i].images[k].image.pixels);
    }
  }
}
