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

#ifndef CRISP_MJCF_MODEL_HPP_
#define CRISP_MJCF_MODEL_HPP_

#include <Eigen/Geometry>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crisp::mjcf {

enum class JointKind { kHinge, kSlide };

const char* to_string(JointKind kind);

// One actively controllable scalar axis. Values are radians for hinges and
// meters for slides; limits are finite by construction.
struct JointDescriptor {
  std::string name;
  JointKind kind = JointKind::kHinge;
  std::string body;                           // owning body
  Eigen::Vector3d axis{0.0, 0.0, 1.0};        // unit length
  double limit_min = 0.0;
  double limit_max = 0.0;
  double default_value = 0.0;                 // within [limit_min, limit_max]
  Eigen::Vector3d anchor{0.0, 0.0, 0.0};      // rotation center, body frame

  double range() const { return limit_max - limit_min; }
  double half_range() const { return 0.5 * (limit_max - limit_min); }
};

enum class GeomKind { kSphere, kCapsule, kCylinder, kBox };

const char* to_string(GeomKind kind);

// A collision/visual primitive in its body's frame. Capsules and cylinders
// are stored axis-aligned to local z with size = (radius, half_length, 0);
// spheres use size = (radius, 0, 0); boxes use half extents.
struct GeomPrimitive {
  GeomKind kind = GeomKind::kSphere;
  Eigen::Vector3d size{0.0, 0.0, 0.0};
  Eigen::Vector3d pos{0.0, 0.0, 0.0};
  Eigen::Quaterniond quat{1.0, 0.0, 0.0, 0.0};
};

struct BodyNode {
  std::string name;
  std::optional<std::string> parent;          // empty for the root
  Eigen::Vector3d local_position{0.0, 0.0, 0.0};
  Eigen::Quaterniond local_orientation{1.0, 0.0, 0.0, 0.0};
  std::vector<GeomPrimitive> geoms;
  std::vector<std::string> attached_joints;   // document order
  std::vector<std::string> children;
};

// Parsed kinematic tree. Bodies are stored in document (pre-)order with the
// implicit world body first, so every body's parent precedes it. Joints are
// in document order; default_pose has one entry per joint in that order.
struct RobotModel {
  std::string name;
  std::vector<BodyNode> bodies;
  std::vector<JointDescriptor> joints;
  std::vector<double> default_pose;

  int joint_index(std::string_view joint_name) const;   // -1 when absent
  int body_index(std::string_view body_name) const;     // -1 when absent
  const JointDescriptor& joint(std::string_view joint_name) const;  // throws
};

struct MorphologySummary {
  std::string text;
  std::map<std::string, int> dof_per_group;
  std::map<std::string, std::vector<std::string>> joints_per_group;
};

// Parses a robot description into a validated model. The supported subset is
// documented in the README: mujoco/compiler/worldbody/body/joint/geom/keyframe
// elements, hinge and slide joints with mandatory finite ranges.
RobotModel parse_mjcf(std::string_view xml_text, std::string_view fallback_name = "robot");

// Joints in document order; the list length is the model's degree-of-freedom
// count.
std::vector<JointDescriptor> extract_joint_set(const RobotModel& model);

// Limits exactly as parsed. Throws Error(kUnknownJoint) for absent names.
std::pair<double, double> joint_limits(const RobotModel& model,
                                       std::string_view joint_name);

// Deterministic template summary. Joints are grouped by name prefix
// (trailing indices and axis words stripped); single-token names fall back
// to the owning body's name.
MorphologySummary summarize_morphology(const RobotModel& model);

// Group key used by summarize_morphology, exposed for tests and tooling.
std::string joint_group(const RobotModel& model, const JointDescriptor& joint);

}  // namespace crisp::mjcf

#endif  // CRISP_MJCF_MODEL_HPP_
