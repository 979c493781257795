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

#include "crisp/mjcf/model.hpp"

#include <string>

#include "crisp/errors.hpp"

namespace crisp::mjcf {

const char* to_string(JointKind kind) {
  switch (kind) {
    case JointKind::kHinge: return "hinge";
    case JointKind::kSlide: return "slide";
  }
  return "unknown";
}

const char* to_string(GeomKind kind) {
  switch (kind) {
    case GeomKind::kSphere: return "sphere";
    case GeomKind::kCapsule: return "capsule";
    case GeomKind::kCylinder: return "cylinder";
    case GeomKind::kBox: return "box";
  }
  return "unknown";
}

int RobotModel::joint_index(std::string_view joint_name) const {
  for (size_t i = 0; i < joints.size(); ++i) {
    if (joints[i].name == joint_name) return static_cast<int>(i);
  }
  return -1;
}

int RobotModel::body_index(std::string_view body_name) const {
  for (size_t i = 0; i < bodies.size(); ++i) {
    if (bodies[i].name == body_name) return static_cast<int>(i);
  }
  return -1;
}

const JointDescriptor& RobotModel::joint(std::string_view joint_name) const {
  int idx = joint_index(joint_name);
  if (idx < 0) {
    throw Error(ErrorKind::kUnknownJoint,
                "unknown joint '" + std::string(joint_name) + "'");
  }
  return joints[static_cast<size_t>(idx)];
}

std::vector<JointDescriptor> extract_joint_set(const RobotModel& model) {
  return model.joints;
}

std::pair<double, double> joint_limits(const RobotModel& model,
                                       std::string_view joint_name) {
  const JointDescriptor& j = model.joint(joint_name);
  return {j.limit_min, j.limit_max};
}

}  // namespace crisp::mjcf
