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

#include "crisp/kinesim/fk.hpp"

#include <algorithm>
#include <cmath>

#include "crisp/errors.hpp"

namespace crisp::kinesim {
namespace {

void require_pose_length(const mjcf::RobotModel& model, const Pose& pose) {
  if (pose.size() != model.joints.size()) {
    throw Error(ErrorKind::kPoseLengthMismatch,
                "pose has " + std::to_string(pose.size()) + " values for " +
                    std::to_string(model.joints.size()) + " joints");
  }
}

}  // namespace

Pose clip_pose(const mjcf::RobotModel& model, Pose pose) {
  require_pose_length(model, pose);
  for (size_t i = 0; i < pose.size(); ++i) {
    pose[i] = std::clamp(pose[i], model.joints[i].limit_min,
                         model.joints[i].limit_max);
  }
  return pose;
}

std::vector<Eigen::Isometry3d> forward_kinematics(const mjcf::RobotModel& model,
                                                  const Pose& pose) {
  require_pose_length(model, pose);
  std::vector<Eigen::Isometry3d> world(model.bodies.size(),
                                       Eigen::Isometry3d::Identity());
  // Bodies are stored parent-first, so one forward sweep suffices.
  for (size_t b = 1; b < model.bodies.size(); ++b) {
    const mjcf::BodyNode& body = model.bodies[b];
    int parent = model.body_index(*body.parent);
    Eigen::Isometry3d frame = world[parent];
    frame.translate(body.local_position);
    frame.rotate(body.local_orientation);
    for (const std::string& joint_name : body.attached_joints) {
      int j = model.joint_index(joint_name);
      const mjcf::JointDescriptor& joint = model.joints[j];
      double v = pose[j];
      if (joint.kind == mjcf::JointKind::kHinge) {
        frame.translate(joint.anchor);
        frame.rotate(Eigen::AngleAxisd(v, joint.axis));
        frame.translate(-joint.anchor);
      } else {
        frame.translate(joint.axis * v);
      }
    }
    world[b] = frame;
  }
  return world;
}

double geom_bound_radius(const mjcf::GeomPrimitive& geom) {
  double local = 0.0;
  switch (geom.kind) {
    case mjcf::GeomKind::kSphere:
      local = geom.size.x();
      break;
    case mjcf::GeomKind::kCapsule:
      local = geom.size.y() + geom.size.x();
      break;
    case mjcf::GeomKind::kCylinder:
      local = std::hypot(geom.size.y(), geom.size.x());
      break;
    case mjcf::GeomKind::kBox:
      local = geom.size.norm();
      break;
  }
  return geom.pos.norm() + local;
}

double model_reach(const mjcf::RobotModel& model) {
  std::vector<double> path(model.bodies.size(), 0.0);
  double reach = 0.0;
  for (size_t b = 1; b < model.bodies.size(); ++b) {
    const mjcf::BodyNode& body = model.bodies[b];
    int parent = model.body_index(*body.parent);
    // Slides can extend a chain beyond its rest geometry.
    double slide_travel = 0.0;
    for (const std::string& joint_name : body.attached_joints) {
      const mjcf::JointDescriptor& joint = model.joint(joint_name);
      if (joint.kind == mjcf::JointKind::kSlide) {
        slide_travel +=
            std::max(std::abs(joint.limit_min), std::abs(joint.limit_max));
      }
    }
    path[b] = path[parent] + body.local_position.norm() + slide_travel;
    for (const mjcf::GeomPrimitive& geom : body.geoms) {
      reach = std::max(reach, path[b] + geom_bound_radius(geom));
    }
    reach = std::max(reach, path[b]);
  }
  // World-attached geoms (floors, plinths) count too.
  for (const mjcf::GeomPrimitive& geom : model.bodies[0].geoms) {
    reach = std::max(reach, geom_bound_radius(geom));
  }
  return reach > 0.0 ? reach : 1.0;
}

Eigen::Vector3d root_origin(const mjcf::RobotModel& model) {
  if (model.bodies.size() < 2) return Eigen::Vector3d::Zero();
  return model.bodies[1].local_position;
}

std::vector<int> subtree_bodies(const mjcf::RobotModel& model, int body_index) {
  std::vector<int> out;
  std::vector<int> stack{body_index};
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    out.push_back(b);
    const mjcf::BodyNode& body = model.bodies[b];
    for (auto it = body.children.rbegin(); it != body.children.rend(); ++it) {
      stack.push_back(model.body_index(*it));
    }
  }
  return out;
}

}  // namespace crisp::kinesim
