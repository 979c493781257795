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

#ifndef CRISP_KINESIM_FK_HPP_
#define CRISP_KINESIM_FK_HPP_

#include <Eigen/Geometry>
#include <vector>

#include "crisp/mjcf/model.hpp"

namespace crisp::kinesim {

// A pose is one scalar per joint, model order. All public entry points
// validate the length.
using Pose = std::vector<double>;

// Clamps every entry into its joint's limits.
Pose clip_pose(const mjcf::RobotModel& model, Pose pose);

// World transform per body, aligned with model.bodies. A body's frame is
// parent * T(pos) * R(quat) * product of its joint motions in document
// order; hinges rotate about their axis through the joint anchor, slides
// translate along the axis.
std::vector<Eigen::Isometry3d> forward_kinematics(const mjcf::RobotModel& model,
                                                  const Pose& pose);

// Pose independent bound on how far any geometry can reach from the world
// origin: per body, the path sum of local offsets (plus slide travel) plus
// the largest geom bounding radius. Used to frame full views
// deterministically.
double model_reach(const mjcf::RobotModel& model);

// Conservative radius of a sphere around a geom's local origin covering it.
double geom_bound_radius(const mjcf::GeomPrimitive& geom);

// Projected world-space center of the root body (the first child of the
// world). Returns the world origin for body-less models.
Eigen::Vector3d root_origin(const mjcf::RobotModel& model);

// Bodies in the subtree rooted at `body_index`, preorder, including it.
std::vector<int> subtree_bodies(const mjcf::RobotModel& model, int body_index);

}  // namespace crisp::kinesim

#endif  // CRISP_KINESIM_FK_HPP_
