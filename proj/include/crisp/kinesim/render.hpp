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

#ifndef CRISP_KINESIM_RENDER_HPP_
#define CRISP_KINESIM_RENDER_HPP_

#include <Eigen/Geometry>
#include <string>

#include "crisp/kinesim/fk.hpp"
#include "crisp/kinesim/image.hpp"
#include "crisp/mjcf/model.hpp"

namespace crisp::kinesim {

// Orthographic camera. Azimuth 0 / elevation 0 is the front view: +X maps
// right, +Z maps up. Azimuth rotates counterclockwise about world +Z
// (azimuth 90 is the right-side view), elevation tilts the camera upward
// (elevation 90 looks straight down).
struct CameraSpec {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
};

struct CameraBasis {
  Eigen::Vector3d right;
  Eigen::Vector3d up;
  Eigen::Vector3d forward;  // from camera into the scene
};

CameraBasis camera_basis(const CameraSpec& camera);

// A square window in projected (right, up) coordinates.
struct ViewFrame {
  Eigen::Vector2d center{0.0, 0.0};
  double half_size = 1.0;
};

// Pose independent framing covering everything the model can reach, with
// 10 percent slack. Identical poses of the same model always share a frame,
// so full views are comparable across time.
ViewFrame full_view_frame(const mjcf::RobotModel& model,
                          const CameraSpec& camera);

// Tight squarified framing of the subtree rooted at body_index at the given
// pose, padded by 20 percent.
ViewFrame zoom_view_frame(const mjcf::RobotModel& model, const Pose& pose,
                          const CameraSpec& camera, int body_index);

struct RenderOptions {
  int pixels = 256;
  std::string label;        // drawn in the top left corner when nonempty
  int highlight_body = -1;  // tints this body's subtree, -1 disables
};

// Software rasterizer: painter's algorithm over geom primitives, flat
// shading, joint anchors marked with dark dots. Deterministic pixels for
// identical inputs.
RasterImage render_model(const mjcf::RobotModel& model, const Pose& pose,
                         const CameraSpec& camera, const ViewFrame& frame,
                         const RenderOptions& options = {});

}  // namespace crisp::kinesim

#endif  // CRISP_KINESIM_RENDER_HPP_
