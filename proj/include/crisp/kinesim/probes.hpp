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

#ifndef CRISP_KINESIM_PROBES_HPP_
#define CRISP_KINESIM_PROBES_HPP_

#include <string>
#include <vector>

#include "crisp/kinesim/render.hpp"

namespace crisp::kinesim {

// What moving one joint looks like. Each probe perturbs a single joint by
// half of its half range in both directions from the reference pose,
// clipped to the limits, and renders full and zoomed views per value.
struct JointProbe {
  std::string joint;
  double base_value = 0.0;
  double minus_value = 0.0;
  double plus_value = 0.0;
  // A perturbation that clipping collapsed onto the base value carries no
  // visual signal; flag it instead of sending identical frames.
  bool minus_degenerate = false;
  bool plus_degenerate = false;
  std::vector<LabeledImage> images;
};

struct ProbeOptions {
  CameraSpec camera;
  int pixels = 256;
  bool include_zoom = true;
};

// One probe per joint, model order. With zooms enabled each probe holds six
// labeled images: minus/base/plus in the full frame, then minus/base/plus
// zoomed on the joint's subtree.
std::vector<JointProbe> build_joint_probes(const mjcf::RobotModel& model,
                                           const Pose& pose,
                                           const ProbeOptions& options = {});

// Caption format shared by probes and step renders:
// "<joint> <tag> <value> <unit> (<view>)".
std::string probe_label(const mjcf::JointDescriptor& joint,
                        std::string_view tag, double value,
                        std::string_view view);

}  // namespace crisp::kinesim

#endif  // CRISP_KINESIM_PROBES_HPP_
