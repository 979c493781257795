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

#include "crisp/kinesim/probes.hpp"

#include <algorithm>
#include <cmath>

#include "crisp/canonical.hpp"

namespace crisp::kinesim {

std::string probe_label(const mjcf::JointDescriptor& joint,
                        std::string_view tag, double value,
                        std::string_view view) {
  const char* unit = joint.kind == mjcf::JointKind::kHinge ? "rad" : "m";
  return joint.name + " " + std::string(tag) + " " + format_double(value) +
         " " + unit + " (" + std::string(view) + ")";
}

std::vector<JointProbe> build_joint_probes(const mjcf::RobotModel& model,
                                           const Pose& pose,
                                           const ProbeOptions& options) {
  Pose base = clip_pose(model, pose);
  ViewFrame full = full_view_frame(model, options.camera);

  std::vector<JointProbe> probes;
  probes.reserve(model.joints.size());
  for (size_t j = 0; j < model.joints.size(); ++j) {
    const mjcf::JointDescriptor& joint = model.joints[j];
    JointProbe probe;
    probe.joint = joint.name;
    probe.base_value = base[j];

    double delta = 0.5 * joint.half_range();
    probe.minus_value =
        std::clamp(base[j] - delta, joint.limit_min, joint.limit_max);
    probe.plus_value =
        std::clamp(base[j] + delta, joint.limit_min, joint.limit_max);
    probe.minus_degenerate = std::abs(probe.minus_value - base[j]) < 1e-9;
    probe.plus_degenerate = std::abs(probe.plus_value - base[j]) < 1e-9;

    int body = model.body_index(joint.body);
    struct Variant {
      const char* tag;
      double value;
    };
    const Variant variants[] = {{"minus", probe.minus_value},
                                {"base", probe.base_value},
                                {"plus", probe.plus_value}};

    auto render_variant = [&](const Variant& v, std::string_view view,
                              const ViewFrame& frame) {
      Pose probed = base;
      probed[j] = v.value;
      RenderOptions render_options;
      render_options.pixels = options.pixels;
      render_options.highlight_body = body;
      render_options.label = probe_label(joint, v.tag, v.value, view);
      LabeledImage out;
      out.label = render_options.label;
      out.image =
          render_model(model, probed, options.camera, frame, render_options);
      probe.images.push_back(std::move(out));
    };

    for (const Variant& v : variants) render_variant(v, "full", full);
    if (options.include_zoom) {
      for (const Variant& v : variants) {
        Pose probed = base;
        probed[j] = v.value;
        ViewFrame zoom = zoom_view_frame(model, probed, options.camera, body);
        render_variant(v, "zoom", zoom);
      }
    }
    probes.push_back(std::move(probe));
  }
  return probes;
}

}  // namespace crisp::kinesim
