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
#include <cmath>
#include <set>
#include <string>

#include "crisp/canonical.hpp"
#include "crisp/errors.hpp"
#include "crisp/mjcf/model.hpp"
#include "crisp/mjcf/xml.hpp"

namespace crisp::mjcf {
namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(ErrorKind kind, const std::string& message, int line) {
  throw Error(kind, message + " (line " + std::to_string(line) + ")");
}

std::vector<double> numbers_or_fail(const XmlNode& node, std::string_view attr,
                                    size_t count) {
  const std::string* raw = node.attribute(attr);
  if (raw == nullptr) {
    fail(ErrorKind::kMalformedXml,
         "<" + node.tag + "> is missing attribute '" + std::string(attr) + "'",
         node.line);
  }
  std::vector<double> values = parse_number_list(*raw);
  if (values.size() != count) {
    fail(ErrorKind::kMalformedXml,
         "attribute '" + std::string(attr) + "' expects " +
             std::to_string(count) + " numbers, got '" + *raw + "'",
         node.line);
  }
  return values;
}

Eigen::Vector3d vec3_attr(const XmlNode& node, std::string_view attr,
                          const Eigen::Vector3d& fallback) {
  if (node.attribute(attr) == nullptr) return fallback;
  std::vector<double> v = numbers_or_fail(node, attr, 3);
  return {v[0], v[1], v[2]};
}

Eigen::Quaterniond quat_attr(const XmlNode& node) {
  if (node.attribute("quat") == nullptr) return Eigen::Quaterniond::Identity();
  std::vector<double> v = numbers_or_fail(node, "quat", 4);
  Eigen::Quaterniond q(v[0], v[1], v[2], v[3]);
  if (q.norm() < 1e-12) {
    fail(ErrorKind::kMalformedXml, "quat has zero norm", node.line);
  }
  q.normalize();
  return q;
}

class ModelBuilder {
 public:
  explicit ModelBuilder(std::string_view fallback_name) {
    model_.name = fallback_name;
    BodyNode world;
    world.name = "world";
    model_.bodies.push_back(std::move(world));
  }

  RobotModel take(const XmlNode& root) {
    if (root.tag != "mujoco") {
      fail(ErrorKind::kMalformedXml,
           "expected <mujoco> root element, found <" + root.tag + ">",
           root.line);
    }
    if (const std::string* name = root.attribute("model")) model_.name = *name;
    if (const XmlNode* compiler = root.first_child("compiler")) {
      read_compiler(*compiler);
    }
    if (const XmlNode* worldbody = root.first_child("worldbody")) {
      read_body_children(*worldbody, 0);
    }
    if (const XmlNode* keyframe = root.first_child("keyframe")) {
      read_keyframe(*keyframe);
    }
    resolve_default_pose();
    return std::move(model_);
  }

 private:
  void read_compiler(const XmlNode& node) {
    const std::string* angle = node.attribute("angle");
    if (angle == nullptr) return;
    if (*angle == "radian") {
      degrees_ = false;
    } else if (*angle == "degree") {
      degrees_ = true;
    } else {
      fail(ErrorKind::kMalformedXml, "unknown angle unit '" + *angle + "'",
           node.line);
    }
  }

  double to_radians(double value) const {
    return degrees_ ? value * kPi / 180.0 : value;
  }

  void read_body_children(const XmlNode& node, size_t body_index) {
    for (const XmlNode& child : node.children) {
      if (child.tag == "body") {
        read_body(child, body_index);
      } else if (child.tag == "joint") {
        if (body_index == 0) {
          fail(ErrorKind::kMalformedXml, "joints may not attach to the world",
               child.line);
        }
        read_joint(child, body_index);
      } else if (child.tag == "freejoint") {
        fail(ErrorKind::kUnsupportedJoint,
             "joint '" + named_or(child, "free") + "' has unsupported type 'free'",
             child.line);
      } else if (child.tag == "geom") {
        read_geom(child, body_index);
      }
      // Other elements (site, camera, light, inertial) carry no kinematic
      // information for this pipeline and are skipped.
    }
  }

  void read_body(const XmlNode& node, size_t parent_index) {
    BodyNode body;
    const std::string* name = node.attribute("name");
    body.name = name != nullptr
                    ? *name
                    : "unnamed_body_" + std::to_string(model_.bodies.size());
    if (!body_names_.insert(body.name).second) {
      fail(ErrorKind::kDuplicateName, "duplicate body name '" + body.name + "'",
           node.line);
    }
    body.parent = model_.bodies[parent_index].name;
    body.local_position = vec3_attr(node, "pos", Eigen::Vector3d::Zero());
    body.local_orientation = quat_attr(node);
    size_t index = model_.bodies.size();
    model_.bodies[parent_index].children.push_back(body.name);
    model_.bodies.push_back(std::move(body));
    read_body_children(node, index);
  }

  void read_joint(const XmlNode& node, size_t body_index) {
    JointDescriptor joint;
    const std::string* name = node.attribute("name");
    joint.name = name != nullptr
                     ? *name
                     : "unnamed_joint_" + std::to_string(model_.joints.size());
    if (!joint_names_.insert(joint.name).second) {
      fail(ErrorKind::kDuplicateName,
           "duplicate joint name '" + joint.name + "'", node.line);
    }
    joint.body = model_.bodies[body_index].name;

    const std::string* type = node.attribute("type");
    std::string kind = type != nullptr ? *type : "hinge";
    if (kind == "hinge") {
      joint.kind = JointKind::kHinge;
    } else if (kind == "slide") {
      joint.kind = JointKind::kSlide;
    } else {
      fail(ErrorKind::kUnsupportedJoint,
           "joint '" + joint.name + "' has unsupported type '" + kind + "'",
           node.line);
    }

    joint.anchor = vec3_attr(node, "pos", Eigen::Vector3d::Zero());
    joint.axis = vec3_attr(node, "axis", Eigen::Vector3d::UnitZ());
    if (joint.axis.norm() < 1e-12) {
      fail(ErrorKind::kMalformedXml,
           "joint '" + joint.name + "' has a zero-length axis", node.line);
    }
    joint.axis.normalize();

    if (node.attribute("range") == nullptr) {
      fail(ErrorKind::kMissingRange,
           "joint '" + joint.name + "' has no range", node.line);
    }
    std::vector<double> range = numbers_or_fail(node, "range", 2);
    bool angular = joint.kind == JointKind::kHinge;
    joint.limit_min = angular ? to_radians(range[0]) : range[0];
    joint.limit_max = angular ? to_radians(range[1]) : range[1];
    if (!(joint.limit_min < joint.limit_max)) {
      fail(ErrorKind::kDegenerateRange,
           "joint '" + joint.name + "' has an empty range [" +
               format_double(joint.limit_min) + ", " +
               format_double(joint.limit_max) + "]",
           node.line);
    }

    if (node.attribute("ref") != nullptr) {
      double ref = numbers_or_fail(node, "ref", 1)[0];
      joint.default_value = angular ? to_radians(ref) : ref;
    }

    model_.bodies[body_index].attached_joints.push_back(joint.name);
    model_.joints.push_back(std::move(joint));
  }

  void read_geom(const XmlNode& node, size_t body_index) {
    const std::string* type = node.attribute("type");
    std::string kind = type != nullptr ? *type : "sphere";
    GeomPrimitive geom;
    if (kind == "sphere") {
      geom.kind = GeomKind::kSphere;
      geom.size.x() = numbers_or_fail(node, "size", 1)[0];
    } else if (kind == "capsule" || kind == "cylinder") {
      geom.kind = kind == "capsule" ? GeomKind::kCapsule : GeomKind::kCylinder;
      if (node.attribute("fromto") != nullptr) {
        std::vector<double> ft = numbers_or_fail(node, "fromto", 6);
        Eigen::Vector3d a(ft[0], ft[1], ft[2]);
        Eigen::Vector3d b(ft[3], ft[4], ft[5]);
        Eigen::Vector3d d = b - a;
        if (d.norm() < 1e-12) {
          fail(ErrorKind::kMalformedXml, "fromto endpoints coincide", node.line);
        }
        geom.size.x() = numbers_or_fail(node, "size", 1)[0];
        geom.size.y() = 0.5 * d.norm();
        geom.pos = 0.5 * (a + b);
        geom.quat = Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(),
                                                       d.normalized());
        if (geom.size.x() <= 0.0) {
          fail(ErrorKind::kMalformedXml, "geom radius must be positive",
               node.line);
        }
        model_.bodies[body_index].geoms.push_back(std::move(geom));
        return;
      }
      std::vector<double> size = numbers_or_fail(node, "size", 2);
      geom.size.x() = size[0];
      geom.size.y() = size[1];
    } else if (kind == "box") {
      std::vector<double> size = numbers_or_fail(node, "size", 3);
      geom.kind = GeomKind::kBox;
      geom.size = {size[0], size[1], size[2]};
    } else {
      // Planes, meshes and other decorative geoms do not shape the
      // manipulable kinematics; drop them.
      return;
    }
    if (geom.size.x() <= 0.0) {
      fail(ErrorKind::kMalformedXml, "geom size must be positive", node.line);
    }
    geom.pos = vec3_attr(node, "pos", Eigen::Vector3d::Zero());
    geom.quat = quat_attr(node);
    model_.bodies[body_index].geoms.push_back(std::move(geom));
  }

  void read_keyframe(const XmlNode& node) {
    for (const XmlNode& key : node.children) {
      if (key.tag != "key" || key.attribute("qpos") == nullptr) continue;
      std::vector<double> qpos = parse_number_list(*key.attribute("qpos"));
      if (qpos.size() != model_.joints.size()) {
        fail(ErrorKind::kPoseLengthMismatch,
             "keyframe qpos has " + std::to_string(qpos.size()) +
                 " values for " + std::to_string(model_.joints.size()) +
                 " joints",
             key.line);
      }
      keyframe_pose_ = std::move(qpos);
      return;  // only the first keyframe seeds the default pose
    }
  }

  void resolve_default_pose() {
    model_.default_pose.resize(model_.joints.size());
    for (size_t i = 0; i < model_.joints.size(); ++i) {
      JointDescriptor& j = model_.joints[i];
      double value = keyframe_pose_.empty() ? j.default_value : keyframe_pose_[i];
      j.default_value = std::clamp(value, j.limit_min, j.limit_max);
      model_.default_pose[i] = j.default_value;
    }
  }

  static std::string named_or(const XmlNode& node, std::string_view fallback) {
    const std::string* name = node.attribute("name");
    return name != nullptr ? *name : std::string(fallback);
  }

  RobotModel model_;
  std::set<std::string, std::less<>> body_names_{"world"};
  std::set<std::string, std::less<>> joint_names_;
  std::vector<double> keyframe_pose_;
  bool degrees_ = true;  // MJCF defaults hinge units to degrees
};

bool is_axis_word(std::string_view token) {
  return token == "pitch" || token == "roll" || token == "yaw" ||
         token == "x" || token == "y" || token == "z";
}

bool is_numeric(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::string strip_trailing_digits(std::string_view text) {
  size_t end = text.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(0, end));
}

}  // namespace

RobotModel parse_mjcf(std::string_view xml_text, std::string_view fallback_name) {
  XmlNode root = parse_xml(xml_text);
  ModelBuilder builder(fallback_name);
  return builder.take(root);
}

std::string joint_group(const RobotModel& model, const JointDescriptor& joint) {
  std::string_view name = joint.name;
  size_t cut = name.rfind('_');
  if (cut != std::string_view::npos && cut > 0) {
    std::string_view tail = name.substr(cut + 1);
    if (is_numeric(tail) || is_axis_word(tail)) {
      return std::string(name.substr(0, cut));
    }
    return std::string(name);
  }
  std::string stem = strip_trailing_digits(name);
  if (stem.size() > 1) return stem;
  // Degenerate names like "j1" tell us nothing; group by the owning body.
  int body = model.body_index(joint.body);
  std::string body_stem =
      strip_trailing_digits(body >= 0 ? model.bodies[body].name : joint.body);
  return body_stem.empty() ? std::string(name) : body_stem;
}

MorphologySummary summarize_morphology(const RobotModel& model) {
  MorphologySummary summary;
  for (const JointDescriptor& joint : model.joints) {
    std::string group = joint_group(model, joint);
    summary.dof_per_group[group] += 1;
    summary.joints_per_group[group].push_back(joint.name);
  }

  std::string text = "model " + model.name + ": " +
                     std::to_string(model.joints.size()) + " dof in " +
                     std::to_string(summary.dof_per_group.size()) + " group" +
                     (summary.dof_per_group.size() == 1 ? "" : "s") + "\n";
  for (const auto& [group, joints] : summary.joints_per_group) {
    text += "- " + group + " (" + std::to_string(joints.size()) + "):";
    for (const std::string& name : joints) {
      const JointDescriptor& j = model.joint(name);
      text += " " + name + " " + to_string(j.kind) + " [" +
              format_double(j.limit_min) + ", " + format_double(j.limit_max) +
              "]";
    }
    text += "\n";
  }
  summary.text = std::move(text);
  return summary;
}

}  // namespace crisp::mjcf
