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

#include "crisp/kinesim/render.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace crisp::kinesim {
namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr Rgb kBackground{235, 238, 240};
constexpr Rgb kLabelColor{20, 20, 20};
constexpr Rgb kAnchorColor{40, 40, 40};
constexpr Rgb kHighlight{235, 140, 50};

constexpr Rgb kPalette[] = {
    {100, 140, 190}, {150, 170, 120}, {170, 130, 160}, {190, 160, 110},
    {120, 170, 170}, {160, 140, 190}, {140, 160, 140}, {180, 130, 120},
};

// Pixel mapping for one view: projected coordinates to raster coordinates
// with +up on screen up.
struct Mapper {
  Eigen::Vector2d center;
  double half_size;
  int pixels;

  double scale() const { return pixels / (2.0 * half_size); }
  double px(double u) const { return (u - center.x() + half_size) * scale(); }
  double py(double v) const { return (half_size - (v - center.y())) * scale(); }
};

struct DrawItem {
  double depth = 0.0;
  int order = 0;  // stable tiebreak
  Rgb color;
  enum class Shape { kDisc, kStadium, kPolygon } shape = Shape::kDisc;
  Eigen::Vector2d a;  // disc center or stadium endpoint
  Eigen::Vector2d b;  // stadium endpoint
  double radius = 0.0;
  std::vector<Eigen::Vector2d> polygon;  // convex, counterclockwise
};

void fill_disc(RasterImage& image, const Eigen::Vector2d& c, double r,
               Rgb color) {
  int x0 = static_cast<int>(std::floor(c.x() - r));
  int x1 = static_cast<int>(std::ceil(c.x() + r));
  int y0 = static_cast<int>(std::floor(c.y() - r));
  int y1 = static_cast<int>(std::ceil(c.y() + r));
  double r2 = r * r;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double dx = x + 0.5 - c.x();
      double dy = y + 0.5 - c.y();
      if (dx * dx + dy * dy <= r2) image.set(x, y, color);
    }
  }
}

void fill_stadium(RasterImage& image, const Eigen::Vector2d& a,
                  const Eigen::Vector2d& b, double r, Rgb color) {
  Eigen::Vector2d d = b - a;
  double len2 = d.squaredNorm();
  int x0 = static_cast<int>(std::floor(std::min(a.x(), b.x()) - r));
  int x1 = static_cast<int>(std::ceil(std::max(a.x(), b.x()) + r));
  int y0 = static_cast<int>(std::floor(std::min(a.y(), b.y()) - r));
  int y1 = static_cast<int>(std::ceil(std::max(a.y(), b.y()) + r));
  double r2 = r * r;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      Eigen::Vector2d p(x + 0.5, y + 0.5);
      double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
      if ((p - (a + t * d)).squaredNorm() <= r2) image.set(x, y, color);
    }
  }
}

// Andrew's monotone chain; returns a counterclockwise hull in raster space.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& p, const auto& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& p, const auto& q) {
                          return p.x() == q.x() && p.y() == q.y();
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& p,
                  const Eigen::Vector2d& q) {
    return (p.x() - o.x()) * (q.y() - o.y()) -
           (p.y() - o.y()) * (q.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (size_t i = pts.size() - 1, lower = k + 1; i > 0; --i) {
    const auto& p = pts[i - 1];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

void fill_convex(RasterImage& image, const std::vector<Eigen::Vector2d>& hull,
                 Rgb color) {
  if (hull.size() < 3) {
    if (!hull.empty()) fill_disc(image, hull.front(), 1.0, color);
    return;
  }
  double min_x = hull[0].x(), max_x = hull[0].x();
  double min_y = hull[0].y(), max_y = hull[0].y();
  for (const auto& p : hull) {
    min_x = std::min(min_x, p.x());
    max_x = std::max(max_x, p.x());
    min_y = std::min(min_y, p.y());
    max_y = std::max(max_y, p.y());
  }
  for (int y = static_cast<int>(std::floor(min_y));
       y <= static_cast<int>(std::ceil(max_y)); ++y) {
    for (int x = static_cast<int>(std::floor(min_x));
         x <= static_cast<int>(std::ceil(max_x)); ++x) {
      Eigen::Vector2d p(x + 0.5, y + 0.5);
      bool inside = true;
      for (size_t i = 0; i < hull.size() && inside; ++i) {
        const Eigen::Vector2d& a = hull[i];
        const Eigen::Vector2d& b = hull[(i + 1) % hull.size()];
        double cross = (b.x() - a.x()) * (p.y() - a.y()) -
                       (b.y() - a.y()) * (p.x() - a.x());
        inside = cross >= 0.0;
      }
      if (inside) image.set(x, y, color);
    }
  }
}

double primitive_radius(const mjcf::GeomPrimitive& geom) {
  switch (geom.kind) {
    case mjcf::GeomKind::kSphere: return geom.size.x();
    case mjcf::GeomKind::kCapsule: return geom.size.y() + geom.size.x();
    case mjcf::GeomKind::kCylinder:
      return std::hypot(geom.size.y(), geom.size.x());
    case mjcf::GeomKind::kBox: return geom.size.norm();
  }
  return 0.0;
}

}  // namespace

CameraBasis camera_basis(const CameraSpec& camera) {
  double a = camera.azimuth_deg * kPi / 180.0;
  double e = camera.elevation_deg * kPi / 180.0;
  Eigen::Vector3d forward(-std::sin(a) * std::cos(e), std::cos(a) * std::cos(e),
                          -std::sin(e));
  Eigen::Vector3d world_up = Eigen::Vector3d::UnitZ();
  if (std::abs(forward.dot(world_up)) > 0.999) {
    world_up = Eigen::Vector3d::UnitY();
  }
  CameraBasis basis;
  basis.forward = forward.normalized();
  basis.right = basis.forward.cross(world_up).normalized();
  basis.up = basis.right.cross(basis.forward).normalized();
  return basis;
}

ViewFrame full_view_frame(const mjcf::RobotModel& model,
                          const CameraSpec& camera) {
  CameraBasis basis = camera_basis(camera);
  Eigen::Vector3d origin = root_origin(model);
  ViewFrame frame;
  frame.center = {basis.right.dot(origin), basis.up.dot(origin)};
  frame.half_size = model_reach(model) * 1.1;
  return frame;
}

ViewFrame zoom_view_frame(const mjcf::RobotModel& model, const Pose& pose,
                          const CameraSpec& camera, int body_index) {
  CameraBasis basis = camera_basis(camera);
  std::vector<Eigen::Isometry3d> world = forward_kinematics(model, pose);
  double min_u = 0.0, max_u = 0.0, min_v = 0.0, max_v = 0.0;
  bool first = true;
  auto grow = [&](double u, double v, double r) {
    if (first) {
      min_u = u - r;
      max_u = u + r;
      min_v = v - r;
      max_v = v + r;
      first = false;
      return;
    }
    min_u = std::min(min_u, u - r);
    max_u = std::max(max_u, u + r);
    min_v = std::min(min_v, v - r);
    max_v = std::max(max_v, v + r);
  };
  for (int b : subtree_bodies(model, body_index)) {
    Eigen::Vector3d body_origin = world[b].translation();
    grow(basis.right.dot(body_origin), basis.up.dot(body_origin), 0.0);
    for (const mjcf::GeomPrimitive& geom : model.bodies[b].geoms) {
      Eigen::Vector3d center = world[b] * geom.pos;
      grow(basis.right.dot(center), basis.up.dot(center),
           primitive_radius(geom));
    }
  }
  ViewFrame frame;
  frame.center = {0.5 * (min_u + max_u), 0.5 * (min_v + max_v)};
  double half = 0.5 * std::max(max_u - min_u, max_v - min_v);
  frame.half_size = std::max(half, 0.025) * 1.2;
  return frame;
}

RasterImage render_model(const mjcf::RobotModel& model, const Pose& pose,
                         const CameraSpec& camera, const ViewFrame& frame,
                         const RenderOptions& options) {
  CameraBasis basis = camera_basis(camera);
  std::vector<Eigen::Isometry3d> world = forward_kinematics(model, pose);
  Mapper map{frame.center, frame.half_size, options.pixels};

  std::vector<bool> highlighted(model.bodies.size(), false);
  if (options.highlight_body >= 0 &&
      options.highlight_body < static_cast<int>(model.bodies.size())) {
    for (int b : subtree_bodies(model, options.highlight_body)) {
      highlighted[b] = true;
    }
  }

  auto project = [&](const Eigen::Vector3d& p) {
    return Eigen::Vector2d(map.px(basis.right.dot(p)), map.py(basis.up.dot(p)));
  };

  std::vector<DrawItem> items;
  for (size_t b = 0; b < model.bodies.size(); ++b) {
    Rgb color = highlighted[b]
                    ? kHighlight
                    : kPalette[b % (sizeof(kPalette) / sizeof(kPalette[0]))];
    for (const mjcf::GeomPrimitive& geom : model.bodies[b].geoms) {
      DrawItem item;
      Eigen::Vector3d center = world[b] * geom.pos;
      item.depth = basis.forward.dot(center);
      item.order = static_cast<int>(items.size());
      item.color = color;
      double scale = map.scale();
      switch (geom.kind) {
        case mjcf::GeomKind::kSphere:
          item.shape = DrawItem::Shape::kDisc;
          item.a = project(center);
          item.radius = std::max(geom.size.x() * scale, 1.0);
          break;
        case mjcf::GeomKind::kCapsule:
        case mjcf::GeomKind::kCylinder: {
          Eigen::Vector3d axis =
              world[b].rotation() * (geom.quat * Eigen::Vector3d::UnitZ());
          Eigen::Vector3d half = axis * geom.size.y();
          item.shape = DrawItem::Shape::kStadium;
          item.a = project(center - half);
          item.b = project(center + half);
          item.radius = std::max(geom.size.x() * scale, 1.0);
          break;
        }
        case mjcf::GeomKind::kBox: {
          item.shape = DrawItem::Shape::kPolygon;
          std::vector<Eigen::Vector2d> corners;
          for (int sx : {-1, 1}) {
            for (int sy : {-1, 1}) {
              for (int sz : {-1, 1}) {
                Eigen::Vector3d local =
                    geom.pos + geom.quat * Eigen::Vector3d(sx * geom.size.x(),
                                                           sy * geom.size.y(),
                                                           sz * geom.size.z());
                corners.push_back(project(world[b] * local));
              }
            }
          }
          item.polygon = convex_hull(std::move(corners));
          break;
        }
      }
      items.push_back(std::move(item));
    }
  }

  std::sort(items.begin(), items.end(), [](const DrawItem& x, const DrawItem& y) {
    if (x.depth != y.depth) return x.depth > y.depth;  // far first
    return x.order < y.order;
  });

  RasterImage image(options.pixels, options.pixels, kBackground);
  for (const DrawItem& item : items) {
    switch (item.shape) {
      case DrawItem::Shape::kDisc:
        fill_disc(image, item.a, item.radius, item.color);
        break;
      case DrawItem::Shape::kStadium:
        fill_stadium(image, item.a, item.b, item.radius, item.color);
        break;
      case DrawItem::Shape::kPolygon:
        fill_convex(image, item.polygon, item.color);
        break;
    }
  }

  // Joint anchors help the critic see the articulation points.
  for (const mjcf::JointDescriptor& joint : model.joints) {
    int b = model.body_index(joint.body);
    if (b < 0) continue;
    fill_disc(image, project(world[b] * joint.anchor), 2.0, kAnchorColor);
  }

  if (!options.label.empty()) {
    draw_text(image, 4, 4, options.label, kLabelColor);
  }
  return image;
}

}  // namespace crisp::kinesim
