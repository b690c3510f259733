#pragma once

#include <array>

#include "uatrack/types.hpp"

namespace uatrack {

// Wraps an angle to [-pi, pi).
double wrap_angle(double r);

// 7-DoF 3D bounding box: center (x, y, z), extents (w, l, h), yaw r about
// the vertical axis. l runs along the heading direction, w across it.
// Yaw is kept normalized to [-pi, pi).
struct Box7 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 1.0;
  double l = 1.0;
  double h = 1.0;
  double r = 0.0;

  Box7() = default;
  Box7(double x_, double y_, double z_, double w_, double l_, double h_,
       double r_)
      : x(x_), y(y_), z(z_), w(w_), l(l_), h(h_), r(wrap_angle(r_)) {}

  bool valid() const { return w > 0.0 && l > 0.0 && h > 0.0; }
  double volume() const { return w * l * h; }

  Vector7d to_vector() const {
    Vector7d v;
    v << x, y, z, w, l, h, r;
    return v;
  }
  static Box7 from_vector(const Vector7d& v) {
    return Box7(v[kCompX], v[kCompY], v[kCompZ], v[kCompW], v[kCompL],
                v[kCompH], v[kCompR]);
  }
};

// Euclidean distance between box centers.
double center_distance(const Box7& a, const Box7& b);

// Ground-plane corners of the box footprint, counter-clockwise.
std::array<Eigen::Vector2d, 4> footprint(const Box7& b);

// Intersection area of the two rotated footprint rectangles
// (Sutherland-Hodgman clipping).
double bev_intersection_area(const Box7& a, const Box7& b);

// IoU of the rotated ground-plane rectangles, in [0, 1].
double iou_bev(const Box7& a, const Box7& b);

// 3D IoU: BEV intersection area times vertical overlap over volume union.
double iou_3d(const Box7& a, const Box7& b);

}  // namespace uatrack
