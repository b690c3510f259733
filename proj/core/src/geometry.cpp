#include "uatrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace uatrack {

double wrap_angle(double r) {
  constexpr double kPi = 3.14159265358979323846;
  constexpr double kTwoPi = 2.0 * kPi;
  r = std::fmod(r + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r - kPi;
}

double center_distance(const Box7& a, const Box7& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::array<Eigen::Vector2d, 4> footprint(const Box7& b) {
  const double c = std::cos(b.r);
  const double s = std::sin(b.r);
  const double hl = 0.5 * b.l;
  const double hw = 0.5 * b.w;
  // Local corners (along-heading, across-heading), counter-clockwise.
  const double lx[4] = {hl, -hl, -hl, hl};
  const double ly[4] = {hw, hw, -hw, -hw};
  std::array<Eigen::Vector2d, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = Eigen::Vector2d(b.x + c * lx[i] - s * ly[i],
                             b.y + s * lx[i] + c * ly[i]);
  }
  return out;
}

namespace {

double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    acc += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(acc);
}

// Signed distance of p to the infinite line a->b; positive on the left
// (inside, for a counter-clockwise clip polygon).
double edge_side(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                 const Eigen::Vector2d& p) {
  return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

Eigen::Vector2d line_intersection(const Eigen::Vector2d& a,
                                  const Eigen::Vector2d& b,
                                  const Eigen::Vector2d& p,
                                  const Eigen::Vector2d& q) {
  const Eigen::Vector2d r = b - a;
  const Eigen::Vector2d s = q - p;
  const double denom = r.x() * s.y() - r.y() * s.x();
  const double t = ((p - a).x() * s.y() - (p - a).y() * s.x()) / denom;
  return a + t * r;
}

// Sutherland-Hodgman: clip `subject` against convex counter-clockwise `clip`.
std::vector<Eigen::Vector2d> clip_polygon(
    std::vector<Eigen::Vector2d> subject,
    const std::array<Eigen::Vector2d, 4>& clip) {
  for (int e = 0; e < 4 && !subject.empty(); ++e) {
    const Eigen::Vector2d& ca = clip[e];
    const Eigen::Vector2d& cb = clip[(e + 1) % 4];
    std::vector<Eigen::Vector2d> out;
    out.reserve(subject.size() + 4);
    const std::size_t n = subject.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d& cur = subject[i];
      const Eigen::Vector2d& prev = subject[(i + n - 1) % n];
      const double side_cur = edge_side(ca, cb, cur);
      const double side_prev = edge_side(ca, cb, prev);
      if (side_cur >= 0.0) {
        if (side_prev < 0.0) out.push_back(line_intersection(prev, cur, ca, cb));
        out.push_back(cur);
      } else if (side_prev >= 0.0) {
        out.push_back(line_intersection(prev, cur, ca, cb));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

double vertical_overlap(const Box7& a, const Box7& b) {
  const double lo = std::max(a.z - 0.5 * a.h, b.z - 0.5 * b.h);
  const double hi = std::min(a.z + 0.5 * a.h, b.z + 0.5 * b.h);
  return std::max(0.0, hi - lo);
}

}  // namespace

double bev_intersection_area(const Box7& a, const Box7& b) {
  const auto fa = footprint(a);
  const auto fb = footprint(b);
  std::vector<Eigen::Vector2d> subject(fa.begin(), fa.end());
  return polygon_area(clip_polygon(std::move(subject), fb));
}

double iou_bev(const Box7& a, const Box7& b) {
  const double inter = bev_intersection_area(a, b);
  const double uni = a.w * a.l + b.w * b.l - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_3d(const Box7& a, const Box7& b) {
  const double dz = vertical_overlap(a, b);
  if (dz <= 0.0) return 0.0;
  const double inter = bev_intersection_area(a, b) * dz;
  const double uni = a.volume() + b.volume() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace uatrack
