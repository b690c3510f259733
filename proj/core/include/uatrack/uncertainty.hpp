#pragma once

#include "uatrack/geometry.hpp"
#include "uatrack/types.hpp"

namespace uatrack {

// Reference box that offset predictions are expressed against.
struct AnchorBox {
  double x_a = 0.0;
  double y_a = 0.0;
  double z_a = 0.0;
  double w_a = 1.0;
  double l_a = 1.0;
  double h_a = 1.0;
  double r_a = 0.0;

  bool valid() const { return w_a > 0.0 && l_a > 0.0 && h_a > 0.0; }
  // Anchor diagonal on the ground plane, the position-offset scale.
  double diagonal() const { return std::sqrt(l_a * l_a + w_a * w_a); }
};

// Per-anchor mean/variance offsets in canonical order (x, y, z, w, l, h, r).
// Position and z offsets are dimensionless multiples of the anchor scale,
// size offsets are log-ratios, the rotation offset is additive.
struct OffsetPrediction {
  Vector7d mean = Vector7d::Zero();
  Vector7d var = Vector7d::Zero();
};

// A decoded world-frame box together with per-component variances.
struct DecodedBoxU {
  Box7 box;
  Vector7d var = Vector7d::Zero();
};

// Decodes anchor-relative offsets into a world-frame box:
//   d = sqrt(l_a^2 + w_a^2)
//   x = m_x d + x_a,  y = m_y d + y_a
//   w = e^{m_w} w_a,  l = e^{m_l} l_a,  h = e^{m_h} h_a
//   r = m_r + r_a (wrapped)
//   z = m_z h_a + z_a + h_a/2 - h/2
// Throws std::invalid_argument on non-finite input or an invalid anchor.
Box7 decode_box(const OffsetPrediction& p, const AnchorBox& a);

// Variance of exp(X) for X ~ N(m, v): e^{2m+2v} - e^{2m+v}.
// Throws std::invalid_argument for v < 0.
double v_exp(double m, double v);

// Propagates per-component offset variances through decode_box:
//   var(x) = v_x d^2, var(y) = v_y d^2, var(z) = v_z h_a^2
//   var(w) = v_exp(m_w, v_w) w_a^2, and similarly for l, h
//   var(r) = v_r
double propagate_component_variance(const OffsetPrediction& p,
                                    const AnchorBox& a, BoxComponent c);
DecodedBoxU propagate_variance(const OffsetPrediction& p, const AnchorBox& a);

// Diagonal 7x7 covariance from per-component variances.
Matrix7d variance_to_covariance(const DecodedBoxU& d);

}  // namespace uatrack
