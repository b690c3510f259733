#include "uatrack/uncertainty.hpp"

#include <cmath>
#include <stdexcept>

namespace uatrack {

namespace {

void check_inputs(const OffsetPrediction& p, const AnchorBox& a) {
  if (!a.valid()) throw std::invalid_argument("anchor has non-positive size");
  const double anchor_fields[] = {a.x_a, a.y_a, a.z_a, a.w_a,
                                  a.l_a, a.h_a, a.r_a};
  for (double f : anchor_fields) {
    if (!std::isfinite(f)) throw std::invalid_argument("non-finite anchor");
  }
  for (int i = 0; i < 7; ++i) {
    if (!std::isfinite(p.mean[i]) || !std::isfinite(p.var[i])) {
      throw std::invalid_argument("non-finite offset prediction");
    }
    if (p.var[i] < 0.0) {
      throw std::invalid_argument("negative offset variance");
    }
  }
}

}  // namespace

Box7 decode_box(const OffsetPrediction& p, const AnchorBox& a) {
  check_inputs(p, a);
  const double d = a.diagonal();
  const double x = p.mean[kCompX] * d + a.x_a;
  const double y = p.mean[kCompY] * d + a.y_a;
  const double w = std::exp(p.mean[kCompW]) * a.w_a;
  const double l = std::exp(p.mean[kCompL]) * a.l_a;
  const double h = std::exp(p.mean[kCompH]) * a.h_a;
  const double r = p.mean[kCompR] + a.r_a;
  const double z = p.mean[kCompZ] * a.h_a + a.z_a + 0.5 * a.h_a - 0.5 * h;
  return Box7(x, y, z, w, l, h, r);
}

double v_exp(double m, double v) {
  if (v < 0.0) throw std::invalid_argument("v_exp: negative variance");
  return std::exp(2.0 * m + 2.0 * v) - std::exp(2.0 * m + v);
}

double propagate_component_variance(const OffsetPrediction& p,
                                    const AnchorBox& a, BoxComponent c) {
  const double d = a.diagonal();
  switch (c) {
    case kCompX:
      return p.var[kCompX] * d * d;
    case kCompY:
      return p.var[kCompY] * d * d;
    case kCompZ:
      return p.var[kCompZ] * a.h_a * a.h_a;
    case kCompW:
      return v_exp(p.mean[kCompW], p.var[kCompW]) * a.w_a * a.w_a;
    case kCompL:
      return v_exp(p.mean[kCompL], p.var[kCompL]) * a.l_a * a.l_a;
    case kCompH:
      return v_exp(p.mean[kCompH], p.var[kCompH]) * a.h_a * a.h_a;
    case kCompR:
      return p.var[kCompR];
  }
  throw std::invalid_argument("unknown box component");
}

DecodedBoxU propagate_variance(const OffsetPrediction& p, const AnchorBox& a) {
  DecodedBoxU out;
  out.box = decode_box(p, a);
  for (int c = 0; c < 7; ++c) {
    out.var[c] = propagate_component_variance(p, a, static_cast<BoxComponent>(c));
  }
  return out;
}

Matrix7d variance_to_covariance(const DecodedBoxU& d) {
  Matrix7d cov = Matrix7d::Zero();
  cov.diagonal() = d.var;
  return cov;
}

}  // namespace uatrack
