#include "uatrack/kalman.hpp"

#include <cmath>
#include <stdexcept>

namespace uatrack {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Floor for measurement variances so near-deterministic detections stay
// invertible in the update.
constexpr double kVarianceFloor = 1e-12;

Matrix10d transition_matrix(double dt) {
  Matrix10d f = Matrix10d::Identity();
  f(kStX, kStVx) = dt;
  f(kStY, kStVy) = dt;
  f(kStZ, kStVz) = dt;
  return f;
}

}  // namespace

Matrix10d default_process_noise() {
  Matrix10d q = Matrix10d::Zero();
  q(kStVx, kStVx) = 0.01;
  q(kStVy, kStVy) = 0.01;
  q(kStVz, kStVz) = 0.01;
  return q;
}

Matrix10d default_initial_cov() {
  Matrix10d p = Matrix10d::Identity() * 10.0;
  p(kStVx, kStVx) = 1000.0;
  p(kStVy, kStVy) = 1000.0;
  p(kStVz, kStVz) = 1000.0;
  return p;
}

Matrix7d transform_uncertainty(const Matrix7d& sigma, double alpha,
                               double beta) {
  if (alpha < 0.0 || beta < 0.0) {
    throw std::invalid_argument("transform_uncertainty: negative coefficient");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("transform_uncertainty: asymmetric sigma");
  }
  Eigen::SelfAdjointEigenSolver<Matrix7d> es(sigma,
                                             Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw std::invalid_argument("transform_uncertainty: sigma not PSD");
  }
  return alpha * Matrix7d::Identity() + beta * sigma;
}

Eigen::Matrix<double, kMeasDim, kStateDim> observation_matrix() {
  Eigen::Matrix<double, kMeasDim, kStateDim> h;
  h.setZero();
  h(kCompX, kStX) = 1.0;
  h(kCompY, kStY) = 1.0;
  h(kCompZ, kStZ) = 1.0;
  h(kCompW, kStW) = 1.0;
  h(kCompL, kStL) = 1.0;
  h(kCompH, kStH) = 1.0;
  h(kCompR, kStR) = 1.0;
  return h;
}

Vector7d box_measurement(const Box7& b) { return b.to_vector(); }

Box7 state_box(const KalmanState& s) {
  return Box7(s.mean[kStX], s.mean[kStY], s.mean[kStZ], s.mean[kStW],
              s.mean[kStL], s.mean[kStH], s.mean[kStR]);
}

KalmanState kf_predict(const KalmanState& s, const Matrix10d& q, double dt) {
  const Matrix10d f = transition_matrix(dt);
  KalmanState out;
  out.mean = f * s.mean;
  out.cov = f * s.cov * f.transpose() + q;
  return out;
}

KalmanState kf_update(const KalmanState& s, const Box7& z,
                      const Matrix7d& sigma_hat) {
  KalmanState prior = s;

  // Yaw residual wrapped; flip the track orientation when the measurement
  // points the opposite way.
  double residual_r = wrap_angle(z.r - prior.mean[kStR]);
  if (std::abs(residual_r) > 0.5 * kPi) {
    prior.mean[kStR] = wrap_angle(prior.mean[kStR] + kPi);
    residual_r = wrap_angle(z.r - prior.mean[kStR]);
  }

  const auto h = observation_matrix();
  Vector7d innovation = box_measurement(z) - h * prior.mean;
  innovation[kCompR] = residual_r;

  Matrix7d r = sigma_hat;
  for (int i = 0; i < kMeasDim; ++i) {
    r(i, i) = std::max(r(i, i), kVarianceFloor);
  }

  const Matrix7d innovation_cov = h * prior.cov * h.transpose() + r;
  Eigen::LDLT<Matrix7d> ldlt(innovation_cov);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0) {
    throw std::runtime_error("kf_update: singular innovation covariance");
  }

  const Eigen::Matrix<double, kStateDim, kMeasDim> gain =
      ldlt.solve(h * prior.cov).transpose();

  KalmanState out;
  out.mean = prior.mean + gain * innovation;
  out.mean[kStR] = wrap_angle(out.mean[kStR]);

  const Matrix10d ikh = Matrix10d::Identity() - gain * h;
  out.cov = ikh * prior.cov * ikh.transpose() + gain * r * gain.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  return out;
}

KalmanState init_track_state(const DetectionU& d, const NoiseConfig& cfg) {
  KalmanState s;
  s.mean[kStX] = d.box.x;
  s.mean[kStY] = d.box.y;
  s.mean[kStZ] = d.box.z;
  s.mean[kStR] = d.box.r;
  s.mean[kStW] = d.box.w;
  s.mean[kStL] = d.box.l;
  s.mean[kStH] = d.box.h;
  s.cov = cfg.initial_cov;
  if (cfg.use_sigma_for_init) {
    const Matrix7d sigma_hat =
        transform_uncertainty(d.covariance, cfg.alpha, cfg.beta);
    // Observed block in state ordering (r sits between z and w).
    constexpr int meas_of_state[kMeasDim] = {kCompX, kCompY, kCompZ, kCompR,
                                             kCompW, kCompL, kCompH};
    for (int i = 0; i < kMeasDim; ++i) {
      for (int j = 0; j < kMeasDim; ++j) {
        s.cov(i, j) = sigma_hat(meas_of_state[i], meas_of_state[j]);
      }
    }
  }
  return s;
}

}  // namespace uatrack
