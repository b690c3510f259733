#pragma once

#include "uatrack/detection.hpp"
#include "uatrack/geometry.hpp"
#include "uatrack/types.hpp"

namespace uatrack {

// Constant-velocity filter state. Layout: (x, y, z, r, w, l, h, vx, vy, vz),
// velocities in meters per frame.
struct KalmanState {
  Vector10d mean = Vector10d::Zero();
  Matrix10d cov = Matrix10d::Zero();
};

inline constexpr int kStateDim = 10;
inline constexpr int kMeasDim = 7;

// State indices.
enum StateIndex : int {
  kStX = 0,
  kStY = 1,
  kStZ = 2,
  kStR = 3,
  kStW = 4,
  kStL = 5,
  kStH = 6,
  kStVx = 7,
  kStVy = 8,
  kStVz = 9,
};

Matrix10d default_process_noise();
Matrix10d default_initial_cov();

// Measurement-noise transform parameters and filter constants.
struct NoiseConfig {
  double alpha = 0.6;
  double beta = 5.0;
  double dt = 1.0;
  Matrix10d process_noise = default_process_noise();
  Matrix10d initial_cov = default_initial_cov();
  bool use_sigma_for_init = false;
};

// Measurement noise from detector uncertainty: alpha * I + beta * sigma.
// With alpha = 1, beta = 0 this is the identity regardless of sigma.
// Throws std::invalid_argument if sigma is asymmetric or has an eigenvalue
// below -1e-9.
Matrix7d transform_uncertainty(const Matrix7d& sigma, double alpha,
                               double beta);

// Observation matrix mapping the state onto the canonical measurement
// ordering (x, y, z, w, l, h, r).
Eigen::Matrix<double, kMeasDim, kStateDim> observation_matrix();

// Canonical measurement vector of a box.
Vector7d box_measurement(const Box7& b);

// Box described by the observed part of the state.
Box7 state_box(const KalmanState& s);

// Constant-velocity prediction: positions advance by velocity * dt,
// covariance by F P F^T + Q.
KalmanState kf_predict(const KalmanState& s, const Matrix10d& q,
                       double dt = 1.0);

// Measurement update with noise sigma_hat. The yaw innovation is wrapped to
// [-pi, pi); if it still exceeds pi/2 in magnitude the track yaw is flipped
// by pi first. Covariance uses the Joseph form and is re-symmetrized.
// Throws std::runtime_error on a singular innovation covariance.
KalmanState kf_update(const KalmanState& s, const Box7& z,
                      const Matrix7d& sigma_hat);

// Fresh state from a detection: observed components copied, velocities zero,
// covariance from cfg.initial_cov. With cfg.use_sigma_for_init the observed
// block is replaced by transform_uncertainty(detection covariance).
KalmanState init_track_state(const DetectionU& d, const NoiseConfig& cfg);

}  // namespace uatrack
