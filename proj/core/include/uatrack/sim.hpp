#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uatrack/detection.hpp"
#include "uatrack/grouping.hpp"
#include "uatrack/metrics.hpp"
#include "uatrack/types.hpp"

namespace uatrack {

// Deterministic counter-based generator: every variate is a pure function of
// (seed, stream, frame, object, draw), so generation order and parallelism
// cannot change the output.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  // Uniform in [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t frame,
                 std::uint64_t object, std::uint64_t draw) const;
  // Standard normal (Box-Muller over two counter uniforms).
  double normal(std::uint64_t stream, std::uint64_t frame,
                std::uint64_t object, std::uint64_t draw) const;
  // Poisson via inversion on one uniform.
  int poisson(double rate, std::uint64_t stream, std::uint64_t frame,
              std::uint64_t object, std::uint64_t draw) const;

 private:
  std::uint64_t seed_;
};

// Component stds of one noise profile; per-object stds are drawn uniformly
// from [std * (1 - spread), std * (1 + spread)].
struct NoiseProfile {
  double pos_std = 0.1;
  double size_std = 0.05;
  double yaw_std = 0.02;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  int n_objects = 10;
  int n_frames = 100;
  double x_min = -40.0, x_max = 40.0;
  double y_min = -40.0, y_max = 40.0;
  double speed_min = 0.1, speed_max = 0.9;  // meters per frame
  double accel_jitter_std = 0.05;
  double dropout_prob = 0.1;
  double clutter_rate = 1.0;  // Poisson mean per frame
  int ensemble_size = 4;
  // Heteroscedastic split: this fraction of objects gets the high profile.
  double high_noise_fraction = 0.5;
  NoiseProfile noise_low{0.1, 0.05, 0.02};
  NoiseProfile noise_high{1.0, 0.15, 0.10};
  double noise_spread = 0.2;
  std::string label = "Car";

  bool valid_bounds() const { return x_max > x_min && y_max > y_min; }
};

// Ground truth plus fused detections with the generating covariance
// attached. Detection noise is drawn componentwise from N(0, sigma_true) on
// the canonical 7-vector, with yaw wrapped.
struct Scenario {
  ScenarioConfig config;
  LabeledSequence gt;            // persistent object ids per frame
  DetectionSequence detections;  // noisy + dropout + clutter, true sigma
  std::vector<Matrix7d> sigma_true;  // per object id (0-based)
};

// Deterministic given the config. Objects follow constant-velocity motion
// with acceleration jitter, reflecting off the x/y bounds.
// Throws std::invalid_argument on degenerate bounds.
Scenario generate_scenario(const ScenarioConfig& cfg);

// S independent noisy copies of each ground-truth box per frame, each
// independently subject to dropout, so per-sample box counts vary.
std::vector<SampleSet> emit_samples(const Scenario& scn, int s);

}  // namespace uatrack
