#pragma once

#include <functional>
#include <string>
#include <vector>

#include "uatrack/assignment.hpp"
#include "uatrack/detection.hpp"
#include "uatrack/kalman.hpp"

namespace uatrack {

struct Track {
  int id = 0;
  KalmanState state;
  int hits = 1;               // matched frames, counting birth
  int age = 1;                // frames since birth, counting birth
  int time_since_update = 0;  // 0 right after a match
  std::string label = "Car";
  double score = 0.0;
};

struct TrackerConfig {
  NoiseConfig noise;
  CostMode association = CostMode::kNegIou3d;
  // Matches below this IoU (kNegIou3d) or beyond this distance
  // (kCenterDistance) are dissolved.
  double gate_iou = 0.01;
  double gate_distance = 4.0;
  int max_age = 2;    // frames a track survives unmatched
  int min_hits = 3;   // matches before a track is reported
  double score_floor = 0.0;
  // Tracks unmatched for more than this many frames are withheld from the
  // output even while still alive.
  int report_staleness = 0;
  // Measurement noise per detection. Defaults to
  // transform_uncertainty(covariance, alpha, beta); tests and baselines may
  // substitute their own policy.
  std::function<Matrix7d(const DetectionU&)> measurement_noise;
};

struct TrackOutput {
  int id = 0;
  Box7 box;
  double score = 0.0;
  std::string label = "Car";
};

using TrackedFrame = std::vector<TrackOutput>;
using TrackedSequence = std::vector<TrackedFrame>;

// One uncertainty-aware constant-velocity tracker instance per sequence.
// Per frame: predict, associate (Hungarian + gate), update matched tracks
// with the per-detection measurement noise, birth unmatched detections,
// retire stale tracks.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg);

  // Processes one frame. Frame indices must be strictly increasing;
  // throws std::invalid_argument otherwise.
  TrackedFrame step(const DetectionFrame& detections, int frame_index);

  const std::vector<Track>& tracks() const { return tracks_; }

 private:
  Matrix7d measurement_noise(const DetectionU& d) const;

  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  int next_id_ = 1;
  int last_frame_ = -1;
};

// Runs a fresh tracker over a whole sequence; frame i of the result
// corresponds to frame i of the input.
TrackedSequence run_sequence(const DetectionSequence& frames,
                             const TrackerConfig& cfg);

}  // namespace uatrack
