#include "uatrack/tracker.hpp"

#include <algorithm>
#include <stdexcept>

namespace uatrack {

namespace {

// Large finite cost for pairs that must never match (different classes).
constexpr double kForbiddenCost = 1e9;

}  // namespace

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) {}

Matrix7d Tracker::measurement_noise(const DetectionU& d) const {
  if (cfg_.measurement_noise) return cfg_.measurement_noise(d);
  // Detections without covariance degrade to sigma = 0, i.e. alpha * I.
  return transform_uncertainty(
      d.has_covariance ? d.covariance : Matrix7d::Zero(), cfg_.noise.alpha,
      cfg_.noise.beta);
}

TrackedFrame Tracker::step(const DetectionFrame& detections,
                           int frame_index) {
  if (frame_index <= last_frame_) {
    throw std::invalid_argument("Tracker::step: out-of-order frame index");
  }
  last_frame_ = frame_index;

  for (Track& t : tracks_) {
    t.state = kf_predict(t.state, cfg_.noise.process_noise, cfg_.noise.dt);
    t.age += 1;
    t.time_since_update += 1;
  }

  std::vector<Box7> track_boxes;
  track_boxes.reserve(tracks_.size());
  for (const Track& t : tracks_) track_boxes.push_back(state_box(t.state));
  std::vector<Box7> det_boxes;
  det_boxes.reserve(detections.size());
  for (const DetectionU& d : detections) det_boxes.push_back(d.box);

  CostMatrix cost = build_cost(track_boxes, det_boxes, cfg_.association);
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      if (tracks_[i].label != detections[j].label) cost(i, j) = kForbiddenCost;
    }
  }

  const double gate = cfg_.association == CostMode::kNegIou3d
                          ? -cfg_.gate_iou
                          : cfg_.gate_distance;
  const Matching matching =
      gate_matching(solve_assignment(cost), cost, gate);

  for (const auto& [ti, di] : matching.pairs) {
    Track& t = tracks_[ti];
    const DetectionU& d = detections[di];
    t.state = kf_update(t.state, d.box, measurement_noise(d));
    t.hits += 1;
    t.time_since_update = 0;
    t.score = d.score;
  }

  for (int di : matching.unmatched_detections) {
    const DetectionU& d = detections[di];
    if (d.score < cfg_.score_floor) continue;
    Track t;
    t.id = next_id_++;
    t.state = init_track_state(d, cfg_.noise);
    t.label = d.label;
    t.score = d.score;
    tracks_.push_back(std::move(t));
  }

  std::erase_if(tracks_,
                [&](const Track& t) { return t.time_since_update > cfg_.max_age; });

  TrackedFrame out;
  for (const Track& t : tracks_) {
    if (t.time_since_update > cfg_.report_staleness) continue;
    if (t.hits >= cfg_.min_hits || t.age < cfg_.min_hits) {
      out.push_back({t.id, state_box(t.state), t.score, t.label});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TrackOutput& a, const TrackOutput& b) { return a.id < b.id; });
  return out;
}

TrackedSequence run_sequence(const DetectionSequence& frames,
                             const TrackerConfig& cfg) {
  Tracker tracker(cfg);
  TrackedSequence out;
  out.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    out.push_back(tracker.step(frames[t], static_cast<int>(t)));
  }
  return out;
}

}  // namespace uatrack
