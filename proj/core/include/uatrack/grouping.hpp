#pragma once

#include <string>
#include <vector>

#include "uatrack/detection.hpp"
#include "uatrack/geometry.hpp"
#include "uatrack/types.hpp"

namespace uatrack {

// One box out of one ensemble sample.
struct SampleBox {
  Box7 box;
  double score = 0.0;
  std::string label = "Car";
};

// Detections from S stochastic detector passes over the same frame. Sample
// box counts may differ: uncertain boxes appear in some samples only.
struct SampleSet {
  std::vector<std::vector<SampleBox>> samples;

  int sample_count() const { return static_cast<int>(samples.size()); }
  std::size_t total_boxes() const {
    std::size_t n = 0;
    for (const auto& s : samples) n += s.size();
    return n;
  }
};

struct GroupingConfig {
  double gate_distance = 1.0;
  // Groups with support below this fraction of the sample count are dropped
  // when fusing. 0 keeps everything.
  double min_support_fraction = 0.0;
};

struct GroupMember {
  int sample_index = 0;
  SampleBox box;
};

// Cross-sample box group with its summary statistics.
struct BoxGroup {
  std::vector<GroupMember> members;
  std::string label = "Car";
  Box7 mean_box;
  Matrix7d covariance = Matrix7d::Zero();
  // True for support-1 groups, whose covariance is the zero matrix.
  bool degenerate = true;

  int support() const { return static_cast<int>(members.size()); }
};

// Greedy cross-sample association. Samples are visited in index order and
// boxes within a sample by descending score; each box joins the same-class
// group whose running-average center is nearest if that distance is within
// the gate, otherwise it founds a new group. The running average updates
// after every insertion. Equidistant groups break toward the lower index.
// Returned groups carry members only; call summarize_group to fill in the
// statistics.
std::vector<BoxGroup> assign_groups(const SampleSet& set,
                                    const GroupingConfig& cfg);

// Fills mean_box and covariance. The mean is component-wise arithmetic with
// a circular mean for yaw; the covariance is the unbiased (n-1) sample
// covariance with yaw residuals wrapped to [-pi, pi). Support-1 groups get a
// zero covariance and stay flagged degenerate.
void summarize_group(BoxGroup& g);

// Confidence of the fused detection: mean member score scaled by
// support / ensemble size.
double group_score(const BoxGroup& g, int ensemble_size);

// assign + summarize + score, emitting one fused detection per surviving
// group.
std::vector<DetectionU> fuse_samples(const SampleSet& set,
                                     const GroupingConfig& cfg,
                                     int frame = 0);

}  // namespace uatrack
