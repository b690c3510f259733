#pragma once

#include <string>
#include <vector>

#include "uatrack/geometry.hpp"
#include "uatrack/tracker.hpp"

namespace uatrack {

// One ground-truth (or hypothesis) box with a persistent identity.
struct LabeledBox {
  int id = 0;
  std::string label = "Car";
  Box7 box;
  double score = 0.0;
};

using LabeledFrame = std::vector<LabeledBox>;
using LabeledSequence = std::vector<LabeledFrame>;

enum class MatchCriterion {
  kIou3d,            // match when iou_3d >= iou_threshold
  kIouBev,           // match when iou_bev >= iou_threshold
  kCenterDistance,   // match when center distance <= distance_threshold
};

struct EvalConfig {
  MatchCriterion criterion = MatchCriterion::kIou3d;
  double iou_threshold = 0.25;
  double distance_threshold = 2.0;
  bool per_class = true;  // only same-class boxes can match
};

// CLEAR-MOT counts for one sequence (or the pooled aggregate).
struct SequenceMetrics {
  std::string name;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long id_switches = 0;
  long fragmentations = 0;
  long gt_count = 0;       // total ground-truth boxes
  long trajectories = 0;   // ground-truth trajectories
  long mostly_tracked = 0;
  long partially_tracked = 0;
  long mostly_lost = 0;

  // 1 - (FN + FP + IDSW) / GT, in percent; may be negative.
  double mota() const;
  double precision() const;  // percent
  double recall() const;     // percent
  double f1() const;         // percent; 0 when precision + recall is 0
  double mt_percent() const;
  double pt_percent() const;
  double ml_percent() const;
};

struct MetricsReport {
  std::vector<SequenceMetrics> per_sequence;
  SequenceMetrics aggregate;
};

// Evaluates one sequence. Hypothesis frames must not extend past the
// ground-truth range (throws std::invalid_argument). Per frame, existing
// GT-to-hypothesis correspondences that still satisfy the criterion are
// kept; the rest are matched by Hungarian assignment on the criterion.
SequenceMetrics evaluate_sequence(const LabeledSequence& gt,
                                  const LabeledSequence& hyp,
                                  const EvalConfig& cfg,
                                  const std::string& name = "seq");

// Evaluates several sequences and pools the counts.
MetricsReport evaluate(const std::vector<LabeledSequence>& gt,
                       const std::vector<LabeledSequence>& hyp,
                       const EvalConfig& cfg);

LabeledSequence tracked_to_labeled(const TrackedSequence& seq);

// One sweep cell: the transform parameters and the scores they reached.
struct SweepRow {
  double alpha = 0.0;
  double beta = 0.0;
  double mota = 0.0;
  double f1 = 0.0;
  double ml = 0.0;
};

// Rows sorted by MOTA descending; ties break by F1 descending, then ML
// ascending, then (alpha, beta).
std::vector<SweepRow> rank_sweep(std::vector<SweepRow> rows);

// Aligned text table of ranked rows.
std::string format_sweep_table(const std::vector<SweepRow>& ranked);

// Line-oriented records: "alpha <a> beta <b> mota <m> f1 <f> ml <l>".
std::string sweep_records(const std::vector<SweepRow>& ranked);

// Aligned text report over per-sequence and aggregate metrics.
std::string format_report(const MetricsReport& report);

// Line-oriented records, one per sequence plus one aggregate.
std::string report_records(const MetricsReport& report);

}  // namespace uatrack
