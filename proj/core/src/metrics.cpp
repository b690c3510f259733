#include "uatrack/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "uatrack/assignment.hpp"

namespace uatrack {

namespace {

constexpr double kForbiddenCost = 1e9;

// Association score under the criterion; pairs failing the threshold are
// not eligible at all.
bool eligible(const LabeledBox& g, const LabeledBox& h, const EvalConfig& cfg,
              double* cost) {
  if (cfg.per_class && g.label != h.label) return false;
  switch (cfg.criterion) {
    case MatchCriterion::kIou3d: {
      const double v = iou_3d(g.box, h.box);
      *cost = -v;
      return v >= cfg.iou_threshold;
    }
    case MatchCriterion::kIouBev: {
      const double v = iou_bev(g.box, h.box);
      *cost = -v;
      return v >= cfg.iou_threshold;
    }
    case MatchCriterion::kCenterDistance: {
      const double v = center_distance(g.box, h.box);
      *cost = v;
      return v <= cfg.distance_threshold;
    }
  }
  return false;
}

struct TrajectoryStats {
  long present = 0;
  long tracked = 0;
  bool ever_tracked = false;
  bool tracked_prev_presence = false;  // matched at the last frame it appeared
  long fragments = 0;
};

}  // namespace

double SequenceMetrics::mota() const {
  if (gt_count == 0) return 0.0;
  return 100.0 *
         (1.0 - static_cast<double>(fn + fp + id_switches) /
                    static_cast<double>(gt_count));
}

double SequenceMetrics::precision() const {
  const long denom = tp + fp;
  return denom == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / denom;
}

double SequenceMetrics::recall() const {
  const long denom = tp + fn;
  return denom == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / denom;
}

double SequenceMetrics::f1() const {
  const double p = precision();
  const double r = recall();
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double SequenceMetrics::mt_percent() const {
  return trajectories == 0
             ? 0.0
             : 100.0 * static_cast<double>(mostly_tracked) / trajectories;
}

double SequenceMetrics::pt_percent() const {
  return trajectories == 0
             ? 0.0
             : 100.0 * static_cast<double>(partially_tracked) / trajectories;
}

double SequenceMetrics::ml_percent() const {
  return trajectories == 0
             ? 0.0
             : 100.0 * static_cast<double>(mostly_lost) / trajectories;
}

SequenceMetrics evaluate_sequence(const LabeledSequence& gt,
                                  const LabeledSequence& hyp,
                                  const EvalConfig& cfg,
                                  const std::string& name) {
  if (hyp.size() > gt.size()) {
    throw std::invalid_argument(
        "evaluate_sequence: hypothesis extends past the ground-truth range");
  }

  SequenceMetrics m;
  m.name = name;

  std::map<int, int> last_match;  // gt id -> hyp id, persists across gaps
  std::map<int, TrajectoryStats> trajectories;

  for (std::size_t t = 0; t < gt.size(); ++t) {
    const LabeledFrame& gts = gt[t];
    static const LabeledFrame kEmpty;
    const LabeledFrame& hyps = t < hyp.size() ? hyp[t] : kEmpty;

    m.gt_count += static_cast<long>(gts.size());

    std::vector<int> g_open(gts.size());
    std::vector<int> h_open(hyps.size());
    for (std::size_t i = 0; i < gts.size(); ++i) g_open[i] = 1;
    for (std::size_t j = 0; j < hyps.size(); ++j) h_open[j] = 1;

    std::vector<std::pair<int, int>> matches;  // (gt idx, hyp idx)

    // Keep still-valid correspondences from earlier frames.
    for (std::size_t i = 0; i < gts.size(); ++i) {
      auto it = last_match.find(gts[i].id);
      if (it == last_match.end()) continue;
      for (std::size_t j = 0; j < hyps.size(); ++j) {
        if (!h_open[j] || hyps[j].id != it->second) continue;
        double cost = 0.0;
        if (eligible(gts[i], hyps[j], cfg, &cost)) {
          matches.emplace_back(static_cast<int>(i), static_cast<int>(j));
          g_open[i] = 0;
          h_open[j] = 0;
        }
        break;
      }
    }

    // Hungarian over the remainder.
    std::vector<int> g_idx, h_idx;
    for (std::size_t i = 0; i < gts.size(); ++i)
      if (g_open[i]) g_idx.push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < hyps.size(); ++j)
      if (h_open[j]) h_idx.push_back(static_cast<int>(j));

    if (!g_idx.empty() && !h_idx.empty()) {
      CostMatrix cost(g_idx.size(), h_idx.size());
      for (std::size_t a = 0; a < g_idx.size(); ++a) {
        for (std::size_t b = 0; b < h_idx.size(); ++b) {
          double cv = kForbiddenCost;
          if (!eligible(gts[g_idx[a]], hyps[h_idx[b]], cfg, &cv)) {
            cv = kForbiddenCost;
          }
          cost(a, b) = cv;
        }
      }
      const Matching matched =
          gate_matching(solve_assignment(cost), cost, kForbiddenCost * 0.5);
      for (const auto& [a, b] : matched.pairs) {
        matches.emplace_back(g_idx[a], h_idx[b]);
      }
    }

    std::set<int> matched_g, matched_h;
    for (const auto& [gi, hi] : matches) {
      matched_g.insert(gi);
      matched_h.insert(hi);
      const int gid = gts[gi].id;
      const int hid = hyps[hi].id;
      auto it = last_match.find(gid);
      if (it != last_match.end() && it->second != hid) m.id_switches += 1;
      last_match[gid] = hid;
    }

    m.tp += static_cast<long>(matches.size());
    m.fn += static_cast<long>(gts.size() - matches.size());
    m.fp += static_cast<long>(hyps.size() - matches.size());

    for (std::size_t i = 0; i < gts.size(); ++i) {
      TrajectoryStats& traj = trajectories[gts[i].id];
      traj.present += 1;
      const bool tracked = matched_g.count(static_cast<int>(i)) > 0;
      if (tracked) {
        traj.tracked += 1;
        if (traj.ever_tracked && !traj.tracked_prev_presence) {
          traj.fragments += 1;
        }
        traj.ever_tracked = true;
      }
      traj.tracked_prev_presence = tracked;
    }
  }

  m.trajectories = static_cast<long>(trajectories.size());
  for (const auto& [id, traj] : trajectories) {
    const double coverage =
        traj.present == 0
            ? 0.0
            : static_cast<double>(traj.tracked) / static_cast<double>(traj.present);
    if (coverage < 0.2) {
      m.mostly_lost += 1;
    } else if (coverage >= 0.8) {
      m.mostly_tracked += 1;
    } else {
      m.partially_tracked += 1;
    }
    m.fragmentations += traj.fragments;
  }
  return m;
}

namespace {

void pool_counts(SequenceMetrics& agg, const SequenceMetrics& s) {
  agg.tp += s.tp;
  agg.fp += s.fp;
  agg.fn += s.fn;
  agg.id_switches += s.id_switches;
  agg.fragmentations += s.fragmentations;
  agg.gt_count += s.gt_count;
  agg.trajectories += s.trajectories;
  agg.mostly_tracked += s.mostly_tracked;
  agg.partially_tracked += s.partially_tracked;
  agg.mostly_lost += s.mostly_lost;
}

}  // namespace

MetricsReport evaluate(const std::vector<LabeledSequence>& gt,
                       const std::vector<LabeledSequence>& hyp,
                       const EvalConfig& cfg) {
  if (gt.size() != hyp.size()) {
    throw std::invalid_argument("evaluate: sequence count mismatch");
  }
  MetricsReport report;
  report.aggregate.name = "aggregate";
  for (std::size_t s = 0; s < gt.size(); ++s) {
    SequenceMetrics m = evaluate_sequence(gt[s], hyp[s], cfg,
                                          "seq" + std::to_string(s));
    pool_counts(report.aggregate, m);
    report.per_sequence.push_back(std::move(m));
  }
  return report;
}

LabeledSequence tracked_to_labeled(const TrackedSequence& seq) {
  LabeledSequence out;
  out.reserve(seq.size());
  for (const TrackedFrame& frame : seq) {
    LabeledFrame lf;
    lf.reserve(frame.size());
    for (const TrackOutput& t : frame) {
      lf.push_back({t.id, t.label, t.box, t.score});
    }
    out.push_back(std::move(lf));
  }
  return out;
}

std::vector<SweepRow> rank_sweep(std::vector<SweepRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.mota != b.mota) return a.mota > b.mota;
    if (a.f1 != b.f1) return a.f1 > b.f1;
    if (a.ml != b.ml) return a.ml < b.ml;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.beta < b.beta;
  });
  return rows;
}

std::string format_sweep_table(const std::vector<SweepRow>& ranked) {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof(line), "%8s %8s %10s %10s %10s\n", "alpha",
                "beta", "MOTA%", "F1%", "ML%");
  os << line;
  for (const SweepRow& r : ranked) {
    std::snprintf(line, sizeof(line), "%8.3f %8.3f %10.2f %10.2f %10.2f\n",
                  r.alpha, r.beta, r.mota, r.f1, r.ml);
    os << line;
  }
  return os.str();
}

std::string sweep_records(const std::vector<SweepRow>& ranked) {
  std::ostringstream os;
  char line[160];
  for (const SweepRow& r : ranked) {
    std::snprintf(line, sizeof(line),
                  "alpha %.6f beta %.6f mota %.6f f1 %.6f ml %.6f\n", r.alpha,
                  r.beta, r.mota, r.f1, r.ml);
    os << line;
  }
  return os.str();
}

namespace {

std::string metrics_line(const SequenceMetrics& m) {
  char line[320];
  std::snprintf(line, sizeof(line),
                "seq %s gt %ld tp %ld fp %ld fn %ld idsw %ld frag %ld "
                "mota %.6f precision %.6f recall %.6f f1 %.6f "
                "mt %.6f pt %.6f ml %.6f\n",
                m.name.c_str(), m.gt_count, m.tp, m.fp, m.fn, m.id_switches,
                m.fragmentations, m.mota(), m.precision(), m.recall(), m.f1(),
                m.mt_percent(), m.pt_percent(), m.ml_percent());
  return line;
}

}  // namespace

std::string format_report(const MetricsReport& report) {
  std::ostringstream os;
  char line[200];
  std::snprintf(line, sizeof(line), "%-12s %8s %8s %8s %8s %8s %8s %8s %8s\n",
                "sequence", "GT", "TP", "FP", "FN", "IDSW", "MOTA%", "F1%",
                "ML%");
  os << line;
  auto row = [&](const SequenceMetrics& m) {
    std::snprintf(line, sizeof(line),
                  "%-12s %8ld %8ld %8ld %8ld %8ld %8.2f %8.2f %8.2f\n",
                  m.name.c_str(), m.gt_count, m.tp, m.fp, m.fn, m.id_switches,
                  m.mota(), m.f1(), m.ml_percent());
    os << line;
  };
  for (const SequenceMetrics& m : report.per_sequence) row(m);
  row(report.aggregate);
  return os.str();
}

std::string report_records(const MetricsReport& report) {
  std::string out;
  for (const SequenceMetrics& m : report.per_sequence) out += metrics_line(m);
  out += metrics_line(report.aggregate);
  return out;
}

}  // namespace uatrack
