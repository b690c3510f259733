#include "uatrack/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace uatrack {

namespace {

struct RunningGroup {
  BoxGroup group;
  Eigen::Vector3d center_sum = Eigen::Vector3d::Zero();

  Eigen::Vector3d mean_center() const {
    return center_sum / static_cast<double>(group.members.size());
  }
  void insert(int sample_index, const SampleBox& b) {
    group.members.push_back({sample_index, b});
    center_sum += Eigen::Vector3d(b.box.x, b.box.y, b.box.z);
  }
};

}  // namespace

std::vector<BoxGroup> assign_groups(const SampleSet& set,
                                    const GroupingConfig& cfg) {
  std::vector<RunningGroup> groups;

  for (int si = 0; si < set.sample_count(); ++si) {
    // Deterministic order: confident boxes seed first.
    std::vector<std::size_t> order(set.samples[si].size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return set.samples[si][a].score >
                              set.samples[si][b].score;
                     });

    for (std::size_t oi : order) {
      const SampleBox& b = set.samples[si][oi];
      const Eigen::Vector3d c(b.box.x, b.box.y, b.box.z);

      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        if (groups[gi].group.label != b.label) continue;
        const double dist = (groups[gi].mean_center() - c).norm();
        if (dist < best_dist) {
          best_dist = dist;
          best = static_cast<int>(gi);
        }
      }

      if (best >= 0 && best_dist <= cfg.gate_distance) {
        groups[static_cast<std::size_t>(best)].insert(si, b);
      } else {
        RunningGroup g;
        g.group.label = b.label;
        g.insert(si, b);
        groups.push_back(std::move(g));
      }
    }
  }

  std::vector<BoxGroup> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.push_back(std::move(g.group));
  return out;
}

void summarize_group(BoxGroup& g) {
  const int n = g.support();
  if (n == 0) return;

  Vector7d mean = Vector7d::Zero();
  double sin_sum = 0.0;
  double cos_sum = 0.0;
  for (const auto& m : g.members) {
    mean += m.box.box.to_vector();
    sin_sum += std::sin(m.box.box.r);
    cos_sum += std::cos(m.box.box.r);
  }
  mean /= static_cast<double>(n);
  mean[kCompR] = std::atan2(sin_sum / n, cos_sum / n);
  g.mean_box = Box7::from_vector(mean);

  if (n == 1) {
    g.covariance = Matrix7d::Zero();
    g.degenerate = true;
    return;
  }

  Matrix7d cov = Matrix7d::Zero();
  for (const auto& m : g.members) {
    Vector7d d = m.box.box.to_vector() - mean;
    d[kCompR] = wrap_angle(m.box.box.r - mean[kCompR]);
    cov += d * d.transpose();
  }
  g.covariance = cov / static_cast<double>(n - 1);
  g.degenerate = false;
}

double group_score(const BoxGroup& g, int ensemble_size) {
  if (g.members.empty() || ensemble_size < 1) return 0.0;
  double sum = 0.0;
  for (const auto& m : g.members) sum += m.box.score;
  const double mean = sum / static_cast<double>(g.members.size());
  return mean * static_cast<double>(g.support()) /
         static_cast<double>(ensemble_size);
}

std::vector<DetectionU> fuse_samples(const SampleSet& set,
                                     const GroupingConfig& cfg, int frame) {
  auto groups = assign_groups(set, cfg);
  const int s = std::max(1, set.sample_count());

  std::vector<DetectionU> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    if (g.support() < cfg.min_support_fraction * s) continue;
    summarize_group(g);
    DetectionU d;
    d.frame = frame;
    d.label = g.label;
    d.score = group_score(g, s);
    d.box = g.mean_box;
    d.covariance = g.covariance;
    d.has_covariance = true;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace uatrack
