#pragma once

#include <utility>
#include <vector>

#include "uatrack/geometry.hpp"
#include "uatrack/types.hpp"

namespace uatrack {

// Rows are tracks, columns are detections. Rectangular is fine; entries must
// be finite.
using CostMatrix = Eigen::MatrixXd;

struct Matching {
  // (track index, detection index), sorted by track index.
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;

  double total_cost(const CostMatrix& c) const {
    double t = 0.0;
    for (const auto& [i, j] : pairs) t += c(i, j);
    return t;
  }
};

enum class CostMode {
  kNegIou3d,
  kCenterDistance,
};

// Minimum-total-cost maximum matching (Kuhn-Munkres, O(n^3)). Rectangular
// inputs are padded to square internally. Among equal-cost optima the
// lexicographically smallest pair list is returned.
// Throws std::invalid_argument on non-finite entries.
Matching solve_assignment(const CostMatrix& c);

// Dissolves pairs with cost above the threshold into the unmatched sets.
// Never creates pairs.
Matching gate_matching(const Matching& m, const CostMatrix& c,
                       double threshold);

// Pairwise association costs: negative 3D IoU or center distance.
CostMatrix build_cost(const std::vector<Box7>& tracks,
                      const std::vector<Box7>& dets, CostMode mode);

}  // namespace uatrack
