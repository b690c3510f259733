#include "uatrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace uatrack {

namespace {

// Shortest-augmenting-path Kuhn-Munkres on a square matrix. Returns the
// column of each row plus the final dual potentials; matched edges are tight
// and c(i,j) - u[i] - v[j] >= 0 holds everywhere on exit.
void hungarian_square(const Eigen::MatrixXd& c, std::vector<int>& row_to_col,
                      std::vector<double>& u, std::vector<double>& v) {
  const int n = static_cast<int>(c.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  u.assign(n + 1, 0.0);
  v.assign(n + 1, 0.0);
  std::vector<int> p(n + 1, 0);  // p[j]: row matched to column j, 1-indexed
  std::vector<int> way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  row_to_col.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j]) row_to_col[p[j] - 1] = j - 1;
  }
}

// Rewires the optimal matching to the lexicographically smallest pair list
// among all optima. Optimal matchings are exactly the perfect matchings of
// the tight graph (zero reduced cost under the final potentials), so each
// row in order greedily takes its smallest tight column that still leaves
// the remaining rows matchable.
void canonicalize(const Eigen::MatrixXd& c, const std::vector<double>& u,
                  const std::vector<double>& v, std::vector<int>& row_to_col) {
  const int n = static_cast<int>(row_to_col.size());
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;

  std::vector<char> tight(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      tight[static_cast<std::size_t>(i) * n + j] =
          (c(i, j) - u[i + 1] - v[j + 1] <= tol);
    }
  }
  auto is_tight = [&](int i, int j) {
    return tight[static_cast<std::size_t>(i) * n + j] != 0;
  };

  std::vector<int> col_to_row(n, -1);
  for (int i = 0; i < n; ++i) col_to_row[row_to_col[i]] = i;

  for (int i = 0; i < n; ++i) {
    const int cur = row_to_col[i];
    for (int j = 0; j < cur; ++j) {
      if (!is_tight(i, j)) continue;
      const int displaced = col_to_row[j];
      if (displaced < i) continue;  // column already locked

      // Column `cur` frees up if row i moves to j; the displaced row must
      // re-match through tight edges of the still-unlocked rows.
      std::vector<char> visited(n, 0);
      visited[j] = 1;
      for (int k = 0; k < i; ++k) visited[row_to_col[k]] = 1;

      std::function<bool(int)> try_row = [&](int row) -> bool {
        for (int jc = 0; jc < n; ++jc) {
          if (visited[jc] || !is_tight(row, jc)) continue;
          visited[jc] = 1;
          const int owner = col_to_row[jc];
          if (jc == cur || (owner > i && try_row(owner))) {
            row_to_col[row] = jc;
            col_to_row[jc] = row;
            return true;
          }
        }
        return false;
      };

      if (try_row(displaced)) {
        row_to_col[i] = j;
        col_to_row[j] = i;
        break;
      }
    }
  }
}

}  // namespace

Matching solve_assignment(const CostMatrix& c) {
  const int rows = static_cast<int>(c.rows());
  const int cols = static_cast<int>(c.cols());
  if (!c.allFinite()) {
    throw std::invalid_argument("solve_assignment: non-finite cost entry");
  }

  Matching m;
  if (rows == 0 || cols == 0) {
    for (int i = 0; i < rows; ++i) m.unmatched_tracks.push_back(i);
    for (int j = 0; j < cols; ++j) m.unmatched_detections.push_back(j);
    return m;
  }

  // Pad to square; dummy entries all cost zero, so real-pair totals decide.
  const int n = std::max(rows, cols);
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(n, n);
  padded.topLeftCorner(rows, cols) = c;

  std::vector<int> row_to_col;
  std::vector<double> u, v;
  hungarian_square(padded, row_to_col, u, v);
  canonicalize(padded, u, v, row_to_col);

  std::vector<char> det_matched(cols, 0);
  for (int i = 0; i < rows; ++i) {
    const int j = row_to_col[i];
    if (j < cols) {
      m.pairs.emplace_back(i, j);
      det_matched[j] = 1;
    } else {
      m.unmatched_tracks.push_back(i);
    }
  }
  for (int j = 0; j < cols; ++j) {
    if (!det_matched[j]) m.unmatched_detections.push_back(j);
  }
  return m;
}

Matching gate_matching(const Matching& m, const CostMatrix& c,
                       double threshold) {
  Matching out;
  out.unmatched_tracks = m.unmatched_tracks;
  out.unmatched_detections = m.unmatched_detections;
  for (const auto& [i, j] : m.pairs) {
    if (c(i, j) > threshold) {
      out.unmatched_tracks.push_back(i);
      out.unmatched_detections.push_back(j);
    } else {
      out.pairs.emplace_back(i, j);
    }
  }
  std::sort(out.unmatched_tracks.begin(), out.unmatched_tracks.end());
  std::sort(out.unmatched_detections.begin(), out.unmatched_detections.end());
  return out;
}

CostMatrix build_cost(const std::vector<Box7>& tracks,
                      const std::vector<Box7>& dets, CostMode mode) {
  CostMatrix c(tracks.size(), dets.size());
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      c(i, j) = mode == CostMode::kNegIou3d
                    ? -iou_3d(tracks[i], dets[j])
                    : center_distance(tracks[i], dets[j]);
    }
  }
  return c;
}

}  // namespace uatrack
