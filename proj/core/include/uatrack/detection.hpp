#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uatrack/geometry.hpp"
#include "uatrack/types.hpp"

namespace uatrack {

// One detection as the tracker ingests it: a box with class, confidence and
// (optionally) a full 7x7 covariance over the canonical components.
struct DetectionU {
  int frame = 0;
  std::string label = "Car";
  double score = 0.0;
  Box7 box;
  Matrix7d covariance = Matrix7d::Zero();
  bool has_covariance = false;
  std::optional<int> sample_id;
};

using DetectionFrame = std::vector<DetectionU>;
using DetectionSequence = std::vector<DetectionFrame>;

}  // namespace uatrack
