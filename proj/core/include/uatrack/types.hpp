#pragma once

#include <Eigen/Dense>

namespace uatrack {

using Vector7d = Eigen::Matrix<double, 7, 1>;
using Matrix7d = Eigen::Matrix<double, 7, 7>;
using Vector10d = Eigen::Matrix<double, 10, 1>;
using Matrix10d = Eigen::Matrix<double, 10, 10>;

// Canonical ordering of the 7 box components, used by every covariance,
// measurement vector and serialized record in this library.
enum BoxComponent : int {
  kCompX = 0,
  kCompY = 1,
  kCompZ = 2,
  kCompW = 3,
  kCompL = 4,
  kCompH = 5,
  kCompR = 6,
};

}  // namespace uatrack
