#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uatrack/detection.hpp"
#include "uatrack/grouping.hpp"
#include "uatrack/metrics.hpp"
#include "uatrack/tracker.hpp"
#include "uatrack/uncertainty.hpp"

namespace uatrack {

// Parse failure with the offending file and line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line,
             const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One line of a KITTI tracking label/result file:
//   frame track_id type truncated occluded alpha bbox(4) h w l x y z
//   rotation_y [score]
// 17 whitespace-separated fields, 18 when the trailing score is present.
// Location is the bottom center of the box in the camera frame (x right,
// y down, z forward); rotation_y is yaw about the camera y axis.
struct KittiTrackRecord {
  int frame = 0;
  int track_id = -1;  // -1 for detections
  std::string type = "Car";
  double truncated = 0.0;
  int occluded = 0;
  double alpha = 0.0;
  std::array<double, 4> bbox{0.0, 0.0, 0.0, 0.0};
  double height = 0.0, width = 0.0, length = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;
  double rotation_y = 0.0;
  std::optional<double> score;
};

// Camera frame <-> canonical tracking frame (x forward, y left, z up,
// box center, yaw about z). The inverse lives in kitti_from_box.
Box7 box_from_kitti(const KittiTrackRecord& rec);
KittiTrackRecord kitti_from_box(int frame, int track_id,
                                const std::string& type, const Box7& box,
                                std::optional<double> score);

std::vector<KittiTrackRecord> read_kitti_records(const std::string& path);
void write_kitti_records(const std::string& path,
                         const std::vector<KittiTrackRecord>& records);

// Records grouped by frame index (frame f at position f), converted to the
// canonical frame. Unknown class strings pass through.
LabeledSequence read_kitti_labels(const std::string& path);
void write_kitti_labels(const std::string& path, const LabeledSequence& seq,
                        const std::string& default_type = "Car");

// Covariance-extended detection lines:
//   frame class score x y z w l h r [28 upper-triangle covariance values]
//   [sample_id]
// 10, 11, 38 or 39 fields; the 28 covariance values are the row-major upper
// triangle of the 7x7 matrix in canonical (x, y, z, w, l, h, r) order.
// A reconstructed covariance must be PSD (eigenvalues >= -1e-9).
DetectionSequence read_detections_u(const std::string& path);
void write_detections_u(const std::string& path,
                        const DetectionSequence& frames);

// Per-frame sample sets from an ensemble detection file (sample_id column
// required on every line).
std::vector<SampleSet> read_sample_sets(const std::string& path);
void write_sample_sets(const std::string& path,
                       const std::vector<SampleSet>& sets);

// Anchor + offset prediction lines for the internal uncertainty path:
//   frame class score x_a y_a z_a w_a l_a h_a r_a m[7] v[7]
// 24 fields per line.
struct OffsetRecord {
  int frame = 0;
  std::string label = "Car";
  double score = 0.0;
  AnchorBox anchor;
  OffsetPrediction prediction;
};
std::vector<OffsetRecord> read_offset_records(const std::string& path);
void write_offset_records(const std::string& path,
                          const std::vector<OffsetRecord>& records);

// Tracker output in KITTI tracking submission layout, ordered by
// (frame, id), %.6f floats.
void write_tracks(const std::string& path, const TrackedSequence& seq);
std::string format_tracks(const TrackedSequence& seq);

}  // namespace uatrack
