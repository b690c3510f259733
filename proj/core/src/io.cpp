#include "uatrack/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uatrack {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& path, std::size_t line_no,
                    const std::string& tok) {
  double v = 0.0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(path, line_no, "expected a number, got '" + tok + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(path, line_no, "non-finite value '" + tok + "'");
  }
  return v;
}

int parse_int(const std::string& path, std::size_t line_no,
              const std::string& tok) {
  int v = 0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(path, line_no, "expected an integer, got '" + tok + "'");
  }
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void check_psd(const std::string& path, std::size_t line_no,
               const Matrix7d& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix7d> es(cov, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw ParseError(path, line_no, "covariance not PSD");
  }
}

template <typename T>
void append_by_frame(std::vector<std::vector<T>>& frames, int frame, T value,
                     const std::string& path, std::size_t line_no) {
  if (frame < 0) throw ParseError(path, line_no, "negative frame index");
  if (static_cast<std::size_t>(frame) >= frames.size()) {
    frames.resize(static_cast<std::size_t>(frame) + 1);
  }
  frames[static_cast<std::size_t>(frame)].push_back(std::move(value));
}

}  // namespace

Box7 box_from_kitti(const KittiTrackRecord& rec) {
  // Camera: x right, y down, z forward, location at the bottom center.
  // Canonical: x forward, y left, z up, location at the box center.
  return Box7(rec.z, -rec.x, -rec.y + 0.5 * rec.height, rec.width, rec.length,
              rec.height, -rec.rotation_y);
}

KittiTrackRecord kitti_from_box(int frame, int track_id,
                                const std::string& type, const Box7& box,
                                std::optional<double> score) {
  KittiTrackRecord rec;
  rec.frame = frame;
  rec.track_id = track_id;
  rec.type = type;
  rec.height = box.h;
  rec.width = box.w;
  rec.length = box.l;
  rec.x = -box.y;
  rec.y = -(box.z - 0.5 * box.h);
  rec.z = box.x;
  rec.rotation_y = wrap_angle(-box.r);
  rec.score = score;
  return rec;
}

std::vector<KittiTrackRecord> read_kitti_records(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<KittiTrackRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_fields(line);
    if (f.empty()) continue;
    if (f.size() != 17 && f.size() != 18) {
      throw ParseError(path, line_no,
                       "expected 17 or 18 fields, got " +
                           std::to_string(f.size()));
    }
    KittiTrackRecord rec;
    rec.frame = parse_int(path, line_no, f[0]);
    rec.track_id = parse_int(path, line_no, f[1]);
    rec.type = f[2];
    rec.truncated = parse_double(path, line_no, f[3]);
    rec.occluded = parse_int(path, line_no, f[4]);
    rec.alpha = parse_double(path, line_no, f[5]);
    for (int k = 0; k < 4; ++k) {
      rec.bbox[k] = parse_double(path, line_no, f[6 + k]);
    }
    rec.height = parse_double(path, line_no, f[10]);
    rec.width = parse_double(path, line_no, f[11]);
    rec.length = parse_double(path, line_no, f[12]);
    if (rec.height <= 0.0 || rec.width <= 0.0 || rec.length <= 0.0) {
      throw ParseError(path, line_no, "non-positive box dimensions");
    }
    rec.x = parse_double(path, line_no, f[13]);
    rec.y = parse_double(path, line_no, f[14]);
    rec.z = parse_double(path, line_no, f[15]);
    rec.rotation_y = parse_double(path, line_no, f[16]);
    if (f.size() == 18) rec.score = parse_double(path, line_no, f[17]);
    out.push_back(std::move(rec));
  }
  return out;
}

void write_kitti_records(const std::string& path,
                         const std::vector<KittiTrackRecord>& records) {
  std::ofstream out = open_output(path);
  char buf[512];
  for (const KittiTrackRecord& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%d %d %s %.6f %d %.6f %.6f %.6f %.6f %.6f "
                  "%.6f %.6f %.6f %.6f %.6f %.6f %.6f",
                  r.frame, r.track_id, r.type.c_str(), r.truncated, r.occluded,
                  r.alpha, r.bbox[0], r.bbox[1], r.bbox[2], r.bbox[3],
                  r.height, r.width, r.length, r.x, r.y, r.z, r.rotation_y);
    out << buf;
    if (r.score) {
      std::snprintf(buf, sizeof(buf), " %.6f", *r.score);
      out << buf;
    }
    out << '\n';
  }
}

LabeledSequence read_kitti_labels(const std::string& path) {
  LabeledSequence frames;
  for (const KittiTrackRecord& rec : read_kitti_records(path)) {
    LabeledBox box{rec.track_id, rec.type, box_from_kitti(rec),
                   rec.score.value_or(1.0)};
    append_by_frame(frames, rec.frame, std::move(box), path, 0);
  }
  return frames;
}

void write_kitti_labels(const std::string& path, const LabeledSequence& seq,
                        const std::string& default_type) {
  std::vector<KittiTrackRecord> records;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    for (const LabeledBox& b : seq[t]) {
      records.push_back(kitti_from_box(
          static_cast<int>(t), b.id,
          b.label.empty() ? default_type : b.label, b.box, b.score));
    }
  }
  write_kitti_records(path, records);
}

namespace {

Matrix7d covariance_from_upper(const std::vector<std::string>& f,
                               std::size_t offset, const std::string& path,
                               std::size_t line_no) {
  Matrix7d cov;
  std::size_t k = offset;
  for (int i = 0; i < 7; ++i) {
    for (int j = i; j < 7; ++j) {
      const double v = parse_double(path, line_no, f[k++]);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

void append_upper(std::string& line, const Matrix7d& cov) {
  char buf[40];
  for (int i = 0; i < 7; ++i) {
    for (int j = i; j < 7; ++j) {
      std::snprintf(buf, sizeof(buf), " %.9g", cov(i, j));
      line += buf;
    }
  }
}

DetectionU parse_detection_line(const std::vector<std::string>& f,
                                const std::string& path,
                                std::size_t line_no) {
  if (f.size() != 10 && f.size() != 11 && f.size() != 38 && f.size() != 39) {
    throw ParseError(path, line_no,
                     "expected 10, 11, 38 or 39 fields, got " +
                         std::to_string(f.size()));
  }
  DetectionU d;
  d.frame = parse_int(path, line_no, f[0]);
  d.label = f[1];
  d.score = parse_double(path, line_no, f[2]);
  Vector7d v;
  for (int c = 0; c < 7; ++c) v[c] = parse_double(path, line_no, f[3 + c]);
  if (v[kCompW] <= 0.0 || v[kCompL] <= 0.0 || v[kCompH] <= 0.0) {
    throw ParseError(path, line_no, "non-positive box dimensions");
  }
  d.box = Box7::from_vector(v);
  if (f.size() >= 38) {
    d.covariance = covariance_from_upper(f, 10, path, line_no);
    check_psd(path, line_no, d.covariance);
    d.has_covariance = true;
  }
  if (f.size() == 11 || f.size() == 39) {
    d.sample_id = parse_int(path, line_no, f.back());
    if (*d.sample_id < 0) {
      throw ParseError(path, line_no, "negative sample id");
    }
  }
  return d;
}

std::string format_detection_line(const DetectionU& d) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%d %s %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f", d.frame,
                d.label.c_str(), d.score, d.box.x, d.box.y, d.box.z, d.box.w,
                d.box.l, d.box.h, d.box.r);
  std::string line = buf;
  if (d.has_covariance) append_upper(line, d.covariance);
  if (d.sample_id) {
    std::snprintf(buf, sizeof(buf), " %d", *d.sample_id);
    line += buf;
  }
  return line;
}

}  // namespace

DetectionSequence read_detections_u(const std::string& path) {
  std::ifstream in = open_input(path);
  DetectionSequence frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_fields(line);
    if (f.empty()) continue;
    DetectionU d = parse_detection_line(f, path, line_no);
    append_by_frame(frames, d.frame, std::move(d), path, line_no);
  }
  return frames;
}

void write_detections_u(const std::string& path,
                        const DetectionSequence& frames) {
  std::ofstream out = open_output(path);
  for (const DetectionFrame& frame : frames) {
    for (const DetectionU& d : frame) {
      out << format_detection_line(d) << '\n';
    }
  }
}

std::vector<SampleSet> read_sample_sets(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<DetectionU>> frames;
  std::string line;
  std::size_t line_no = 0;
  int max_sample = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_fields(line);
    if (f.empty()) continue;
    DetectionU d = parse_detection_line(f, path, line_no);
    if (!d.sample_id) {
      throw ParseError(path, line_no, "missing sample id on ensemble line");
    }
    max_sample = std::max(max_sample, *d.sample_id);
    append_by_frame(frames, d.frame, std::move(d), path, line_no);
  }

  std::vector<SampleSet> out(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    out[t].samples.resize(static_cast<std::size_t>(max_sample) + 1);
    for (const DetectionU& d : frames[t]) {
      out[t].samples[static_cast<std::size_t>(*d.sample_id)].push_back(
          {d.box, d.score, d.label});
    }
  }
  return out;
}

void write_sample_sets(const std::string& path,
                       const std::vector<SampleSet>& sets) {
  std::ofstream out = open_output(path);
  for (std::size_t t = 0; t < sets.size(); ++t) {
    for (std::size_t si = 0; si < sets[t].samples.size(); ++si) {
      for (const SampleBox& b : sets[t].samples[si]) {
        DetectionU d;
        d.frame = static_cast<int>(t);
        d.label = b.label;
        d.score = b.score;
        d.box = b.box;
        d.sample_id = static_cast<int>(si);
        out << format_detection_line(d) << '\n';
      }
    }
  }
}

std::vector<OffsetRecord> read_offset_records(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<OffsetRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_fields(line);
    if (f.empty()) continue;
    if (f.size() != 24) {
      throw ParseError(path, line_no,
                       "expected 24 fields, got " + std::to_string(f.size()));
    }
    OffsetRecord rec;
    rec.frame = parse_int(path, line_no, f[0]);
    rec.label = f[1];
    rec.score = parse_double(path, line_no, f[2]);
    rec.anchor.x_a = parse_double(path, line_no, f[3]);
    rec.anchor.y_a = parse_double(path, line_no, f[4]);
    rec.anchor.z_a = parse_double(path, line_no, f[5]);
    rec.anchor.w_a = parse_double(path, line_no, f[6]);
    rec.anchor.l_a = parse_double(path, line_no, f[7]);
    rec.anchor.h_a = parse_double(path, line_no, f[8]);
    rec.anchor.r_a = parse_double(path, line_no, f[9]);
    if (!rec.anchor.valid()) {
      throw ParseError(path, line_no, "anchor has non-positive size");
    }
    for (int c = 0; c < 7; ++c) {
      rec.prediction.mean[c] = parse_double(path, line_no, f[10 + c]);
    }
    for (int c = 0; c < 7; ++c) {
      rec.prediction.var[c] = parse_double(path, line_no, f[17 + c]);
      if (rec.prediction.var[c] < 0.0) {
        throw ParseError(path, line_no, "negative offset variance");
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_offset_records(const std::string& path,
                          const std::vector<OffsetRecord>& records) {
  std::ofstream out = open_output(path);
  char buf[64];
  for (const OffsetRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%d %s %.6f", r.frame, r.label.c_str(),
                  r.score);
    out << buf;
    const double anchor_fields[7] = {r.anchor.x_a, r.anchor.y_a, r.anchor.z_a,
                                     r.anchor.w_a, r.anchor.l_a, r.anchor.h_a,
                                     r.anchor.r_a};
    for (double v : anchor_fields) {
      std::snprintf(buf, sizeof(buf), " %.6f", v);
      out << buf;
    }
    for (int c = 0; c < 7; ++c) {
      std::snprintf(buf, sizeof(buf), " %.6f", r.prediction.mean[c]);
      out << buf;
    }
    for (int c = 0; c < 7; ++c) {
      std::snprintf(buf, sizeof(buf), " %.9g", r.prediction.var[c]);
      out << buf;
    }
    out << '\n';
  }
}

std::string format_tracks(const TrackedSequence& seq) {
  std::string out;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    TrackedFrame frame = seq[t];
    std::sort(frame.begin(), frame.end(),
              [](const TrackOutput& a, const TrackOutput& b) {
                return a.id < b.id;
              });
    for (const TrackOutput& tr : frame) {
      const KittiTrackRecord rec = kitti_from_box(
          static_cast<int>(t), tr.id, tr.label, tr.box, tr.score);
      char buf[512];
      std::snprintf(buf, sizeof(buf),
                    "%d %d %s %.6f %d %.6f %.6f %.6f %.6f %.6f "
                    "%.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f\n",
                    rec.frame, rec.track_id, rec.type.c_str(), rec.truncated,
                    rec.occluded, rec.alpha, rec.bbox[0], rec.bbox[1],
                    rec.bbox[2], rec.bbox[3], rec.height, rec.width,
                    rec.length, rec.x, rec.y, rec.z, rec.rotation_y,
                    rec.score.value_or(0.0));
      out += buf;
    }
  }
  return out;
}

void write_tracks(const std::string& path, const TrackedSequence& seq) {
  std::ofstream out = open_output(path);
  out << format_tracks(seq);
}

}  // namespace uatrack
