#include "uatrack/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace uatrack {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t frame, std::uint64_t object,
                      std::uint64_t draw) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ frame);
  h = splitmix64(h ^ object);
  h = splitmix64(h ^ draw);
  return h;
}

// Stream ids; distinct per use so draw counters never collide.
enum Stream : std::uint64_t {
  kStreamInit = 1,
  kStreamMotion = 2,
  kStreamDetNoise = 3,
  kStreamDropout = 4,
  kStreamClutterCount = 5,
  kStreamClutter = 6,
  kStreamScore = 7,
  kStreamSampleNoise = 8,
  kStreamSampleDropout = 9,
  kStreamSampleScore = 10,
};

}  // namespace

double CounterRng::uniform(std::uint64_t stream, std::uint64_t frame,
                           std::uint64_t object, std::uint64_t draw) const {
  const std::uint64_t bits = mix_key(seed_, stream, frame, object, draw);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t frame,
                          std::uint64_t object, std::uint64_t draw) const {
  // Two uniforms per normal; counters are spaced so pairs never overlap.
  const double u1 = uniform(stream, frame, object, 2 * draw);
  const double u2 = uniform(stream, frame, object, 2 * draw + 1);
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * kPi * u2);
}

int CounterRng::poisson(double rate, std::uint64_t stream, std::uint64_t frame,
                        std::uint64_t object, std::uint64_t draw) const {
  if (rate <= 0.0) return 0;
  // Inversion by sequential search; fine for the small rates used here.
  const double u = uniform(stream, frame, object, draw);
  double p = std::exp(-rate);
  double cdf = p;
  int k = 0;
  while (u > cdf && k < 1000) {
    ++k;
    p *= rate / k;
    cdf += p;
  }
  return k;
}

namespace {

struct ObjectState {
  double x, y, vx, vy;
  double w, l, h;
  Matrix7d sigma = Matrix7d::Zero();
  Vector7d stds = Vector7d::Zero();
};

Box7 object_box(const ObjectState& o) {
  const double yaw = std::atan2(o.vy, o.vx);
  return Box7(o.x, o.y, 0.5 * o.h, o.w, o.l, o.h, yaw);
}

Box7 noisy_box(const Box7& gt, const Vector7d& stds, const CounterRng& rng,
               std::uint64_t stream, std::uint64_t frame,
               std::uint64_t object, std::uint64_t draw_base) {
  Vector7d v = gt.to_vector();
  for (int c = 0; c < 7; ++c) {
    v[c] += stds[c] * rng.normal(stream, frame, object, draw_base + c);
  }
  // Noisy sizes must stay positive.
  v[kCompW] = std::max(v[kCompW], 0.05);
  v[kCompL] = std::max(v[kCompL], 0.05);
  v[kCompH] = std::max(v[kCompH], 0.05);
  return Box7::from_vector(v);
}

std::vector<ObjectState> init_objects(const ScenarioConfig& cfg,
                                      const CounterRng& rng) {
  std::vector<ObjectState> objects(cfg.n_objects);
  for (int i = 0; i < cfg.n_objects; ++i) {
    ObjectState& o = objects[i];
    const auto u = [&](std::uint64_t d) {
      return rng.uniform(kStreamInit, 0, static_cast<std::uint64_t>(i), d);
    };
    o.x = cfg.x_min + u(0) * (cfg.x_max - cfg.x_min);
    o.y = cfg.y_min + u(1) * (cfg.y_max - cfg.y_min);
    const double speed = cfg.speed_min + u(2) * (cfg.speed_max - cfg.speed_min);
    const double heading = 2.0 * kPi * u(3) - kPi;
    o.vx = speed * std::cos(heading);
    o.vy = speed * std::sin(heading);
    o.w = 1.6 + 0.4 * u(4);
    o.l = 3.8 + 1.0 * u(5);
    o.h = 1.4 + 0.4 * u(6);

    const bool high = u(7) < cfg.high_noise_fraction;
    const NoiseProfile& prof = high ? cfg.noise_high : cfg.noise_low;
    const auto draw_std = [&](double base, std::uint64_t d) {
      const double lo = base * (1.0 - cfg.noise_spread);
      const double hi = base * (1.0 + cfg.noise_spread);
      return lo + u(8 + d) * (hi - lo);
    };
    o.stds[kCompX] = draw_std(prof.pos_std, 0);
    o.stds[kCompY] = draw_std(prof.pos_std, 1);
    o.stds[kCompZ] = draw_std(prof.pos_std, 2);
    o.stds[kCompW] = draw_std(prof.size_std, 3);
    o.stds[kCompL] = draw_std(prof.size_std, 4);
    o.stds[kCompH] = draw_std(prof.size_std, 5);
    o.stds[kCompR] = draw_std(prof.yaw_std, 6);
    for (int c = 0; c < 7; ++c) o.sigma(c, c) = o.stds[c] * o.stds[c];
  }
  return objects;
}

void advance(ObjectState& o, const ScenarioConfig& cfg, const CounterRng& rng,
             std::uint64_t frame, std::uint64_t object) {
  o.vx += cfg.accel_jitter_std * rng.normal(kStreamMotion, frame, object, 0);
  o.vy += cfg.accel_jitter_std * rng.normal(kStreamMotion, frame, object, 1);
  o.x += o.vx;
  o.y += o.vy;
  if (o.x < cfg.x_min) {
    o.x = 2.0 * cfg.x_min - o.x;
    o.vx = -o.vx;
  } else if (o.x > cfg.x_max) {
    o.x = 2.0 * cfg.x_max - o.x;
    o.vx = -o.vx;
  }
  if (o.y < cfg.y_min) {
    o.y = 2.0 * cfg.y_min - o.y;
    o.vy = -o.vy;
  } else if (o.y > cfg.y_max) {
    o.y = 2.0 * cfg.y_max - o.y;
    o.vy = -o.vy;
  }
}

DetectionU clutter_detection(const ScenarioConfig& cfg, const CounterRng& rng,
                             std::uint64_t frame, int k,
                             const Matrix7d& clutter_sigma) {
  // Clutter keys by a synthetic object id so counts can vary per frame.
  const std::uint64_t obj = 100000 + static_cast<std::uint64_t>(k);
  const auto u = [&](std::uint64_t d) {
    return rng.uniform(kStreamClutter, frame, obj, d);
  };
  DetectionU det;
  det.frame = static_cast<int>(frame);
  det.label = cfg.label;
  const double h = 1.4 + 0.4 * u(4);
  det.box = Box7(cfg.x_min + u(0) * (cfg.x_max - cfg.x_min),
                 cfg.y_min + u(1) * (cfg.y_max - cfg.y_min), 0.5 * h,
                 1.6 + 0.4 * u(2), 3.8 + 1.0 * u(3), h,
                 2.0 * kPi * u(5) - kPi);
  det.score = 0.1 + 0.5 * u(6);
  // Clutter reads as a maximally uncertain detection.
  det.covariance = clutter_sigma;
  det.has_covariance = true;
  return det;
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg) {
  if (!cfg.valid_bounds()) {
    throw std::invalid_argument("generate_scenario: degenerate bounds");
  }
  const CounterRng rng(cfg.seed);
  Scenario scn;
  scn.config = cfg;

  std::vector<ObjectState> objects = init_objects(cfg, rng);
  scn.sigma_true.reserve(objects.size());
  for (const ObjectState& o : objects) scn.sigma_true.push_back(o.sigma);

  Matrix7d clutter_sigma = Matrix7d::Zero();
  clutter_sigma(kCompX, kCompX) = cfg.noise_high.pos_std * cfg.noise_high.pos_std;
  clutter_sigma(kCompY, kCompY) = clutter_sigma(kCompX, kCompX);
  clutter_sigma(kCompZ, kCompZ) = clutter_sigma(kCompX, kCompX);
  clutter_sigma(kCompW, kCompW) = cfg.noise_high.size_std * cfg.noise_high.size_std;
  clutter_sigma(kCompL, kCompL) = clutter_sigma(kCompW, kCompW);
  clutter_sigma(kCompH, kCompH) = clutter_sigma(kCompW, kCompW);
  clutter_sigma(kCompR, kCompR) = cfg.noise_high.yaw_std * cfg.noise_high.yaw_std;

  scn.gt.resize(cfg.n_frames);
  scn.detections.resize(cfg.n_frames);

  for (int t = 0; t < cfg.n_frames; ++t) {
    const auto frame = static_cast<std::uint64_t>(t);
    LabeledFrame& gt_frame = scn.gt[t];
    DetectionFrame& det_frame = scn.detections[t];

    for (std::size_t i = 0; i < objects.size(); ++i) {
      const auto obj = static_cast<std::uint64_t>(i);
      if (t > 0) advance(objects[i], cfg, rng, frame, obj);

      const Box7 gt_box = object_box(objects[i]);
      gt_frame.push_back({static_cast<int>(i), cfg.label, gt_box, 1.0});

      if (rng.uniform(kStreamDropout, frame, obj, 0) < cfg.dropout_prob) {
        continue;
      }
      DetectionU det;
      det.frame = t;
      det.label = cfg.label;
      det.box = noisy_box(gt_box, objects[i].stds, rng, kStreamDetNoise,
                          frame, obj, 0);
      det.score = 0.85 + 0.14 * rng.uniform(kStreamScore, frame, obj, 0);
      det.covariance = objects[i].sigma;
      det.has_covariance = true;
      det_frame.push_back(std::move(det));
    }

    const int n_clutter =
        rng.poisson(cfg.clutter_rate, kStreamClutterCount, frame, 0, 0);
    for (int k = 0; k < n_clutter; ++k) {
      det_frame.push_back(clutter_detection(cfg, rng, frame, k, clutter_sigma));
    }
  }
  return scn;
}

std::vector<SampleSet> emit_samples(const Scenario& scn, int s) {
  if (s < 1) throw std::invalid_argument("emit_samples: need at least 1 sample");
  const ScenarioConfig& cfg = scn.config;
  const CounterRng rng(cfg.seed);

  std::vector<SampleSet> out(scn.gt.size());
  for (std::size_t t = 0; t < scn.gt.size(); ++t) {
    const auto frame = static_cast<std::uint64_t>(t);
    SampleSet& set = out[t];
    set.samples.resize(s);
    for (int si = 0; si < s; ++si) {
      for (std::size_t i = 0; i < scn.gt[t].size(); ++i) {
        const LabeledBox& gt = scn.gt[t][i];
        const auto obj = static_cast<std::uint64_t>(gt.id);
        const std::uint64_t draw_base = static_cast<std::uint64_t>(si) * 16;
        if (rng.uniform(kStreamSampleDropout, frame, obj, si) <
            cfg.dropout_prob) {
          continue;
        }
        Vector7d stds = scn.sigma_true[gt.id].diagonal().cwiseSqrt();
        SampleBox b;
        b.box = noisy_box(gt.box, stds, rng, kStreamSampleNoise, frame, obj,
                          draw_base);
        b.score =
            0.85 + 0.14 * rng.uniform(kStreamSampleScore, frame, obj, si);
        b.label = gt.label;
        set.samples[si].push_back(std::move(b));
      }
    }
  }
  return out;
}

}  // namespace uatrack
