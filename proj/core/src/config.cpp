#include "uatrack/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace uatrack {

namespace {

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      value + "'");
  }
  return v;
}

long to_long(const std::string& key, const std::string& value) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      value + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" +
                    value + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value) {
  using Setter = std::function<void(PipelineConfig&, const std::string&,
                                    const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      // tracker
      {"tracker.association",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         if (v == "iou_3d") {
           c.tracker.association = CostMode::kNegIou3d;
         } else if (v == "center_distance") {
           c.tracker.association = CostMode::kCenterDistance;
         } else {
           throw ConfigError("config key '" + k +
                             "': expected iou_3d or center_distance");
         }
       }},
      {"tracker.gate_iou",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.gate_iou = to_double(k, v);
       }},
      {"tracker.gate_distance",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.gate_distance = to_double(k, v);
       }},
      {"tracker.max_age",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.max_age = static_cast<int>(to_long(k, v));
         if (c.tracker.max_age < 1) {
           throw ConfigError("config key '" + k + "': must be >= 1");
         }
       }},
      {"tracker.min_hits",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.min_hits = static_cast<int>(to_long(k, v));
         if (c.tracker.min_hits < 1) {
           throw ConfigError("config key '" + k + "': must be >= 1");
         }
       }},
      {"tracker.score_floor",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.score_floor = to_double(k, v);
       }},
      {"tracker.report_staleness",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.report_staleness = static_cast<int>(to_long(k, v));
       }},
      // noise
      {"noise.alpha",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.noise.alpha = to_double(k, v);
         if (c.tracker.noise.alpha < 0.0) {
           throw ConfigError("config key '" + k + "': must be >= 0");
         }
       }},
      {"noise.beta",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.noise.beta = to_double(k, v);
         if (c.tracker.noise.beta < 0.0) {
           throw ConfigError("config key '" + k + "': must be >= 0");
         }
       }},
      {"noise.dt",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.noise.dt = to_double(k, v);
       }},
      {"noise.q_observed",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         const double q = to_double(k, v);
         for (int i = 0; i < 7; ++i) c.tracker.noise.process_noise(i, i) = q;
       }},
      {"noise.q_velocity",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         const double q = to_double(k, v);
         for (int i = 7; i < 10; ++i) c.tracker.noise.process_noise(i, i) = q;
       }},
      {"noise.p0_observed",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         const double p = to_double(k, v);
         for (int i = 0; i < 7; ++i) c.tracker.noise.initial_cov(i, i) = p;
       }},
      {"noise.p0_velocity",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         const double p = to_double(k, v);
         for (int i = 7; i < 10; ++i) c.tracker.noise.initial_cov(i, i) = p;
       }},
      {"noise.use_sigma_for_init",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tracker.noise.use_sigma_for_init = to_bool(k, v);
       }},
      // eval
      {"eval.criterion",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         if (v == "iou_3d") {
           c.eval.criterion = MatchCriterion::kIou3d;
         } else if (v == "iou_bev") {
           c.eval.criterion = MatchCriterion::kIouBev;
         } else if (v == "center_distance") {
           c.eval.criterion = MatchCriterion::kCenterDistance;
         } else {
           throw ConfigError("config key '" + k +
                             "': expected iou_3d, iou_bev or center_distance");
         }
       }},
      {"eval.iou_threshold",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.eval.iou_threshold = to_double(k, v);
         if (c.eval.iou_threshold <= 0.0 || c.eval.iou_threshold > 1.0) {
           throw ConfigError("config key '" + k + "': must be in (0, 1]");
         }
       }},
      {"eval.distance_threshold",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.eval.distance_threshold = to_double(k, v);
         if (c.eval.distance_threshold <= 0.0) {
           throw ConfigError("config key '" + k + "': must be > 0");
         }
       }},
      {"eval.per_class",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.eval.per_class = to_bool(k, v);
       }},
      // grouping
      {"grouping.gate_distance",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.grouping.gate_distance = to_double(k, v);
         if (c.grouping.gate_distance <= 0.0) {
           throw ConfigError("config key '" + k + "': must be > 0");
         }
       }},
      {"grouping.min_support_fraction",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.grouping.min_support_fraction = to_double(k, v);
         if (c.grouping.min_support_fraction < 0.0 ||
             c.grouping.min_support_fraction > 1.0) {
           throw ConfigError("config key '" + k + "': must be in [0, 1]");
         }
       }},
      // sim
      {"sim.seed",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.seed = static_cast<std::uint64_t>(to_long(k, v));
       }},
      {"sim.n_objects",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.n_objects = static_cast<int>(to_long(k, v));
       }},
      {"sim.n_frames",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.n_frames = static_cast<int>(to_long(k, v));
       }},
      {"sim.x_min",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.x_min = to_double(k, v);
       }},
      {"sim.x_max",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.x_max = to_double(k, v);
       }},
      {"sim.y_min",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.y_min = to_double(k, v);
       }},
      {"sim.y_max",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.y_max = to_double(k, v);
       }},
      {"sim.speed_min",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.speed_min = to_double(k, v);
       }},
      {"sim.speed_max",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.speed_max = to_double(k, v);
       }},
      {"sim.accel_jitter_std",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.accel_jitter_std = to_double(k, v);
       }},
      {"sim.dropout_prob",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.dropout_prob = to_double(k, v);
         if (c.sim.dropout_prob < 0.0 || c.sim.dropout_prob > 1.0) {
           throw ConfigError("config key '" + k + "': must be in [0, 1]");
         }
       }},
      {"sim.clutter_rate",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.clutter_rate = to_double(k, v);
         if (c.sim.clutter_rate < 0.0) {
           throw ConfigError("config key '" + k + "': must be >= 0");
         }
       }},
      {"sim.ensemble_size",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.ensemble_size = static_cast<int>(to_long(k, v));
         if (c.sim.ensemble_size < 1) {
           throw ConfigError("config key '" + k + "': must be >= 1");
         }
       }},
      {"sim.high_noise_fraction",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.high_noise_fraction = to_double(k, v);
         if (c.sim.high_noise_fraction < 0.0 ||
             c.sim.high_noise_fraction > 1.0) {
           throw ConfigError("config key '" + k + "': must be in [0, 1]");
         }
       }},
      {"sim.pos_std_low",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.noise_low.pos_std = to_double(k, v);
       }},
      {"sim.pos_std_high",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.noise_high.pos_std = to_double(k, v);
       }},
      {"sim.size_std_low",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.noise_low.size_std = to_double(k, v);
       }},
      {"sim.size_std_high",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.noise_high.size_std = to_double(k, v);
       }},
      {"sim.yaw_std_low",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.noise_low.yaw_std = to_double(k, v);
       }},
      {"sim.yaw_std_high",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.noise_high.yaw_std = to_double(k, v);
       }},
      {"sim.noise_spread",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sim.noise_spread = to_double(k, v);
         if (c.sim.noise_spread < 0.0 || c.sim.noise_spread >= 1.0) {
           throw ConfigError("config key '" + k + "': must be in [0, 1)");
         }
       }},
      {"sim.label",
       [](PipelineConfig& c, const std::string&, const std::string& v) {
         c.sim.label = v;
       }},
  };

  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const PipelineConfig& cfg) {
  std::ostringstream os;
  char buf[128];
  const auto put = [&](const char* key, const char* fmt, auto value) {
    std::snprintf(buf, sizeof(buf), fmt, value);
    os << key << " = " << buf << "\n";
  };
  const auto put_bool = [&](const char* key, bool v) {
    os << key << " = " << (v ? "true" : "false") << "\n";
  };

  os << "# tracker\n";
  os << "tracker.association = "
     << (cfg.tracker.association == CostMode::kNegIou3d ? "iou_3d"
                                                        : "center_distance")
     << "\n";
  put("tracker.gate_iou", "%g", cfg.tracker.gate_iou);
  put("tracker.gate_distance", "%g", cfg.tracker.gate_distance);
  put("tracker.max_age", "%d", cfg.tracker.max_age);
  put("tracker.min_hits", "%d", cfg.tracker.min_hits);
  put("tracker.score_floor", "%g", cfg.tracker.score_floor);
  put("tracker.report_staleness", "%d", cfg.tracker.report_staleness);

  os << "\n# measurement noise\n";
  put("noise.alpha", "%g", cfg.tracker.noise.alpha);
  put("noise.beta", "%g", cfg.tracker.noise.beta);
  put("noise.dt", "%g", cfg.tracker.noise.dt);
  put("noise.q_observed", "%g", cfg.tracker.noise.process_noise(0, 0));
  put("noise.q_velocity", "%g", cfg.tracker.noise.process_noise(7, 7));
  put("noise.p0_observed", "%g", cfg.tracker.noise.initial_cov(0, 0));
  put("noise.p0_velocity", "%g", cfg.tracker.noise.initial_cov(7, 7));
  put_bool("noise.use_sigma_for_init", cfg.tracker.noise.use_sigma_for_init);

  os << "\n# evaluation\n";
  os << "eval.criterion = "
     << (cfg.eval.criterion == MatchCriterion::kIou3d        ? "iou_3d"
         : cfg.eval.criterion == MatchCriterion::kIouBev     ? "iou_bev"
                                                             : "center_distance")
     << "\n";
  put("eval.iou_threshold", "%g", cfg.eval.iou_threshold);
  put("eval.distance_threshold", "%g", cfg.eval.distance_threshold);
  put_bool("eval.per_class", cfg.eval.per_class);

  os << "\n# ensemble grouping\n";
  put("grouping.gate_distance", "%g", cfg.grouping.gate_distance);
  put("grouping.min_support_fraction", "%g", cfg.grouping.min_support_fraction);

  os << "\n# simulator\n";
  put("sim.seed", "%llu", static_cast<unsigned long long>(cfg.sim.seed));
  put("sim.n_objects", "%d", cfg.sim.n_objects);
  put("sim.n_frames", "%d", cfg.sim.n_frames);
  put("sim.x_min", "%g", cfg.sim.x_min);
  put("sim.x_max", "%g", cfg.sim.x_max);
  put("sim.y_min", "%g", cfg.sim.y_min);
  put("sim.y_max", "%g", cfg.sim.y_max);
  put("sim.speed_min", "%g", cfg.sim.speed_min);
  put("sim.speed_max", "%g", cfg.sim.speed_max);
  put("sim.accel_jitter_std", "%g", cfg.sim.accel_jitter_std);
  put("sim.dropout_prob", "%g", cfg.sim.dropout_prob);
  put("sim.clutter_rate", "%g", cfg.sim.clutter_rate);
  put("sim.ensemble_size", "%d", cfg.sim.ensemble_size);
  put("sim.high_noise_fraction", "%g", cfg.sim.high_noise_fraction);
  put("sim.pos_std_low", "%g", cfg.sim.noise_low.pos_std);
  put("sim.pos_std_high", "%g", cfg.sim.noise_high.pos_std);
  put("sim.size_std_low", "%g", cfg.sim.noise_low.size_std);
  put("sim.size_std_high", "%g", cfg.sim.noise_high.size_std);
  put("sim.yaw_std_low", "%g", cfg.sim.noise_low.yaw_std);
  put("sim.yaw_std_high", "%g", cfg.sim.noise_high.yaw_std);
  put("sim.noise_spread", "%g", cfg.sim.noise_spread);
  os << "sim.label = " << cfg.sim.label << "\n";
  return os.str();
}

}  // namespace uatrack
