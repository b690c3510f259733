#pragma once

#include <stdexcept>
#include <string>

#include "uatrack/grouping.hpp"
#include "uatrack/metrics.hpp"
#include "uatrack/sim.hpp"
#include "uatrack/tracker.hpp"

namespace uatrack {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every tunable of the pipeline in one place, loadable from a "key = value"
// text file ('#' starts a comment). Unknown keys and malformed values raise
// ConfigError.
struct PipelineConfig {
  TrackerConfig tracker;
  EvalConfig eval;
  GroupingConfig grouping;
  ScenarioConfig sim;
};

// Applies one key/value pair; throws ConfigError for unknown keys or bad
// values.
void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value);

PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);

// All keys with their current values, in the file format.
std::string dump_config(const PipelineConfig& cfg);

}  // namespace uatrack
