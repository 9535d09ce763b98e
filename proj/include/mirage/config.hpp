#pragma once

// Run configuration, read from JSON. Every key has a default; unknown keys
// are rejected. Layout:
//
// {
//   "geometry":   {"a": 14.25, "e": 0.5},
//   "modes":      {"alpha_mode": {"order": 1, "parity": "odd", "radial_index": 5},
//                  "beta_mode":  {"order": 4, "parity": "even", "radial_index": 4},
//                  "terms": 50, "normalization_grid": 512, "cache_resolution": 1024},
//   "simulation": {"C": ..., "mu": ..., "alpha": ..., "beta": ..., "h": ..., "k": ...,
//                  "max_total_iters": ..., "max_runs": ..., "propulsion": "perpendicular",
//                  "seed": 42, "w0": 0, "use_cache": true},
//   "calibration": {"target_step": 0.12, "pilot_iters": 10000, "pilots": 4},
//   "presets":    [{"name": "uniform_depth", "alpha": 0.5, "beta": 0.5}, ...],
//   "stats":      {"bins": 90, "saturation": 220, "min_visits": 20},
//   "output":     {"dir": "out", "grid": 256, "mc": 0}
// }

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mirage/dynamics.hpp"
#include "mirage/geometry.hpp"
#include "mirage/mathieu.hpp"
#include "mirage/modes.hpp"

namespace mirage {

struct WeightPreset {
  std::string name;
  double alpha = 0.5;
  double beta = 0.5;
};

struct RunConfig {
  double a = 14.25;
  double e = 0.5;

  ModeSpec alpha_mode{1, Parity::odd, 5};
  ModeSpec beta_mode{4, Parity::even, 4};
  int terms = kDefaultTerms;
  int normalization_grid = 512;
  int cache_resolution = 1024;

  SimParams sim;
  CalibrationOptions calibration;

  std::vector<WeightPreset> presets = {
      {"uniform_depth", 0.5, 0.5},
      {"focus_impurity", 0.05, 0.5},
      {"minor_axis_impurity", 0.5, 0.1},
  };

  int bins = 90;
  double saturation = 220.0;
  double min_visits = 20.0;

  std::string out_dir = "out";
  int grid = 256;
  long mc = 0;

  EllipseGeometry<double> geometry() const { return {a, e}; }
  BuildOptions build_options() const;
  void validate() const;
};

nlohmann::ordered_json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

// Throws ConfigError (unknown key, bad type or value) or ParseError (bad JSON).
RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace mirage
