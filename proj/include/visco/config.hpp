#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "visco/grid.hpp"

namespace visco {

// Experiment configuration, stored as JSON:
//
//   {
//     "grid":   {"n": 32, "box_scale": 1.5, "pad_factor": "3/2"},
//     "data":   {"lambda": 8, "m0": null, "target_product": 1e-3,
//                "E0_t_end": 0.5, "E0_dt": 0.01, "amplitude_scale": 1},
//     "run":    {"mu": 1, "dt": 1e-3, "t_end": 1, "sample_every": 10, "blowup_guard": 1e4},
//     "cone":   {"theta0": null, "axis": [0, 0, 1]},
//     "output": {"directory": "out", "checkpoint_every": 0}
//   }
//
// Exactly one of data.m0 and data.target_product is non-null. With
// target_product the profile mass m0 is calibrated so that
// theta0 (||u0||_H2 + ||E0||_H2) hits the target at amplitude_scale = 1.
// cone.theta0 = null means asin(1 / lambda). Every key must be present in
// serialized output; on input, missing keys take the defaults below and
// unknown keys are rejected.

struct GridConfig {
  int n = 32;
  double box_scale = 1.5;
  PadFactor pad{3, 2};
  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct DataConfig {
  double lambda = 8.0;
  std::optional<double> m0;
  std::optional<double> target_product = 1e-3;
  double E0_t_end = 0.5;
  double E0_dt = 0.01;
  double amplitude_scale = 1.0;
  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

struct RunConfig {
  double mu = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  int sample_every = 10;
  double blowup_guard = 1e4;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ConeConfig {
  std::optional<double> theta0;
  Vec3 axis{0.0, 0.0, 1.0};
  friend bool operator==(const ConeConfig&, const ConeConfig&) = default;
};

struct OutputConfig {
  std::string directory = "out";
  int checkpoint_every = 0;
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ExperimentConfig {
  GridConfig grid;
  DataConfig data;
  RunConfig run;
  ConeConfig cone;
  OutputConfig output;

  SpectralGrid make_grid() const;
  /// cone.theta0 if set, else asin(1 / lambda).
  double theta0() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ArgumentError naming the offending key.
void validate(const ExperimentConfig& cfg);

std::string to_json_string(const ExperimentConfig& cfg);
/// Parses and validates; throws ArgumentError on unknown keys, wrong types or invalid values.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

/// "3/2" -> {3, 2}; throws ArgumentError.
PadFactor parse_pad_factor(const std::string& text);
std::string format_pad_factor(const PadFactor& pad);

}  // namespace visco
