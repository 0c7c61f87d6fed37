#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mirroramp/calibration.hpp"
#include "mirroramp/dressed.hpp"
#include "mirroramp/sweep.hpp"

namespace mirroramp {

// Ordered section -> key -> raw value. Only keys in the schema are accepted.
using ConfigTable = std::map<std::string, std::map<std::string, std::string>>;

ConfigTable parse_config_text(const std::string& text, const std::string& origin = "<string>");
ConfigTable load_config_file(const std::filesystem::path& path);
// "section.key=value"
void apply_override(ConfigTable& table, const std::string& assignment);

struct RunConfig {
  // [model]
  TransmonParams params = TransmonParams::reference_device();
  LevelMode level_mode = LevelMode::Auto;
  RateScaling rate_scaling = RateScaling::Harmonic;
  std::vector<double> relaxation_list_hz;
  std::vector<double> dephasing_list_hz;
  // [drive]
  double pump_frequency_hz = 4.530e9;
  bool pump_on = true;
  int photon_order = 3;
  double probe_power_dbm = -161.0;
  double pump_power_dbm = -95.0;
  ReferencePlane reference_plane = ReferencePlane::Sample;
  // [calibration]
  std::optional<double> pump_line_attenuation_db;
  std::optional<double> probe_line_attenuation_db;
  // [sweep]
  double frequency_start_hz = 4.2e9;
  double frequency_stop_hz = 5.0e9;
  double frequency_step_hz = 1e6;
  std::vector<double> powers_dbm;  // explicit list, or built from start/stop/step
  double power_start_dbm = -125.0;
  double power_stop_dbm = -85.0;
  double power_step_dbm = 0.5;
  ReflectionMethod method = ReflectionMethod::LinearResponse;
  HarmonicOptions harmonics;
  CatalogOptions catalog;
  // [engine]
  CrossMode cross_mode = CrossMode::GeometricMean;
  ReflectionConvention convention = ReflectionConvention::InputOutput;
  int workers = 0;  // 0: MIRRORAMP_WORKERS or hardware concurrency
  // [output]
  std::filesystem::path directory = "out";
  std::string prefix = "run";
  bool preview = true;

  static RunConfig from_table(const ConfigTable& table);
  // Canonical INI text; excludes the worker count so outputs do not depend on it.
  std::string resolved_text() const;
  std::string hash() const;  // FNV-1a 64 of resolved_text, hex

  Model model() const;
  std::vector<double> frequency_grid_hz() const;
  std::vector<double> power_grid_dbm() const;
  int effective_workers() const;
  double pump_at_sample_dbm(double dbm) const;
  double probe_at_sample_dbm(double dbm) const;
};

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

// Inclusive uniform grid; the endpoint is kept when it lies within 1e-9 step of the last point.
std::vector<double> uniform_grid(double start, double stop, double step);

}  // namespace mirroramp
