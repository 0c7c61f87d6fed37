#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>

#include "mirroramp/probe_response.hpp"

namespace mirroramp {

struct Axis {
  std::string name;
  std::string unit;
  std::vector<double> values;
  std::size_t size() const { return values.size(); }
};

inline constexpr double kFlaggedValue = std::numeric_limits<double>::quiet_NaN();

struct SweepResult {
  Axis axis1;                 // probe frequency, Hz
  std::optional<Axis> axis2;  // pump or probe power, dBm
  std::vector<Complex> values;  // axis1 fastest
  std::vector<ErrorCode> flags;
  std::map<std::string, std::string> metadata;

  std::size_t rows() const { return axis2 ? axis2->size() : 1; }
  std::size_t index(std::size_t i1, std::size_t i2 = 0) const { return i2 * axis1.size() + i1; }
  Complex at(std::size_t i1, std::size_t i2 = 0) const { return values.at(index(i1, i2)); }
  double magnitude(std::size_t i1, std::size_t i2 = 0) const { return std::abs(at(i1, i2)); }
  std::vector<double> row_magnitudes(std::size_t i2) const;
  std::size_t flagged_count() const;
};

enum class SweepKind { PumpPower, ProbePower };

struct SweepRequest {
  Model model;
  SweepKind kind = SweepKind::PumpPower;
  ReflectionMethod method = ReflectionMethod::LinearResponse;
  ReflectionConvention convention = ReflectionConvention::InputOutput;
  double pump_frequency_hz = 0.0;
  int photon_order = 1;
  std::vector<double> probe_frequencies_hz;
  // PumpPower: pump powers swept, probe_power_dbm fixed.
  // ProbePower: probe powers swept, pump_power_dbm fixed.
  std::vector<double> powers_dbm;
  double pump_power_dbm = -200.0;
  double probe_power_dbm = -161.0;
  bool pump_on = true;
  HarmonicOptions harmonics;
  int workers = 1;
};

// Cell failures are recorded in flags and never abort the sweep.
SweepResult reflection_sweep(const SweepRequest& request);

struct PeakInfo {
  double frequency_hz = 0.0;
  double peak = 0.0;
  double fwhm_hz = 0.0;
};

// Amplification peak of a 1-D trace; half height measured above |r| = 1.
PeakInfo analyze_peak(std::span<const double> frequency_hz, std::span<const double> magnitude);
PeakInfo analyze_peak(const SweepResult& trace, std::size_t row = 0);

}  // namespace mirroramp
