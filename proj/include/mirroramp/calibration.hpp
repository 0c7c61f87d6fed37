#pragma once

#include <numbers>
#include <optional>

namespace mirroramp {

inline constexpr double kHbar = 1.054571817e-34;  // J s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double hz_to_rad(double hz) { return kTwoPi * hz; }
inline constexpr double rad_to_hz(double rad) { return rad / kTwoPi; }

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Rabi rate of a coherent tone incident on the qubit: Omega = 2 sqrt(Gamma10 P / (hbar w)).
// All angular quantities in rad/s, power in W.
double power_to_rabi(double watts, double carrier_rad, double gamma10_rad);
double rabi_to_power(double rabi_rad, double carrier_rad, double gamma10_rad);

// Convenience: dBm at the sample plane straight to Rabi rate (rad/s).
double dbm_to_rabi(double dbm, double carrier_rad, double gamma10_rad);
double rabi_to_dbm(double rabi_rad, double carrier_rad, double gamma10_rad);

enum class ReferencePlane { Generator, Sample };

struct PowerSpec {
  double value_dbm = 0.0;
  ReferencePlane plane = ReferencePlane::Sample;
  std::optional<double> line_attenuation_db;
};

// Refers a power to the sample plane. Generator-plane powers need a line attenuation.
PowerSpec at_sample_power(const PowerSpec& spec);

}  // namespace mirroramp
