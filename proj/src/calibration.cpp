#include "mirroramp/calibration.hpp"

#include <cmath>

#include "mirroramp/errors.hpp"

namespace mirroramp {

double dbm_to_watts(double dbm) {
  require(std::isfinite(dbm), "power must be finite");
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
  require(watts > 0.0, "power must be positive to express in dBm");
  return 10.0 * std::log10(watts) + 30.0;
}

double power_to_rabi(double watts, double carrier_rad, double gamma10_rad) {
  require(watts >= 0.0, "negative power");
  require(carrier_rad > 0.0 && gamma10_rad >= 0.0, "carrier must be positive and Gamma10 non-negative");
  return 2.0 * std::sqrt(gamma10_rad * watts / (kHbar * carrier_rad));
}

double rabi_to_power(double rabi_rad, double carrier_rad, double gamma10_rad) {
  require(rabi_rad >= 0.0, "negative Rabi rate");
  require(carrier_rad > 0.0 && gamma10_rad > 0.0, "carrier and Gamma10 must be positive");
  return kHbar * carrier_rad * rabi_rad * rabi_rad / (4.0 * gamma10_rad);
}

double dbm_to_rabi(double dbm, double carrier_rad, double gamma10_rad) {
  return power_to_rabi(dbm_to_watts(dbm), carrier_rad, gamma10_rad);
}

double rabi_to_dbm(double rabi_rad, double carrier_rad, double gamma10_rad) {
  return watts_to_dbm(rabi_to_power(rabi_rad, carrier_rad, gamma10_rad));
}

PowerSpec at_sample_power(const PowerSpec& spec) {
  if (spec.plane == ReferencePlane::Sample) return spec;
  if (!spec.line_attenuation_db) fail(ErrorCode::InvalidArgument, "generator-plane power needs line_attenuation_db");
  return PowerSpec{spec.value_dbm - *spec.line_attenuation_db, ReferencePlane::Sample, spec.line_attenuation_db};
}

}  // namespace mirroramp
