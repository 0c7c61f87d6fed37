#pragma once

#include <Eigen/Dense>
#include <complex>
#include <filesystem>
#include <span>
#include <vector>

namespace mirroramp {

struct ReflectionTrace {
  std::vector<double> frequency_hz;
  std::vector<std::complex<double>> r;
  double probe_power_dbm = -161.0;
};

struct FitReport {
  double omega10_hz = 0.0;
  double relaxation_hz = 0.0;   // Gamma10 / 2pi
  double decoherence_hz = 0.0;  // gamma10 / 2pi
  double dephasing_hz = 0.0;    // gamma10 - Gamma10 / 2
  double circle_radius = 0.0;
  double residual_norm = 0.0;
  double relative_residual = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (omega10, Gamma10, gamma10), Hz^2
};

// r = 1 - Gamma10 / (gamma10 - i (f - f10)), all in Hz.
std::vector<std::complex<double>> model_weak_reflection(std::span<const double> frequency_hz, double omega10_hz,
                                                        double relaxation_hz, double decoherence_hz);

// Algebraic circle, then nonlinear least squares on the phase about the centre, then a joint
// complex refinement. DegenerateCircle for radius < 1e-3, PoorFit above 5 % relative residual.
FitReport fit_circle(const ReflectionTrace& trace);

struct SaturationFit {
  double relaxation_hz = 0.0;
  double minimum_power_dbm = 0.0;
  double residual = 0.0;
};

// On-resonance |r| versus probe power; the forward model is the two-level single-tone solve with
// gamma10 = decoherence_ratio * Gamma10.
SaturationFit fit_power_saturation(std::span<const double> powers_dbm, std::span<const double> r_magnitude,
                                   double omega10_hz, double decoherence_ratio);

// Forward model used by the saturation fit.
double saturation_model(double power_dbm, double omega10_hz, double relaxation_hz, double decoherence_hz);

// Columns (freq_hz, re, im) or (freq_hz, mag_db, phase_deg).
ReflectionTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace mirroramp
