#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace mirroramp {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;

struct TransmonParams {
  double charging_energy_hz = 0.0;   // E_C / h
  double josephson_energy_hz = 0.0;  // E_J / h
  int levels = 6;
  std::vector<double> measured_transitions_hz;  // w10, w21, ... (Hz)
  double relaxation_hz = 0.0;                   // Gamma10 / 2pi
  double dephasing_hz = 0.0;                    // Gamma_phi / 2pi

  double decoherence_hz() const { return relaxation_hz / 2.0 + dephasing_hz; }
  void validate() const;

  // Device used throughout the examples and fixture configs.
  static TransmonParams reference_device();
};

enum class LevelMode {
  Auto,      // measured transitions, missing upper ones extrapolated by -E_C steps
  Measured,  // measured transitions only; needs levels-1 of them
  Analytic,  // sqrt(8 EJ EC) - EC ladder with anharmonicity -E_C
};

struct LevelStructure {
  std::vector<double> omega;  // absolute level frequencies, rad/s, omega[0] = 0

  int size() const { return static_cast<int>(omega.size()); }
  double transition(int n) const { return omega.at(n) - omega.at(n - 1); }  // w_{n,n-1}
};

LevelStructure derive_level_frequencies(const TransmonParams& params, LevelMode mode = LevelMode::Auto);

enum class RateScaling { Harmonic, Explicit };

struct RateTable {
  std::vector<double> relaxation;  // Gamma_n for n = 1..M-1 (index n-1), rad/s
  std::vector<double> dephasing;   // Gamma_phi,n for n = 1..M-1, rad/s

  int levels() const { return static_cast<int>(relaxation.size()) + 1; }
  double gamma(int n) const { return relaxation.at(n - 1); }
  double gamma_phi(int n) const { return dephasing.at(n - 1); }
};

// Harmonic: Gamma_n = n Gamma10 and Gamma_phi,n = n Gamma_phi. Explicit: per-level lists in Hz.
RateTable build_rate_table(const TransmonParams& params, RateScaling scaling = RateScaling::Harmonic,
                           std::span<const double> relaxation_hz = {},
                           std::span<const double> dephasing_hz = {});

struct PumpConfig {
  double frequency_rad = 0.0;
  double rabi_rad = 0.0;
  int photon_order = 1;
  void validate() const;
};

struct ProbeConfig {
  double frequency_rad = 0.0;
  double rabi_rad = 0.0;
  void validate() const;
  bool is_weak(double gamma10_rad) const { return rabi_rad < gamma10_rad / 10.0; }
};

// Projector-like basis operator |a><b|.
Operator basis_op(int dim, int a, int b);

// Static part of the rotating-frame Hamiltonian: diag(w_n - n w_pump).
Operator build_hamiltonian_static(const LevelStructure& levels, const PumpConfig& pump);
// Pump coupling: sqrt(n) Omega/2 on both off-diagonals.
Operator build_hamiltonian_drive(double pump_rabi_rad, int dim);
// Probe coupling split by rotation sense. first multiplies exp(-i delta t), second is its adjoint.
std::pair<Operator, Operator> build_probe_coupling(double probe_rabi_rad, int dim);

}  // namespace mirroramp
