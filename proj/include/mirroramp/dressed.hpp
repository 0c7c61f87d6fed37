#pragma once

#include <limits>
#include <utility>

#include "mirroramp/probe_response.hpp"

namespace mirroramp {

// Eigenpairs of H_a + H_d in the pump frame. Energies ascend. The eigenvector with the largest
// weight on the top (truncation) level is left unlabeled; the others are D1..D_{M-1} in ascending
// energy order.
struct DressedSpectrum {
  Eigen::VectorXd energies;  // rad/s, ascending
  Eigen::MatrixXcd vectors;  // columns match energies
  PumpConfig pump;
  int truncation_index = -1;  // column of the unlabeled state
  std::vector<int> label_to_index;  // label_to_index[l - 1] for l = 1..M-1

  int labels() const { return static_cast<int>(label_to_index.size()); }
  double energy(int label) const { return energies(label_to_index.at(label - 1)); }
  Eigen::VectorXcd state(int label) const { return vectors.col(label_to_index.at(label - 1)); }
};

DressedSpectrum dressed_spectrum(const Model& model, const PumpConfig& pump);

enum class SidebandClass { Amplified, Attenuated, Neutral };
const char* to_string(SidebandClass c);

struct SidebandEntry {
  int from = 0;  // i in |D_i, F> <-> |D_j, F+1>
  int to = 0;    // j
  double probe_frequency_hz = 0.0;
  SidebandClass classification = SidebandClass::Neutral;
  double strength = 0.0;       // relative to the strongest pair
  double r_magnitude = 1.0;    // linear response at the sideband frequency
  double population_difference = 0.0;  // p_j - p_i in the dressed basis
  bool inverted = false;       // advisory heuristic
};

struct CatalogOptions {
  double band_low_hz = 0.0;
  double band_high_hz = std::numeric_limits<double>::infinity();
  double strength_threshold = 1e-3;
  double classification_margin = 1e-3;
};

struct SidebandCatalog {
  std::vector<SidebandEntry> entries;  // sorted by probe frequency
  double pump_frequency_hz = 0.0;
  double pump_rabi_rad = 0.0;
  int photon_order = 1;
  int idealized_count = 0;
  double autler_townes_detuning_hz = 0.0;  // omega_pump - omega_21
  DressedSpectrum spectrum;
  std::vector<double> dressed_populations;  // by label

  const SidebandEntry* find(int from, int to) const;
};

SidebandCatalog sideband_catalog(const Model& model, const PumpConfig& pump, const CatalogOptions& options = {});

// N(N+1) sidebands predicted for an N-photon pump on an ideal ladder.
int idealized_sideband_count(int photon_order);

// Probe frequency (Hz) of the |D_from> -> |D_to> sideband.
double sideband_frequency_hz(const DressedSpectrum& spectrum, int from, int to);

struct SidebandCrossing {
  double pump_power_dbm = 0.0;
  double probe_frequency_hz = 0.0;
};

// Bisection on pump power for the point where two sideband frequencies coincide.
SidebandCrossing find_sideband_crossing(const Model& model, double pump_frequency_hz, double power_low_dbm,
                                        double power_high_dbm, std::pair<int, int> first,
                                        std::pair<int, int> second, double tolerance_db = 1e-6);

}  // namespace mirroramp
