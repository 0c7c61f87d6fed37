#pragma once

#include <span>

#include "mirroramp/model.hpp"

namespace mirroramp {

// c = sum_n sqrt(Gamma_n) sigma_{n-1,n}
Operator output_field_operator(const RateTable& rates, int dim);

struct SpectrumResult {
  std::vector<double> frequency_hz;
  std::vector<double> density;  // photons s^-1 Hz^-1
  PumpConfig pump;
  double incoherent_flux = 0.0;  // photons s^-1
  int regularized_points = 0;    // frequencies that needed the resolvent shift
};

// One-sided transform of <dc^dag(tau) dc(0)> by the regression theorem, per Hz of lab frequency.
SpectrumResult emission_spectrum(const Model& model, const PumpConfig& pump, std::span<const double> frequency_hz,
                                 int workers = 1);

// <dc^dag dc> in the pump steady state.
double total_incoherent_flux(const Model& model, const PumpConfig& pump);

// Emission line positions: local maxima above rel_threshold * max.
std::vector<double> spectrum_peaks(const SpectrumResult& spectrum, double rel_threshold = 0.05);

}  // namespace mirroramp
