#pragma once

#include <random>

#include "mirroramp/calibration.hpp"
#include "mirroramp/model.hpp"

namespace testutil {

using namespace mirroramp;

inline Model reference_model(CrossMode mode = CrossMode::GeometricMean) {
  return Model::from_params(TransmonParams::reference_device(), mode);
}

inline Model two_level(double f10_hz, double relax_hz, double dephase_hz) {
  TransmonParams p;
  p.charging_energy_hz = 228e6;
  p.josephson_energy_hz = 13.67e9;
  p.levels = 2;
  p.measured_transitions_hz = {f10_hz};
  p.relaxation_hz = relax_hz;
  p.dephasing_hz = dephase_hz;
  return Model::from_params(p);
}

// Random ladder with M in [2, 6], transitions near 4-5 GHz, rates of a few MHz.
inline Model random_model(std::mt19937& rng) {
  std::uniform_int_distribution<int> levels(2, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TransmonParams p;
  p.levels = levels(rng);
  p.charging_energy_hz = 150e6 + 150e6 * u(rng);
  p.josephson_energy_hz = 12e9 + 4e9 * u(rng);
  p.measured_transitions_hz.push_back(4.4e9 + 0.6e9 * u(rng));
  for (int n = 2; n < p.levels; ++n)
    p.measured_transitions_hz.push_back(p.measured_transitions_hz.back() - p.charging_energy_hz * (0.8 + 0.4 * u(rng)));
  p.relaxation_hz = 0.5e6 + 4e6 * u(rng);
  p.dephasing_hz = 0.5e6 * u(rng);
  return Model::from_params(p);
}

inline PumpConfig random_pump(std::mt19937& rng, const Model& m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double w = m.omega10() - hz_to_rad(300e6 * u(rng));
  return PumpConfig{w, hz_to_rad(5e6 + 300e6 * u(rng)), 1};
}

inline Operator random_hermitian(std::mt19937& rng, int dim) {
  std::normal_distribution<double> g;
  Operator a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

inline Operator random_operator(std::mt19937& rng, int dim) {
  std::normal_distribution<double> g;
  Operator a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

inline Operator random_density(std::mt19937& rng, int dim) {
  const Operator a = random_operator(rng, dim);
  Operator rho = a * a.adjoint();
  return rho / rho.trace().real();
}

// Two-level optical Bloch steady state with H = Delta |1><1| + Omega/2 sigma_x, decay Gamma and
// coherence decay gamma. Returns (rho11, rho10).
inline std::pair<double, Complex> bloch_steady(double delta, double omega, double gamma_relax, double gamma_coh) {
  const double ree = (omega * omega * gamma_coh / (2.0 * gamma_relax)) /
                     (delta * delta + gamma_coh * gamma_coh + omega * omega * gamma_coh / gamma_relax);
  const Complex reg = Complex(0.0, -0.5 * omega) * (1.0 - 2.0 * ree) / Complex(gamma_coh, delta);
  return {ree, reg};
}

}  // namespace testutil
