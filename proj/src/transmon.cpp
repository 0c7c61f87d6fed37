#include "mirroramp/transmon.hpp"

#include <cmath>

#include "mirroramp/calibration.hpp"
#include "mirroramp/errors.hpp"

namespace mirroramp {

void TransmonParams::validate() const {
  require(levels >= 2, "level count must be at least 2");
  require(charging_energy_hz > 0.0 && josephson_energy_hz > 0.0, "E_C and E_J must be positive");
  require(relaxation_hz >= 0.0 && dephasing_hz >= 0.0, "rates must be non-negative");
  for (std::size_t k = 0; k < measured_transitions_hz.size(); ++k) {
    require(measured_transitions_hz[k] > 0.0, "measured transitions must be positive");
    if (k > 0)
      require(measured_transitions_hz[k] < measured_transitions_hz[k - 1],
              "measured transitions must be strictly decreasing");
  }
}

TransmonParams TransmonParams::reference_device() {
  TransmonParams p;
  p.charging_energy_hz = 228e6;
  p.josephson_energy_hz = 13.67e9;
  p.levels = 6;
  p.measured_transitions_hz = {4.766e9, 4.538e9, 4.287e9, 4.005e9};
  p.relaxation_hz = 2.264e6;
  p.dephasing_hz = 0.0317e6;
  return p;
}

LevelStructure derive_level_frequencies(const TransmonParams& params, LevelMode mode) {
  params.validate();
  const int m = params.levels;
  const auto& measured = params.measured_transitions_hz;
  const bool extrapolate = mode == LevelMode::Auto;
  if (mode == LevelMode::Auto) mode = measured.empty() ? LevelMode::Analytic : LevelMode::Measured;

  std::vector<double> transitions_hz;
  if (mode == LevelMode::Analytic) {
    const double w10 = std::sqrt(8.0 * params.josephson_energy_hz * params.charging_energy_hz) - params.charging_energy_hz;
    for (int n = 1; n < m; ++n) transitions_hz.push_back(w10 - (n - 1) * params.charging_energy_hz);
  } else {
    require(!measured.empty(), "measured mode requested without measured transitions");
    require(extrapolate || static_cast<int>(measured.size()) >= m - 1,
            "measured mode needs M-1 measured transitions");
    transitions_hz.assign(measured.begin(), measured.begin() + std::min<std::size_t>(measured.size(), m - 1));
    // Upper transitions beyond the measured ones follow the Duffing ladder.
    while (static_cast<int>(transitions_hz.size()) < m - 1)
      transitions_hz.push_back(transitions_hz.back() - params.charging_energy_hz);
  }

  LevelStructure levels;
  levels.omega.assign(m, 0.0);
  for (int n = 1; n < m; ++n) {
    require(transitions_hz[n - 1] > 0.0, "level ladder collapsed; too many levels for this anharmonicity");
    levels.omega[n] = levels.omega[n - 1] + hz_to_rad(transitions_hz[n - 1]);
  }
  return levels;
}

RateTable build_rate_table(const TransmonParams& params, RateScaling scaling, std::span<const double> relaxation_hz,
                           std::span<const double> dephasing_hz) {
  const int m = params.levels;
  RateTable t;
  if (scaling == RateScaling::Harmonic) {
    require(params.relaxation_hz >= 0.0 && params.dephasing_hz >= 0.0, "rates must be non-negative");
    for (int n = 1; n < m; ++n) {
      t.relaxation.push_back(n * hz_to_rad(params.relaxation_hz));
      t.dephasing.push_back(n * hz_to_rad(params.dephasing_hz));
    }
    return t;
  }
  require(static_cast<int>(relaxation_hz.size()) == m - 1 && static_cast<int>(dephasing_hz.size()) == m - 1,
          "explicit rate lists need M-1 entries each");
  for (int n = 1; n < m; ++n) {
    require(relaxation_hz[n - 1] >= 0.0 && dephasing_hz[n - 1] >= 0.0, "negative rate in explicit table");
    t.relaxation.push_back(hz_to_rad(relaxation_hz[n - 1]));
    t.dephasing.push_back(hz_to_rad(dephasing_hz[n - 1]));
  }
  return t;
}

void PumpConfig::validate() const {
  require(frequency_rad > 0.0, "pump frequency must be positive");
  require(rabi_rad >= 0.0, "pump Rabi rate must be non-negative");
  require(photon_order >= 1, "pump photon order must be at least 1");
}

void ProbeConfig::validate() const {
  require(frequency_rad > 0.0, "probe frequency must be positive");
  require(rabi_rad >= 0.0, "probe Rabi rate must be non-negative");
}

Operator basis_op(int dim, int a, int b) {
  Operator op = Operator::Zero(dim, dim);
  op(a, b) = 1.0;
  return op;
}

Operator build_hamiltonian_static(const LevelStructure& levels, const PumpConfig& pump) {
  const int m = levels.size();
  require(m >= 2, "need at least two levels");
  Operator h = Operator::Zero(m, m);
  for (int n = 1; n < m; ++n) h(n, n) = levels.omega[n] - n * pump.frequency_rad;
  return h;
}

Operator build_hamiltonian_drive(double pump_rabi_rad, int dim) {
  require(pump_rabi_rad >= 0.0, "pump Rabi rate must be non-negative");
  Operator h = Operator::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) h(n, n - 1) = h(n - 1, n) = std::sqrt(double(n)) * pump_rabi_rad / 2.0;
  return h;
}

std::pair<Operator, Operator> build_probe_coupling(double probe_rabi_rad, int dim) {
  require(probe_rabi_rad >= 0.0, "probe Rabi rate must be non-negative");
  Operator plus = Operator::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) plus(n, n - 1) = std::sqrt(double(n)) * probe_rabi_rad / 2.0;
  Operator minus = plus.adjoint();
  return {plus, minus};
}

}  // namespace mirroramp
