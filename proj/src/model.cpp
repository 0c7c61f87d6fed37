#include "mirroramp/model.hpp"

namespace mirroramp {

Model Model::from_params(const TransmonParams& params, CrossMode mode, LevelMode level_mode) {
  Model m;
  m.params = params;
  m.levels = derive_level_frequencies(params, level_mode);
  m.rates = build_rate_table(params);
  m.cross_mode = mode;
  return m;
}

Superoperator Model::pumped_liouvillian(const PumpConfig& pump) const {
  pump.validate();
  const Operator h = build_hamiltonian_static(levels, pump) + build_hamiltonian_drive(pump.rabi_rad, dim());
  return build_liouvillian(h, dissipator());
}

}  // namespace mirroramp
