#pragma once

#include "mirroramp/liouvillian.hpp"

namespace mirroramp {

// Bundles the pieces every solver needs.
struct Model {
  TransmonParams params;
  LevelStructure levels;
  RateTable rates;
  CrossMode cross_mode = CrossMode::GeometricMean;

  static Model from_params(const TransmonParams& params, CrossMode mode = CrossMode::GeometricMean,
                           LevelMode level_mode = LevelMode::Auto);

  int dim() const { return levels.size(); }
  double gamma10() const { return rates.gamma(1); }
  double omega10() const { return levels.transition(1); }

  Superoperator dissipator() const { return build_dissipator(rates, cross_mode); }
  Superoperator pumped_liouvillian(const PumpConfig& pump) const;
};

}  // namespace mirroramp
