#include "mirroramp/dressed.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "mirroramp/calibration.hpp"
#include "mirroramp/emission.hpp"

namespace mirroramp {

const char* to_string(SidebandClass c) {
  switch (c) {
    case SidebandClass::Amplified: return "Amplified";
    case SidebandClass::Attenuated: return "Attenuated";
    case SidebandClass::Neutral: return "Neutral";
  }
  return "Unknown";
}

DressedSpectrum dressed_spectrum(const Model& model, const PumpConfig& pump) {
  pump.validate();
  const int m = model.dim();
  const Operator h = build_hamiltonian_static(model.levels, pump) + build_hamiltonian_drive(pump.rabi_rad, m);
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  DressedSpectrum d;
  d.energies = es.eigenvalues();
  d.vectors = es.eigenvectors();
  d.pump = pump;
  Eigen::Index top = 0;
  d.vectors.row(m - 1).cwiseAbs2().maxCoeff(&top);
  d.truncation_index = static_cast<int>(top);
  for (int k = 0; k < m; ++k)
    if (k != d.truncation_index) d.label_to_index.push_back(k);
  return d;
}

double sideband_frequency_hz(const DressedSpectrum& d, int from, int to) {
  require(from >= 1 && from <= d.labels() && to >= 1 && to <= d.labels(), "dressed label out of range");
  return rad_to_hz(d.pump.frequency_rad + d.energy(to) - d.energy(from));
}

int idealized_sideband_count(int photon_order) {
  require(photon_order >= 1, "photon order must be at least 1");
  return photon_order * (photon_order + 1);
}

const SidebandEntry* SidebandCatalog::find(int from, int to) const {
  for (const auto& e : entries)
    if (e.from == from && e.to == to) return &e;
  return nullptr;
}

SidebandCatalog sideband_catalog(const Model& model, const PumpConfig& pump, const CatalogOptions& options) {
  require(pump.rabi_rad > 0.0, "sideband catalog needs the pump on");
  SidebandCatalog cat;
  cat.spectrum = dressed_spectrum(model, pump);
  const DressedSpectrum& d = cat.spectrum;
  cat.pump_frequency_hz = rad_to_hz(pump.frequency_rad);
  cat.pump_rabi_rad = pump.rabi_rad;
  cat.photon_order = pump.photon_order;
  cat.idealized_count = idealized_sideband_count(pump.photon_order);
  if (model.dim() > 2) cat.autler_townes_detuning_hz = rad_to_hz(pump.frequency_rad - model.levels.transition(2));

  const PumpedSystem system(model, pump);
  const Operator c = output_field_operator(model.rates, model.dim());
  const int nl = d.labels();
  for (int l = 1; l <= nl; ++l) {
    const Eigen::VectorXcd v = d.state(l);
    cat.dressed_populations.push_back((v.adjoint() * system.steady().matrix * v)(0, 0).real());
  }

  Eigen::MatrixXd strength = Eigen::MatrixXd::Zero(nl, nl);
  for (int i = 1; i <= nl; ++i)
    for (int j = 1; j <= nl; ++j)
      if (i != j) strength(i - 1, j - 1) = std::norm((d.state(i).adjoint() * c * d.state(j))(0, 0));
  const double smax = strength.maxCoeff();

  ShiftedSolver solver(system.liouvillian().matrix);
  for (int i = 1; i <= nl; ++i)
    for (int j = 1; j <= nl; ++j) {
      if (i == j || smax <= 0.0) continue;
      const double s = strength(i - 1, j - 1) / smax;
      const double f = sideband_frequency_hz(d, i, j);
      if (s < options.strength_threshold || f < options.band_low_hz || f > options.band_high_hz) continue;
      SidebandEntry e;
      e.from = i;
      e.to = j;
      e.probe_frequency_hz = f;
      e.strength = s;
      e.population_difference = cat.dressed_populations[j - 1] - cat.dressed_populations[i - 1];
      e.inverted = e.population_difference > 0.0;
      if (std::abs(hz_to_rad(f) - pump.frequency_rad) >= kMinDetuningRad) {
        e.r_magnitude = system.linear_response(hz_to_rad(f), solver).magnitude;
        if (e.r_magnitude > 1.0 + options.classification_margin)
          e.classification = SidebandClass::Amplified;
        else if (e.r_magnitude < 1.0 - options.classification_margin)
          e.classification = SidebandClass::Attenuated;
      }
      cat.entries.push_back(e);
    }
  std::sort(cat.entries.begin(), cat.entries.end(),
            [](const SidebandEntry& a, const SidebandEntry& b) { return a.probe_frequency_hz < b.probe_frequency_hz; });
  return cat;
}

SidebandCrossing find_sideband_crossing(const Model& model, double pump_frequency_hz, double power_low_dbm,
                                        double power_high_dbm, std::pair<int, int> first, std::pair<int, int> second,
                                        double tolerance_db) {
  require(power_low_dbm != power_high_dbm, "power range is empty");
  const double w = hz_to_rad(pump_frequency_hz);
  auto spectrum_at = [&](double dbm) {
    return dressed_spectrum(model, PumpConfig{w, dbm_to_rabi(dbm, w, model.gamma10()), 1});
  };
  auto gap = [&](double dbm) {
    const auto d = spectrum_at(dbm);
    return sideband_frequency_hz(d, first.first, first.second) - sideband_frequency_hz(d, second.first, second.second);
  };
  const double lo = std::min(power_low_dbm, power_high_dbm);
  const double hi = std::max(power_low_dbm, power_high_dbm);
  const double glo = gap(lo);
  const double ghi = gap(hi);
  if (!(glo * ghi < 0.0)) {
    if (glo == 0.0 || ghi == 0.0) {
      const double p = glo == 0.0 ? lo : hi;
      return {p, sideband_frequency_hz(spectrum_at(p), first.first, first.second)};
    }
    fail(ErrorCode::NoCrossing, "sideband frequencies do not cross in the power range");
  }
  auto stop = [tolerance_db](double a, double b) { return std::abs(b - a) <= tolerance_db; };
  const auto [a, b] = boost::math::tools::bisect(gap, lo, hi, stop);
  const double p = 0.5 * (a + b);
  const auto d = spectrum_at(p);
  const double f = 0.5 * (sideband_frequency_hz(d, first.first, first.second) +
                          sideband_frequency_hz(d, second.first, second.second));
  return {p, f};
}

}  // namespace mirroramp
