#include "mirroramp/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "mirroramp/calibration.hpp"
#include "mirroramp/parallel.hpp"

namespace mirroramp {

std::vector<double> SweepResult::row_magnitudes(std::size_t i2) const {
  std::vector<double> out(axis1.size());
  for (std::size_t i = 0; i < axis1.size(); ++i) out[i] = magnitude(i, i2);
  return out;
}

std::size_t SweepResult::flagged_count() const {
  return static_cast<std::size_t>(std::count_if(flags.begin(), flags.end(), [](ErrorCode c) { return c != ErrorCode::None; }));
}

namespace {

void check_axis(const std::vector<double>& v, const char* name) {
  if (v.empty()) fail(ErrorCode::InvalidArgument, "empty sweep axis");
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(std::isfinite(v[i]), std::string("non-finite value on axis ") + name);
    if (i > 0) require(v[i] > v[i - 1], std::string("axis ") + name + " must be strictly increasing");
  }
}

ErrorCode code_of(const std::exception& e) {
  if (auto* err = dynamic_cast<const Error*>(&e)) return err->code();
  return ErrorCode::SolverFailure;
}

}  // namespace

SweepResult reflection_sweep(const SweepRequest& req) {
  check_axis(req.probe_frequencies_hz, "probe frequency");
  check_axis(req.powers_dbm, "power");
  const Model& model = req.model;
  const double g10 = model.gamma10();
  const double w_pump = hz_to_rad(req.pump_frequency_hz);
  const bool pump_rows = req.kind == SweepKind::PumpPower;
  const std::size_t nf = req.probe_frequencies_hz.size();
  const std::size_t nrows = req.powers_dbm.size();

  SweepResult res;
  res.axis1 = Axis{"omega_p", "Hz", req.probe_frequencies_hz};
  res.axis2 = Axis{pump_rows ? "p_pump_dbm" : "p_probe_dbm", "dBm", req.powers_dbm};
  res.values.assign(nf * nrows, Complex(kFlaggedValue, kFlaggedValue));
  res.flags.assign(nf * nrows, ErrorCode::None);
  res.metadata["method"] = to_string(req.method);
  res.metadata["cross_mode"] = to_string(model.cross_mode);

  auto pump_at = [&](double dbm) {
    PumpConfig p{w_pump, req.pump_on ? dbm_to_rabi(dbm, w_pump, g10) : 0.0, req.photon_order};
    return p;
  };

  // One pump operating point per row (pump sweeps) or a single shared one (probe sweeps).
  const bool needs_pump = req.method != ReflectionMethod::SingleTone;
  const std::size_t nsys = needs_pump ? (pump_rows ? nrows : 1) : 0;
  std::vector<std::unique_ptr<PumpedSystem>> systems(nsys);
  std::vector<ErrorCode> system_error(nsys, ErrorCode::None);
  parallel_for(nsys, req.workers, [&](std::size_t s) {
    try {
      const PumpConfig pump = pump_at(pump_rows ? req.powers_dbm[s] : req.pump_power_dbm);
      systems[s] = std::make_unique<PumpedSystem>(model, pump, req.convention);
    } catch (const std::exception& e) {
      system_error[s] = code_of(e);
    }
  });

  struct WorkerState {
    std::size_t row = static_cast<std::size_t>(-1);
    std::unique_ptr<ShiftedSolver> solver;
  };
  parallel_for_with_state(
      nf * nrows, req.workers, [] { return WorkerState{}; },
      [&](WorkerState& st, std::size_t idx) {
        const std::size_t row = idx / nf;
        const std::size_t col = idx % nf;
        const double w_probe = hz_to_rad(req.probe_frequencies_hz[col]);
        const double probe_dbm = pump_rows ? req.probe_power_dbm : req.powers_dbm[row];
        const std::size_t s = pump_rows ? row : 0;
        try {
          ReflectionPoint p;
          if (req.method == ReflectionMethod::SingleTone) {
            p = single_tone_reflection(model, ProbeConfig{w_probe, dbm_to_rabi(probe_dbm, w_probe, g10)}, req.convention);
          } else {
            if (system_error[s] != ErrorCode::None) fail(system_error[s], "pump steady state failed");
            const PumpedSystem& sys = *systems[s];
            if (req.method == ReflectionMethod::LinearResponse) {
              if (st.row != s || !st.solver) {
                st.solver = std::make_unique<ShiftedSolver>(sys.liouvillian().matrix);
                st.row = s;
              }
              p = sys.linear_response(w_probe, *st.solver);
            } else {
              p = sys.harmonic_balance(ProbeConfig{w_probe, dbm_to_rabi(probe_dbm, w_probe, g10)}, req.harmonics);
            }
          }
          res.values[idx] = p.r;
        } catch (const std::exception& e) {
          res.flags[idx] = code_of(e);
        }
      });
  return res;
}

PeakInfo analyze_peak(std::span<const double> frequency_hz, std::span<const double> magnitude) {
  require(frequency_hz.size() == magnitude.size(), "frequency and magnitude lengths differ");
  std::vector<double> f, y;
  for (std::size_t i = 0; i < frequency_hz.size(); ++i)
    if (std::isfinite(magnitude[i])) {
      f.push_back(frequency_hz[i]);
      y.push_back(magnitude[i]);
    }
  require(f.size() >= 5, "peak analysis needs at least 5 points");
  const std::size_t ip = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double peak = y[ip];
  if (peak <= 1.0 + 1e-3) fail(ErrorCode::NoPeak, "no amplification above 1e-3");
  const double half = 1.0 + 0.5 * (peak - 1.0);

  auto cross = [&](std::size_t a, std::size_t b) { return f[a] + (half - y[a]) * (f[b] - f[a]) / (y[b] - y[a]); };
  std::size_t i = ip;
  while (i > 0 && y[i - 1] >= half) --i;
  if (i == 0) fail(ErrorCode::NoPeak, "peak not resolved on the low side");
  const double lo = cross(i - 1, i);
  std::size_t j = ip;
  while (j + 1 < y.size() && y[j + 1] >= half) ++j;
  if (j + 1 == y.size()) fail(ErrorCode::NoPeak, "peak not resolved on the high side");
  const double hi = cross(j, j + 1);
  return PeakInfo{f[ip], peak, hi - lo};
}

PeakInfo analyze_peak(const SweepResult& trace, std::size_t row) {
  const auto mags = trace.row_magnitudes(row);
  return analyze_peak(trace.axis1.values, mags);
}

}  // namespace mirroramp
