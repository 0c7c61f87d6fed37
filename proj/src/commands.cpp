#include "mirroramp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>

#include "mirroramp/calibration.hpp"
#include "mirroramp/csv.hpp"
#include "mirroramp/emission.hpp"
#include "mirroramp/parallel.hpp"

namespace mirroramp {

namespace {

Metadata base_metadata(const RunConfig& c, const std::string& command) {
  char hbar[32];
  std::snprintf(hbar, sizeof hbar, "%.10e", kHbar);
  return {{"tool", std::string("mirroramp ") + kToolVersion},
          {"command", command},
          {"config_hash", c.hash()},
          {"cross_mode", to_string(c.cross_mode)},
          {"reflection_convention", c.convention == ReflectionConvention::InputOutput ? "InputOutput" : "PrintedForm"},
          {"hbar_j_s", hbar},
          {"config", c.resolved_text()}};
}

std::filesystem::path out_path(const RunConfig& c, const std::string& suffix) {
  return c.directory / (c.prefix + suffix);
}

void write_run_files(const RunConfig& c, const Metadata& meta) {
  write_text_file(out_path(c, ".resolved.cfg"), c.resolved_text());
  std::ostringstream o;
  for (const auto& [k, v] : meta)
    if (k != "config") o << k << ": " << v << "\n";
  o << "resolved_config: " << (c.prefix + ".resolved.cfg") << "\n";
  write_text_file(out_path(c, ".meta"), o.str());
}

std::string flag_name(ErrorCode code) { return code == ErrorCode::None ? "ok" : to_string(code); }

std::string heatmap(const SweepResult& s) {
  static const std::string ramp = " .:-=+*#%@";
  const std::size_t nx = s.axis1.size(), ny = s.rows();
  const std::size_t cols = std::min<std::size_t>(nx, 100), rows = std::min<std::size_t>(ny, 60);
  double vmax = 0.0;
  for (const auto& v : s.values)
    if (std::isfinite(std::abs(v))) vmax = std::max(vmax, std::abs(v));
  std::ostringstream o;
  o << "|r| preview, rows " << s.axis2->name << " (top = last), columns " << s.axis1.name << " "
    << format_number(s.axis1.values.front()) << " .. " << format_number(s.axis1.values.back()) << ", '@' = "
    << format_number(vmax) << ", '?' = flagged\n";
  for (std::size_t r = rows; r-- > 0;) {
    const std::size_t iy = rows == 1 ? 0 : r * (ny - 1) / (rows - 1);
    char label[32];
    std::snprintf(label, sizeof label, "%9.2f ", s.axis2->values[iy]);
    o << label;
    for (std::size_t col = 0; col < cols; ++col) {
      const std::size_t ix = cols == 1 ? 0 : col * (nx - 1) / (cols - 1);
      const double m = s.magnitude(ix, iy);
      if (!std::isfinite(m)) {
        o << '?';
        continue;
      }
      const auto k = static_cast<std::size_t>(std::clamp(m / (vmax > 0 ? vmax : 1.0), 0.0, 1.0) * (ramp.size() - 1));
      o << ramp[k];
    }
    o << "\n";
  }
  return o.str();
}

SweepRequest make_request(const RunConfig& c, SweepKind kind) {
  SweepRequest req;
  req.model = c.model();
  req.kind = kind;
  req.convention = c.convention;
  req.pump_frequency_hz = c.pump_frequency_hz;
  req.photon_order = c.photon_order;
  req.probe_frequencies_hz = c.frequency_grid_hz();
  req.pump_on = c.pump_on;
  req.pump_power_dbm = c.pump_at_sample_dbm(c.pump_power_dbm);
  req.probe_power_dbm = c.probe_at_sample_dbm(c.probe_power_dbm);
  req.harmonics = c.harmonics;
  req.workers = c.effective_workers();
  for (double p : c.power_grid_dbm())
    req.powers_dbm.push_back(kind == SweepKind::PumpPower ? c.pump_at_sample_dbm(p) : c.probe_at_sample_dbm(p));
  return req;
}

void write_sweep_csv(const SweepResult& s, const Metadata& meta, const std::string& power_column,
                     const std::filesystem::path& path) {
  CsvWriter w(meta, {"omega_p_hz", power_column, "r_mag", "r_re", "r_im", "flag"});
  for (std::size_t iy = 0; iy < s.rows(); ++iy)
    for (std::size_t ix = 0; ix < s.axis1.size(); ++ix) {
      const Complex r = s.at(ix, iy);
      w.add_row({format_number(s.axis1.values[ix]), format_number(s.axis2->values[iy]), format_number(std::abs(r)),
                 format_number(r.real()), format_number(r.imag()), flag_name(s.flags[s.index(ix, iy)])});
    }
  w.write(path);
}

}  // namespace

std::string power_tag(double dbm) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", dbm);
  std::string s = buf;
  for (auto& ch : s) {
    if (ch == '-') ch = 'm';
    if (ch == '.') ch = 'p';
  }
  return s;
}

double half_excess_power(const std::vector<double>& powers, const std::vector<double>& mags) {
  require(powers.size() == mags.size() && !powers.empty(), "power and magnitude lengths differ");
  const double excess = mags.front() - 1.0;
  if (!(excess > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double target = 1.0 + 0.5 * excess;
  for (std::size_t k = 1; k < mags.size(); ++k)
    if (mags[k] <= target) {
      const double t = (mags[k - 1] - target) / (mags[k - 1] - mags[k]);
      return powers[k - 1] + t * (powers[k] - powers[k - 1]);
    }
  return std::numeric_limits<double>::quiet_NaN();
}

int cmd_reflection_sweep(const RunConfig& c, std::ostream& log) {
  SweepRequest req = make_request(c, SweepKind::PumpPower);
  req.method = c.method;
  const SweepResult s = reflection_sweep(req);
  Metadata meta = base_metadata(c, "reflection-sweep");
  meta.emplace_back("method", to_string(c.method));
  write_sweep_csv(s, meta, "p_pump_dbm", out_path(c, ".csv"));
  write_run_files(c, meta);
  if (c.preview) write_text_file(out_path(c, ".preview.txt"), heatmap(s));

  std::size_t best = 0;
  for (std::size_t k = 0; k < s.values.size(); ++k)
    if (std::abs(s.values[k]) > std::abs(s.values[best]) || !std::isfinite(std::abs(s.values[best]))) best = k;
  log << "cells " << s.values.size() << ", flagged " << s.flagged_count() << "\n";
  log << "max |r| " << format_number(std::abs(s.values[best])) << " at " << format_number(s.axis1.values[best % s.axis1.size()])
      << " Hz, " << format_number(s.axis2->values[best / s.axis1.size()]) << " dBm\n";
  return s.flagged_count() ? kExitFlagged : kExitOk;
}

int cmd_saturation(const RunConfig& c, std::ostream& log) {
  SweepRequest req = make_request(c, SweepKind::ProbePower);
  req.method = c.method == ReflectionMethod::SingleTone ? ReflectionMethod::SingleTone : ReflectionMethod::HarmonicBalance;
  const SweepResult s = reflection_sweep(req);
  Metadata meta = base_metadata(c, "saturation");
  meta.emplace_back("method", to_string(req.method));
  meta.emplace_back("pump_power_at_sample_dbm", format_number(req.pump_power_dbm));

  // Linecut at the frequency of the strongest response at the lowest probe power.
  const auto first = s.row_magnitudes(0);
  std::size_t ipk = 0;
  for (std::size_t k = 0; k < first.size(); ++k)
    if (std::isfinite(first[k]) && (!std::isfinite(first[ipk]) || first[k] > first[ipk])) ipk = k;
  std::vector<double> cut(s.rows());
  for (std::size_t r = 0; r < s.rows(); ++r) cut[r] = s.magnitude(ipk, r);
  const double p_half = half_excess_power(s.axis2->values, cut);

  Metadata cut_meta = meta;
  cut_meta.emplace_back("linecut_frequency_hz", format_number(s.axis1.values[ipk]));
  cut_meta.emplace_back("half_excess_power_dbm", format_number(p_half));
  CsvWriter w(cut_meta, {"p_probe_dbm", "r_mag"});
  for (std::size_t r = 0; r < s.rows(); ++r) w.add_row({format_number(s.axis2->values[r]), format_number(cut[r])});
  w.write(out_path(c, "_linecut.csv"));

  write_sweep_csv(s, meta, "p_probe_dbm", out_path(c, ".csv"));
  write_run_files(c, meta);
  if (c.preview) write_text_file(out_path(c, ".preview.txt"), heatmap(s));
  log << "cells " << s.values.size() << ", flagged " << s.flagged_count() << "\n";
  log << "linecut at " << format_number(s.axis1.values[ipk]) << " Hz: |r| " << format_number(cut.front()) << " -> "
      << format_number(cut.back()) << ", half-excess power " << format_number(p_half) << " dBm\n";
  return s.flagged_count() ? kExitFlagged : kExitOk;
}

int cmd_sidebands(const RunConfig& c, std::ostream& log) {
  if (!c.pump_on) fail(ErrorCode::InvalidArgument, "sideband catalog needs the pump on");
  const Model model = c.model();
  const auto powers = c.power_grid_dbm();
  const double w = hz_to_rad(c.pump_frequency_hz);
  std::vector<SidebandCatalog> cats(powers.size());
  parallel_for(powers.size(), c.effective_workers(), [&](std::size_t k) {
    const PumpConfig pump{w, dbm_to_rabi(c.pump_at_sample_dbm(powers[k]), w, model.gamma10()), c.photon_order};
    cats[k] = sideband_catalog(model, pump, c.catalog);
  });

  const Metadata meta = base_metadata(c, "sidebands");
  CsvWriter ladder(meta, {"p_pump_dbm", "label", "energy_hz", "dressed_population", "top_level_weight"});
  for (std::size_t k = 0; k < powers.size(); ++k) {
    const auto& cat = cats[k];
    Metadata m = meta;
    m.emplace_back("pump_power_dbm", format_number(powers[k]));
    m.emplace_back("autler_townes_detuning_hz", format_number(cat.autler_townes_detuning_hz));
    m.emplace_back("entries", std::to_string(cat.entries.size()));
    CsvWriter w(m, {"i", "j", "omega_p_hz", "classification", "strength", "r_mag", "population_difference", "inverted",
                    "idealized_count"});
    for (const auto& e : cat.entries)
      w.add_row({std::to_string(e.from), std::to_string(e.to), format_number(e.probe_frequency_hz),
                 to_string(e.classification), format_number(e.strength), format_number(e.r_magnitude),
                 format_number(e.population_difference), e.inverted ? "1" : "0", std::to_string(cat.idealized_count)});
    w.write(out_path(c, "_" + power_tag(powers[k]) + ".csv"));

    const auto& d = cat.spectrum;
    const DensityState rho = steady_state(model.pumped_liouvillian(d.pump));
    for (int col = 0; col < d.energies.size(); ++col) {
      const int label = col == d.truncation_index
                            ? 0
                            : static_cast<int>(std::find(d.label_to_index.begin(), d.label_to_index.end(), col) -
                                               d.label_to_index.begin()) + 1;
      const Eigen::VectorXcd v = d.vectors.col(col);
      ladder.add_row({format_number(powers[k]), std::to_string(label), format_number(rad_to_hz(d.energies(col))),
                      format_number((v.adjoint() * rho.matrix * v)(0, 0).real()),
                      format_number(std::norm(v(model.dim() - 1)))});
    }
    int amp = 0, att = 0;
    for (const auto& e : cat.entries) {
      amp += e.classification == SidebandClass::Amplified;
      att += e.classification == SidebandClass::Attenuated;
    }
    log << format_number(powers[k]) << " dBm: " << cat.entries.size() << " sidebands (" << amp << " amplified, " << att
        << " attenuated), idealized " << cat.idealized_count << "\n";
  }
  ladder.write(out_path(c, "_ladder.csv"));
  write_run_files(c, meta);
  return kExitOk;
}

int cmd_emission(const RunConfig& c, std::ostream& log) {
  const Model model = c.model();
  const auto freqs = c.frequency_grid_hz();
  const double w = hz_to_rad(c.pump_frequency_hz);
  const Metadata meta = base_metadata(c, "emission");
  for (double p : c.power_grid_dbm()) {
    const double rabi = c.pump_on ? dbm_to_rabi(c.pump_at_sample_dbm(p), w, model.gamma10()) : 0.0;
    const SpectrumResult s = emission_spectrum(model, PumpConfig{w, rabi, c.photon_order}, freqs, c.effective_workers());
    const auto peaks = spectrum_peaks(s);
    std::string peak_list;
    for (double f : peaks) peak_list += (peak_list.empty() ? "" : " ") + format_number(f);
    Metadata m = meta;
    m.emplace_back("pump_power_dbm", format_number(p));
    m.emplace_back("incoherent_flux_per_s", format_number(s.incoherent_flux));
    m.emplace_back("regularized_points", std::to_string(s.regularized_points));
    m.emplace_back("peaks_hz", peak_list);
    CsvWriter wcsv(m, {"freq_hz", "density"});
    for (std::size_t k = 0; k < freqs.size(); ++k) wcsv.add_row({format_number(freqs[k]), format_number(s.density[k])});
    wcsv.write(out_path(c, "_" + power_tag(p) + ".csv"));
    if (s.regularized_points) log << "note: " << s.regularized_points << " point(s) at the pump frequency regularized\n";
    log << format_number(p) << " dBm: " << peaks.size() << " line(s)" << (peaks.empty() ? "" : " at " + peak_list) << "\n";
  }
  write_run_files(c, meta);
  return kExitOk;
}

std::string format_fit_report(const FitReport& r) {
  std::ostringstream o;
  o << "omega10_hz = " << format_number(r.omega10_hz) << "\n";
  o << "relaxation_hz = " << format_number(r.relaxation_hz) << "\n";
  o << "decoherence_hz = " << format_number(r.decoherence_hz) << "\n";
  o << "dephasing_hz = " << format_number(r.dephasing_hz) << "\n";
  o << "circle_radius = " << format_number(r.circle_radius) << "\n";
  o << "residual_norm = " << format_number(r.residual_norm) << "\n";
  o << "relative_residual = " << format_number(r.relative_residual) << "\n";
  o << "stderr_omega10_hz = " << format_number(std::sqrt(r.covariance(0, 0))) << "\n";
  o << "stderr_relaxation_hz = " << format_number(std::sqrt(r.covariance(1, 1))) << "\n";
  o << "stderr_decoherence_hz = " << format_number(std::sqrt(r.covariance(2, 2))) << "\n";
  return o.str();
}

int cmd_fit(const std::filesystem::path& trace_path, const std::filesystem::path& csv_out, std::ostream& log) {
  const ReflectionTrace trace = read_trace_csv(trace_path);
  FitReport r;
  try {
    r = fit_circle(trace);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateCircle || e.code() == ErrorCode::PoorFit) {
      log << "fit rejected: " << e.what() << "\n";
      return kExitPoorFit;
    }
    throw;
  }
  log << format_fit_report(r);
  if (!csv_out.empty()) {
    CsvWriter w({{"tool", std::string("mirroramp ") + kToolVersion}, {"command", "fit"}, {"trace", trace_path.string()}},
                {"omega10_hz", "relaxation_hz", "decoherence_hz", "dephasing_hz", "residual_norm", "relative_residual"});
    w.add_row({format_number(r.omega10_hz), format_number(r.relaxation_hz), format_number(r.decoherence_hz),
               format_number(r.dephasing_hz), format_number(r.residual_norm), format_number(r.relative_residual)});
    w.write(csv_out);
  }
  return kExitOk;
}

}  // namespace mirroramp
