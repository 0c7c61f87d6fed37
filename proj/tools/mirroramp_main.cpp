// Command-line front end.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "mirroramp/calibration.hpp"
#include "mirroramp/commands.hpp"
#include "mirroramp/csv.hpp"

using namespace mirroramp;

namespace {

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;
  int workers = 0;
};

void add_config_args(CLI::App* sub, ConfigArgs& a) {
  sub->add_option("config", a.path, "run configuration (INI)")->required()->check(CLI::ExistingFile);
  sub->add_option("--set", a.overrides, "override a key, section.key=value (repeatable)");
  sub->add_option("--workers", a.workers, "worker threads (default: MIRRORAMP_WORKERS or all cores)");
}

RunConfig resolve(const ConfigArgs& a) {
  RunConfig c = load_run_config(a.path, a.overrides);
  if (a.workers > 0) c.workers = a.workers;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pumped multi-level transmon in front of a mirror: reflection, sidebands, emission, fits"};
  app.set_version_flag("--version", std::string("mirroramp ") + kToolVersion);
  app.require_subcommand(1);

  ConfigArgs sweep_args, sat_args, side_args, emis_args;
  auto* sweep = app.add_subcommand("reflection-sweep", "probe reflection versus probe frequency and pump power");
  add_config_args(sweep, sweep_args);
  auto* sat = app.add_subcommand("saturation", "probe reflection versus probe frequency and probe power");
  add_config_args(sat, sat_args);
  auto* side = app.add_subcommand("sidebands", "dressed-state sideband catalogs per pump power");
  add_config_args(side, side_args);
  auto* emis = app.add_subcommand("emission", "incoherent emission spectra per pump power");
  add_config_args(emis, emis_args);

  std::string trace_path, fit_csv;
  auto* fit = app.add_subcommand("fit", "circle fit of a weak-probe reflection trace");
  fit->add_option("trace", trace_path, "CSV with freq_hz,re,im or freq_hz,mag_db,phase_deg")->required();
  fit->add_option("--csv", fit_csv, "also write the report as a CSV row");

  double cal_dbm = 0, cal_rabi_hz = 0, cal_freq = 0, cal_gamma = 2.264e6, cal_atten = 0;
  auto* cal = app.add_subcommand("calibrate", "convert between dBm and Rabi frequency");
  auto* opt_dbm = cal->add_option("--dbm", cal_dbm, "power at the sample (or generator with --attenuation-db)");
  auto* opt_rabi = cal->add_option("--rabi-hz", cal_rabi_hz, "Rabi frequency Omega/2pi");
  cal->add_option("--frequency-hz", cal_freq, "carrier frequency")->required();
  cal->add_option("--gamma10-hz", cal_gamma, "relaxation rate Gamma10/2pi")->capture_default_str();
  auto* opt_att = cal->add_option("--attenuation-db", cal_atten, "line attenuation; --dbm is then generator-plane");
  opt_dbm->excludes(opt_rabi);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sweep) return cmd_reflection_sweep(resolve(sweep_args), std::cout);
    if (*sat) return cmd_saturation(resolve(sat_args), std::cout);
    if (*side) return cmd_sidebands(resolve(side_args), std::cout);
    if (*emis) return cmd_emission(resolve(emis_args), std::cout);
    if (*fit) return cmd_fit(trace_path, fit_csv, std::cout);
    if (*cal) {
      const double w = hz_to_rad(cal_freq), g = hz_to_rad(cal_gamma);
      if (*opt_rabi) {
        const double dbm = rabi_to_dbm(hz_to_rad(cal_rabi_hz), w, g);
        std::printf("power_dbm = %.10g\npower_w = %.10e\n", dbm, dbm_to_watts(dbm));
        return kExitOk;
      }
      if (!*opt_dbm) throw std::runtime_error("calibrate needs --dbm or --rabi-hz");
      PowerSpec spec{cal_dbm, ReferencePlane::Sample, std::nullopt};
      if (*opt_att) spec = PowerSpec{cal_dbm, ReferencePlane::Generator, cal_atten};
      const double at_sample = at_sample_power(spec).value_dbm;
      std::printf("sample_power_dbm = %.10g\npower_w = %.10e\nrabi_hz = %.10e\n", at_sample, dbm_to_watts(at_sample),
                  rad_to_hz(dbm_to_rabi(at_sample, w, g)));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
