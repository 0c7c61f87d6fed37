// Python bindings. Frequencies are Hz and powers dBm at this boundary.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>

#include "mirroramp/calibration.hpp"
#include "mirroramp/commands.hpp"
#include "mirroramp/csv.hpp"
#include "mirroramp/dressed.hpp"
#include "mirroramp/emission.hpp"
#include "mirroramp/fitting.hpp"
#include "mirroramp/probe_response.hpp"
#include "mirroramp/sweep.hpp"

namespace py = pybind11;
using namespace mirroramp;

namespace {

PumpConfig make_pump(const Model& m, double frequency_hz, double power_dbm, int photon_order, bool on) {
  const double w = hz_to_rad(frequency_hz);
  return PumpConfig{w, on ? dbm_to_rabi(power_dbm, w, m.gamma10()) : 0.0, photon_order};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pumped multi-level transmon in front of a mirror";
  m.attr("__version__") = kToolVersion;

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&] { return py::object(py::exception<Error>(m, "MirrorampError")); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = error_type.get_stored();
      py::object inst = type(e.what());
      inst.attr("code") = to_string(e.code());
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  py::enum_<CrossMode>(m, "CrossMode")
      .value("GeometricMean", CrossMode::GeometricMean)
      .value("ArithmeticMeanAsPrinted", CrossMode::ArithmeticMeanAsPrinted);
  py::enum_<LevelMode>(m, "LevelMode")
      .value("Auto", LevelMode::Auto)
      .value("Measured", LevelMode::Measured)
      .value("Analytic", LevelMode::Analytic);
  py::enum_<ReflectionConvention>(m, "ReflectionConvention")
      .value("InputOutput", ReflectionConvention::InputOutput)
      .value("PrintedForm", ReflectionConvention::PrintedForm);

  py::class_<TransmonParams>(m, "TransmonParams")
      .def(py::init<>())
      .def_readwrite("charging_energy_hz", &TransmonParams::charging_energy_hz)
      .def_readwrite("josephson_energy_hz", &TransmonParams::josephson_energy_hz)
      .def_readwrite("levels", &TransmonParams::levels)
      .def_readwrite("measured_transitions_hz", &TransmonParams::measured_transitions_hz)
      .def_readwrite("relaxation_hz", &TransmonParams::relaxation_hz)
      .def_readwrite("dephasing_hz", &TransmonParams::dephasing_hz)
      .def("decoherence_hz", &TransmonParams::decoherence_hz)
      .def_static("reference_device", &TransmonParams::reference_device);

  py::class_<Model>(m, "Model")
      .def(py::init([](const TransmonParams& p, CrossMode mode, LevelMode level_mode) {
             return Model::from_params(p, mode, level_mode);
           }),
           py::arg("params") = TransmonParams::reference_device(), py::arg("cross_mode") = CrossMode::GeometricMean,
           py::arg("level_mode") = LevelMode::Auto)
      .def_property_readonly("dim", &Model::dim)
      .def_property_readonly("params", [](const Model& self) { return self.params; })
      .def_property_readonly("omega10_hz", [](const Model& self) { return rad_to_hz(self.omega10()); })
      .def_property_readonly("gamma10_hz", [](const Model& self) { return rad_to_hz(self.gamma10()); })
      .def_property_readonly("level_frequencies_hz", [](const Model& self) {
        std::vector<double> f;
        for (double w : self.levels.omega) f.push_back(rad_to_hz(w));
        return f;
      });

  m.def("dbm_to_rabi_hz", [](double dbm, double f_hz, double gamma_hz) {
    return rad_to_hz(dbm_to_rabi(dbm, hz_to_rad(f_hz), hz_to_rad(gamma_hz)));
  }, py::arg("power_dbm"), py::arg("frequency_hz"), py::arg("gamma10_hz"));
  m.def("rabi_hz_to_dbm", [](double rabi_hz, double f_hz, double gamma_hz) {
    return rabi_to_dbm(hz_to_rad(rabi_hz), hz_to_rad(f_hz), hz_to_rad(gamma_hz));
  }, py::arg("rabi_hz"), py::arg("frequency_hz"), py::arg("gamma10_hz"));

  m.def("steady_state", [](const Model& model, double pump_hz, double pump_dbm, int order, bool pump_on) {
    return steady_state(model.pumped_liouvillian(make_pump(model, pump_hz, pump_dbm, order, pump_on))).matrix;
  }, py::arg("model"), py::arg("pump_hz"), py::arg("pump_dbm"), py::arg("photon_order") = 1, py::arg("pump_on") = true);

  m.def("linear_response", [](const Model& model, double pump_hz, double pump_dbm, int order,
                              const std::vector<double>& probe_hz, bool pump_on, ReflectionConvention conv) {
    const PumpedSystem sys(model, make_pump(model, pump_hz, pump_dbm, order, pump_on), conv);
    ShiftedSolver solver(sys.liouvillian().matrix);
    Eigen::VectorXcd r(probe_hz.size());
    for (std::size_t k = 0; k < probe_hz.size(); ++k) r(k) = sys.linear_response(hz_to_rad(probe_hz[k]), solver).r;
    return r;
  }, py::arg("model"), py::arg("pump_hz"), py::arg("pump_dbm"), py::arg("photon_order"), py::arg("probe_hz"),
     py::arg("pump_on") = true, py::arg("convention") = ReflectionConvention::InputOutput);

  m.def("harmonic_balance", [](const Model& model, double pump_hz, double pump_dbm, int order, double probe_hz,
                               double probe_dbm, double tolerance) {
    const PumpedSystem sys(model, make_pump(model, pump_hz, pump_dbm, order, true));
    const double w = hz_to_rad(probe_hz);
    const auto p = sys.harmonic_balance(ProbeConfig{w, dbm_to_rabi(probe_dbm, w, model.gamma10())},
                                        HarmonicOptions{1, 25, tolerance});
    return py::make_tuple(p.r, p.harmonics);
  }, py::arg("model"), py::arg("pump_hz"), py::arg("pump_dbm"), py::arg("photon_order"), py::arg("probe_hz"),
     py::arg("probe_dbm"), py::arg("tolerance") = 1e-4);

  m.def("single_tone", [](const Model& model, double probe_hz, double probe_dbm) {
    const double w = hz_to_rad(probe_hz);
    return single_tone_reflection(model, ProbeConfig{w, dbm_to_rabi(probe_dbm, w, model.gamma10())}).r;
  }, py::arg("model"), py::arg("probe_hz"), py::arg("probe_dbm"));

  m.def("reflection_map", [](const Model& model, double pump_hz, int order, const std::vector<double>& probe_hz,
                             const std::vector<double>& pump_dbm, int workers) {
    SweepRequest req;
    req.model = model;
    req.pump_frequency_hz = pump_hz;
    req.photon_order = order;
    req.probe_frequencies_hz = probe_hz;
    req.powers_dbm = pump_dbm;
    req.workers = workers;
    SweepResult s;
    {
      py::gil_scoped_release release;
      s = reflection_sweep(req);
    }
    Eigen::MatrixXcd out(s.rows(), s.axis1.size());
    for (std::size_t i = 0; i < s.rows(); ++i)
      for (std::size_t j = 0; j < s.axis1.size(); ++j) out(i, j) = s.at(j, i);
    return out;
  }, "Complex r with rows = pump powers, columns = probe frequencies; flagged cells are NaN.", py::arg("model"),
     py::arg("pump_hz"), py::arg("photon_order"), py::arg("probe_hz"), py::arg("pump_dbm"), py::arg("workers") = 1);

  m.def("sideband_catalog", [](const Model& model, double pump_hz, double pump_dbm, int order, double band_low_hz,
                               double band_high_hz) {
    CatalogOptions opt;
    opt.band_low_hz = band_low_hz;
    opt.band_high_hz = band_high_hz;
    const auto cat = sideband_catalog(model, make_pump(model, pump_hz, pump_dbm, order, true), opt);
    py::list rows;
    for (const auto& e : cat.entries) {
      py::dict d;
      d["i"] = e.from;
      d["j"] = e.to;
      d["probe_hz"] = e.probe_frequency_hz;
      d["classification"] = to_string(e.classification);
      d["strength"] = e.strength;
      d["r_mag"] = e.r_magnitude;
      d["inverted"] = e.inverted;
      rows.append(d);
    }
    return rows;
  }, py::arg("model"), py::arg("pump_hz"), py::arg("pump_dbm"), py::arg("photon_order"), py::arg("band_low_hz") = 0.0,
     py::arg("band_high_hz") = std::numeric_limits<double>::infinity());

  m.def("idealized_sideband_count", &idealized_sideband_count, py::arg("photon_order"));

  m.def("emission_spectrum", [](const Model& model, double pump_hz, double pump_dbm, int order,
                                const std::vector<double>& freq_hz, int workers) {
    SpectrumResult s;
    {
      py::gil_scoped_release release;
      s = emission_spectrum(model, make_pump(model, pump_hz, pump_dbm, order, true), freq_hz, workers);
    }
    return py::make_tuple(Eigen::VectorXd::Map(s.density.data(), s.density.size()), s.incoherent_flux);
  }, "Returns (density per Hz, incoherent photon flux).", py::arg("model"), py::arg("pump_hz"), py::arg("pump_dbm"),
     py::arg("photon_order"), py::arg("freq_hz"), py::arg("workers") = 1);

  m.def("fit_circle", [](const std::vector<double>& freq_hz, const std::vector<std::complex<double>>& r) {
    ReflectionTrace t;
    t.frequency_hz = freq_hz;
    t.r = r;
    const FitReport f = fit_circle(t);
    py::dict d;
    d["omega10_hz"] = f.omega10_hz;
    d["relaxation_hz"] = f.relaxation_hz;
    d["decoherence_hz"] = f.decoherence_hz;
    d["dephasing_hz"] = f.dephasing_hz;
    d["circle_radius"] = f.circle_radius;
    d["relative_residual"] = f.relative_residual;
    d["covariance"] = f.covariance;
    return d;
  }, py::arg("freq_hz"), py::arg("r"));

  m.def("run_config", [](const std::string& command, const std::string& path, const std::vector<std::string>& overrides) {
    const RunConfig c = load_run_config(path, overrides);
    std::ostringstream log;
    int code = 0;
    if (command == "reflection-sweep")
      code = cmd_reflection_sweep(c, log);
    else if (command == "saturation")
      code = cmd_saturation(c, log);
    else if (command == "sidebands")
      code = cmd_sidebands(c, log);
    else if (command == "emission")
      code = cmd_emission(c, log);
    else
      fail(ErrorCode::InvalidArgument, "unknown command " + command);
    return py::make_tuple(code, log.str());
  }, "Runs a config-driven command; returns (exit code, log).", py::arg("command"), py::arg("config"),
     py::arg("overrides") = std::vector<std::string>{});
}
