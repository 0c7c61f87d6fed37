#include "mirroramp/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mirroramp/csv.hpp"
#include "mirroramp/parallel.hpp"

namespace mirroramp {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"model",
       {"charging_energy_hz", "josephson_energy_hz", "levels", "measured_transitions_hz", "relaxation_hz",
        "dephasing_hz", "level_mode", "rate_scaling", "relaxation_list_hz", "dephasing_list_hz"}},
      {"drive",
       {"pump_frequency_hz", "pump_on", "photon_order", "pump_power_dbm", "probe_power_dbm", "reference_plane"}},
      {"calibration", {"pump_line_attenuation_db", "probe_line_attenuation_db"}},
      {"sweep",
       {"frequency_start_hz", "frequency_stop_hz", "frequency_step_hz", "powers_dbm", "power_start_dbm",
        "power_stop_dbm", "power_step_dbm", "method", "harmonics", "max_harmonics", "harmonic_tolerance",
        "band_low_hz", "band_high_hz", "strength_threshold"}},
      {"engine", {"cross_mode", "reflection_convention", "workers"}},
      {"output", {"directory", "prefix", "preview"}},
  };
  return s;
}

const std::set<std::string> kRequiredSections = {"model", "drive", "sweep", "engine", "output"};

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::ConfigError, where + ": " + what);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& where, const std::string& raw) {
  const std::string v = trim(raw);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    config_error(where, "expected a number, got '" + raw + "'");
  }
}

int parse_int(const std::string& where, const std::string& raw) {
  const double d = parse_double(where, raw);
  if (d != std::floor(d) || std::abs(d) > 1e9) config_error(where, "expected an integer, got '" + raw + "'");
  return static_cast<int>(d);
}

bool parse_bool(const std::string& where, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  config_error(where, "expected true/false, got '" + raw + "'");
}

std::vector<double> parse_list(const std::string& where, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_double(where, cell));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

}  // namespace

ConfigTable parse_config_text(const std::string& text, const std::string& origin) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::ConfigError, origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  ConfigTable table;
  for (const auto& [section, keys] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) config_error(origin, "unknown section [" + section + "]");
    if (keys.empty() && !keys.data().empty()) config_error(origin, "key '" + section + "' outside any section");
    auto& dst = table[section];
    for (const auto& [key, node] : keys) {
      if (!it->second.count(key)) config_error(origin, "unknown key '" + section + "." + key + "'");
      dst[key] = trim(node.data());
    }
  }
  return table;
}

ConfigTable load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

void apply_override(ConfigTable& table, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    config_error("--set", "expected section.key=value, got '" + assignment + "'");
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  auto it = schema().find(section);
  if (it == schema().end() || !it->second.count(key)) config_error("--set", "unknown key '" + section + "." + key + "'");
  table[section][key] = trim(assignment.substr(eq + 1));
}

RunConfig RunConfig::from_table(const ConfigTable& table) {
  for (const auto& s : kRequiredSections)
    if (!table.count(s)) config_error("config", "missing section [" + s + "]");
  RunConfig c;
  auto get = [&](const std::string& section, const std::string& key) -> const std::string* {
    auto s = table.find(section);
    if (s == table.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  auto num = [&](const char* section, const char* key, double& dst) {
    if (auto* v = get(section, key)) dst = parse_double(std::string(section) + "." + key, *v);
  };
  auto integer = [&](const char* section, const char* key, int& dst) {
    if (auto* v = get(section, key)) dst = parse_int(std::string(section) + "." + key, *v);
  };
  auto boolean = [&](const char* section, const char* key, bool& dst) {
    if (auto* v = get(section, key)) dst = parse_bool(std::string(section) + "." + key, *v);
  };
  auto list = [&](const char* section, const char* key, std::vector<double>& dst) {
    if (auto* v = get(section, key)) dst = parse_list(std::string(section) + "." + key, *v);
  };
  auto choice = [&](const char* section, const char* key, const std::map<std::string, int>& options) -> int {
    auto* v = get(section, key);
    if (!v) return -1;
    auto it = options.find(*v);
    if (it == options.end()) config_error(std::string(section) + "." + key, "unknown value '" + *v + "'");
    return it->second;
  };

  auto& p = c.params;
  num("model", "charging_energy_hz", p.charging_energy_hz);
  num("model", "josephson_energy_hz", p.josephson_energy_hz);
  integer("model", "levels", p.levels);
  list("model", "measured_transitions_hz", p.measured_transitions_hz);
  num("model", "relaxation_hz", p.relaxation_hz);
  num("model", "dephasing_hz", p.dephasing_hz);
  if (int v = choice("model", "level_mode", {{"auto", 0}, {"measured", 1}, {"analytic", 2}}); v >= 0)
    c.level_mode = static_cast<LevelMode>(v);
  if (int v = choice("model", "rate_scaling", {{"harmonic", 0}, {"explicit", 1}}); v >= 0)
    c.rate_scaling = static_cast<RateScaling>(v);
  list("model", "relaxation_list_hz", c.relaxation_list_hz);
  list("model", "dephasing_list_hz", c.dephasing_list_hz);

  num("drive", "pump_frequency_hz", c.pump_frequency_hz);
  boolean("drive", "pump_on", c.pump_on);
  integer("drive", "photon_order", c.photon_order);
  num("drive", "pump_power_dbm", c.pump_power_dbm);
  num("drive", "probe_power_dbm", c.probe_power_dbm);
  if (int v = choice("drive", "reference_plane", {{"generator", 0}, {"sample", 1}}); v >= 0)
    c.reference_plane = static_cast<ReferencePlane>(v);

  if (auto* v = get("calibration", "pump_line_attenuation_db"))
    c.pump_line_attenuation_db = parse_double("calibration.pump_line_attenuation_db", *v);
  if (auto* v = get("calibration", "probe_line_attenuation_db"))
    c.probe_line_attenuation_db = parse_double("calibration.probe_line_attenuation_db", *v);

  num("sweep", "frequency_start_hz", c.frequency_start_hz);
  num("sweep", "frequency_stop_hz", c.frequency_stop_hz);
  num("sweep", "frequency_step_hz", c.frequency_step_hz);
  list("sweep", "powers_dbm", c.powers_dbm);
  num("sweep", "power_start_dbm", c.power_start_dbm);
  num("sweep", "power_stop_dbm", c.power_stop_dbm);
  num("sweep", "power_step_dbm", c.power_step_dbm);
  if (int v = choice("sweep", "method", {{"linear", 0}, {"harmonic", 1}, {"single_tone", 2}}); v >= 0)
    c.method = static_cast<ReflectionMethod>(v);
  integer("sweep", "harmonics", c.harmonics.cutoff);
  integer("sweep", "max_harmonics", c.harmonics.max_cutoff);
  num("sweep", "harmonic_tolerance", c.harmonics.tolerance);
  num("sweep", "band_low_hz", c.catalog.band_low_hz);
  if (auto* v = get("sweep", "band_high_hz"))
    c.catalog.band_high_hz = trim(*v) == "inf" ? std::numeric_limits<double>::infinity()
                                                : parse_double("sweep.band_high_hz", *v);
  num("sweep", "strength_threshold", c.catalog.strength_threshold);

  if (int v = choice("engine", "cross_mode", {{"geometric", 0}, {"arithmetic", 1}}); v >= 0)
    c.cross_mode = static_cast<CrossMode>(v);
  if (int v = choice("engine", "reflection_convention", {{"input_output", 0}, {"printed", 1}}); v >= 0)
    c.convention = static_cast<ReflectionConvention>(v);
  integer("engine", "workers", c.workers);

  if (auto* v = get("output", "directory")) c.directory = *v;
  if (auto* v = get("output", "prefix")) c.prefix = *v;
  boolean("output", "preview", c.preview);

  // Semantic checks.
  try {
    c.params.validate();
    (void)c.model();
  } catch (const Error& e) {
    config_error("model", e.what());
  }
  if (c.frequency_step_hz <= 0.0 || c.frequency_stop_hz < c.frequency_start_hz) config_error("sweep", "empty sweep axis");
  if (c.powers_dbm.empty() && (c.power_step_dbm <= 0.0 || c.power_stop_dbm < c.power_start_dbm))
    config_error("sweep", "empty sweep axis");
  if (c.harmonics.cutoff < 1 || c.harmonics.max_cutoff < c.harmonics.cutoff + 2)
    config_error("sweep", "harmonics must be >= 1 and max_harmonics >= harmonics + 2");
  if (c.pump_frequency_hz <= 0.0) config_error("drive.pump_frequency_hz", "must be positive");
  if (c.photon_order < 1) config_error("drive.photon_order", "must be >= 1");
  if (c.workers < 0) config_error("engine.workers", "must be >= 0");
  if (c.prefix.empty()) config_error("output.prefix", "must not be empty");
  if (c.reference_plane == ReferencePlane::Generator &&
      (!c.pump_line_attenuation_db || !c.probe_line_attenuation_db))
    config_error("calibration", "generator reference plane needs pump and probe line attenuation");
  return c;
}

std::string RunConfig::resolved_text() const {
  std::ostringstream o;
  const auto& p = params;
  static const char* level_modes[] = {"auto", "measured", "analytic"};
  o << "[model]\n";
  o << "charging_energy_hz = " << fmt(p.charging_energy_hz) << "\n";
  o << "josephson_energy_hz = " << fmt(p.josephson_energy_hz) << "\n";
  o << "levels = " << p.levels << "\n";
  if (!p.measured_transitions_hz.empty()) o << "measured_transitions_hz = " << fmt_list(p.measured_transitions_hz) << "\n";
  o << "relaxation_hz = " << fmt(p.relaxation_hz) << "\n";
  o << "dephasing_hz = " << fmt(p.dephasing_hz) << "\n";
  o << "level_mode = " << level_modes[static_cast<int>(level_mode)] << "\n";
  o << "rate_scaling = " << (rate_scaling == RateScaling::Harmonic ? "harmonic" : "explicit") << "\n";
  if (!relaxation_list_hz.empty()) o << "relaxation_list_hz = " << fmt_list(relaxation_list_hz) << "\n";
  if (!dephasing_list_hz.empty()) o << "dephasing_list_hz = " << fmt_list(dephasing_list_hz) << "\n";
  o << "\n[drive]\n";
  o << "pump_frequency_hz = " << fmt(pump_frequency_hz) << "\n";
  o << "pump_on = " << (pump_on ? "true" : "false") << "\n";
  o << "photon_order = " << photon_order << "\n";
  o << "pump_power_dbm = " << fmt(pump_power_dbm) << "\n";
  o << "probe_power_dbm = " << fmt(probe_power_dbm) << "\n";
  o << "reference_plane = " << (reference_plane == ReferencePlane::Sample ? "sample" : "generator") << "\n";
  if (pump_line_attenuation_db || probe_line_attenuation_db) {
    o << "\n[calibration]\n";
    if (pump_line_attenuation_db) o << "pump_line_attenuation_db = " << fmt(*pump_line_attenuation_db) << "\n";
    if (probe_line_attenuation_db) o << "probe_line_attenuation_db = " << fmt(*probe_line_attenuation_db) << "\n";
  }
  static const char* methods[] = {"linear", "harmonic", "single_tone"};
  o << "\n[sweep]\n";
  o << "frequency_start_hz = " << fmt(frequency_start_hz) << "\n";
  o << "frequency_stop_hz = " << fmt(frequency_stop_hz) << "\n";
  o << "frequency_step_hz = " << fmt(frequency_step_hz) << "\n";
  if (!powers_dbm.empty()) o << "powers_dbm = " << fmt_list(powers_dbm) << "\n";
  o << "power_start_dbm = " << fmt(power_start_dbm) << "\n";
  o << "power_stop_dbm = " << fmt(power_stop_dbm) << "\n";
  o << "power_step_dbm = " << fmt(power_step_dbm) << "\n";
  o << "method = " << methods[static_cast<int>(method)] << "\n";
  o << "harmonics = " << harmonics.cutoff << "\n";
  o << "max_harmonics = " << harmonics.max_cutoff << "\n";
  o << "harmonic_tolerance = " << fmt(harmonics.tolerance) << "\n";
  o << "band_low_hz = " << fmt(catalog.band_low_hz) << "\n";
  o << "band_high_hz = " << (std::isinf(catalog.band_high_hz) ? std::string("inf") : fmt(catalog.band_high_hz)) << "\n";
  o << "strength_threshold = " << fmt(catalog.strength_threshold) << "\n";
  o << "\n[engine]\n";
  o << "cross_mode = " << (cross_mode == CrossMode::GeometricMean ? "geometric" : "arithmetic") << "\n";
  o << "reflection_convention = " << (convention == ReflectionConvention::InputOutput ? "input_output" : "printed") << "\n";
  o << "\n[output]\n";
  o << "directory = " << directory.string() << "\n";
  o << "prefix = " << prefix << "\n";
  o << "preview = " << (preview ? "true" : "false") << "\n";
  return o.str();
}

std::string RunConfig::hash() const { return hex64(fnv1a64(resolved_text())); }

Model RunConfig::model() const {
  Model m;
  m.params = params;
  m.levels = derive_level_frequencies(params, level_mode);
  m.rates = build_rate_table(params, rate_scaling, relaxation_list_hz, dephasing_list_hz);
  m.cross_mode = cross_mode;
  require(m.gamma10() > 0.0, "Gamma10 must be positive");
  return m;
}

std::vector<double> uniform_grid(double start, double stop, double step) {
  require(step > 0.0 && stop >= start, "empty sweep axis");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i) g[i] = start + i * step;
  return g;
}

std::vector<double> RunConfig::frequency_grid_hz() const {
  return uniform_grid(frequency_start_hz, frequency_stop_hz, frequency_step_hz);
}

std::vector<double> RunConfig::power_grid_dbm() const {
  return powers_dbm.empty() ? uniform_grid(power_start_dbm, power_stop_dbm, power_step_dbm) : powers_dbm;
}

int RunConfig::effective_workers() const { return workers > 0 ? workers : default_workers(); }

double RunConfig::pump_at_sample_dbm(double dbm) const {
  return at_sample_power(PowerSpec{dbm, reference_plane, pump_line_attenuation_db}).value_dbm;
}

double RunConfig::probe_at_sample_dbm(double dbm) const {
  return at_sample_power(PowerSpec{dbm, reference_plane, probe_line_attenuation_db}).value_dbm;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  ConfigTable t = load_config_file(path);
  for (const auto& o : overrides) apply_override(t, o);
  return RunConfig::from_table(t);
}

}  // namespace mirroramp
