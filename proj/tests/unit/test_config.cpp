#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mirroramp/commands.hpp"
#include "mirroramp/csv.hpp"

using namespace mirroramp;
namespace fs = std::filesystem;

namespace {
const char* kBase = R"([model]
charging_energy_hz = 228e6
josephson_energy_hz = 13.67e9
levels = 6
measured_transitions_hz = 4.766e9, 4.538e9, 4.287e9, 4.005e9
relaxation_hz = 2.264e6
dephasing_hz = 0.0317e6

[drive]
pump_frequency_hz = 4.530e9
photon_order = 3
pump_power_dbm = -102
probe_power_dbm = -161

[sweep]
frequency_start_hz = 4.70e9
frequency_stop_hz = 4.78e9
frequency_step_hz = 2e6
powers_dbm = -104, -102, -100

[engine]
cross_mode = geometric
workers = 1

[output]
directory = out
prefix = t
)";

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("mirroramp_cfg_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig with(const std::vector<std::string>& overrides) {
  ConfigTable t = parse_config_text(kBase);
  for (const auto& o : overrides) apply_override(t, o);
  return RunConfig::from_table(t);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::None;
}
}  // namespace

TEST_CASE("parse and resolve") {
  const RunConfig c = with({});
  CHECK(c.params.levels == 6);
  CHECK(c.params.measured_transitions_hz.size() == 4);
  CHECK(c.photon_order == 3);
  CHECK(c.power_grid_dbm() == std::vector<double>{-104, -102, -100});
  CHECK(c.frequency_grid_hz().size() == 41);
  CHECK(c.frequency_grid_hz().back() == doctest::Approx(4.78e9));

  // The echoed config parses back to the same run.
  const RunConfig again = RunConfig::from_table(parse_config_text(c.resolved_text()));
  CHECK(again.resolved_text() == c.resolved_text());
  CHECK(again.hash() == c.hash());
  CHECK(with({"engine.workers=4"}).hash() == c.hash());
  CHECK(with({"drive.pump_power_dbm=-101"}).hash() != c.hash());
}

TEST_CASE("overrides") {
  const RunConfig c = with({"drive.photon_order=2", "sweep.method=harmonic", "engine.cross_mode = arithmetic"});
  CHECK(c.photon_order == 2);
  CHECK(c.method == ReflectionMethod::HarmonicBalance);
  CHECK(c.cross_mode == CrossMode::ArithmeticMeanAsPrinted);
  CHECK(code_of([] { with({"drive.nope=1"}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { with({"photon_order=1"}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { with({"sweep.method=magic"}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { with({"drive.photon_order=1.5"}); }) == ErrorCode::ConfigError);
  CHECK(with({"sweep.band_high_hz=inf"}).catalog.band_high_hz == INFINITY);
}

TEST_CASE("strict parsing") {
  CHECK(code_of([] { parse_config_text("[model]\nbogus = 1\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config_text("[nowhere]\nx = 1\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config_text("[model\nlevels = 6\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { RunConfig::from_table(parse_config_text("[model]\nlevels = 6\n")); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { with({"sweep.frequency_stop_hz=4.0e9"}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { with({"drive.reference_plane=generator"}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { with({"model.levels=1"}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { load_config_file("/nonexistent.cfg"); }) == ErrorCode::ConfigError);

  const auto t = parse_config_text(std::string("# leading comment\n; other comment\n") + kBase);
  CHECK(t.at("drive").at("photon_order") == "3");

  const RunConfig g = with({"drive.reference_plane=generator", "calibration.pump_line_attenuation_db=60",
                            "calibration.probe_line_attenuation_db=70"});
  CHECK(g.pump_at_sample_dbm(-40.0) == doctest::Approx(-100.0));
  CHECK(g.probe_at_sample_dbm(-91.0) == doctest::Approx(-161.0));
}

TEST_CASE("uniform grid") {
  CHECK(uniform_grid(0.0, 1.0, 0.25).size() == 5);
  CHECK(uniform_grid(-125.0, -85.0, 0.5).size() == 81);
  CHECK(uniform_grid(1.0, 1.0, 0.1).size() == 1);
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 0.1), Error);
}

TEST_CASE("helpers") {
  CHECK(power_tag(-96.5) == "m96p5");
  CHECK(power_tag(-102.0) == "m102p0");
  CHECK(half_excess_power({-160, -150, -140}, {1.2, 1.15, 1.05}) == doctest::Approx(-145.0));
  CHECK(std::isnan(half_excess_power({-160, -150}, {1.2, 1.15})));
  CHECK(std::isnan(half_excess_power({-160, -150}, {0.9, 0.8})));
  CHECK(format_number(1.0) == "1.0000000000000000e+00");
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CsvWriter w({{"a", "1"}, {"b", "x\ny"}}, {"c1", "c2"});
  w.add_row({"1", "2"});
  CHECK(w.str() == "# a: 1\n# b: x\n#    y\nc1,c2\n1,2\n");
  CHECK_THROWS_AS(w.add_row({"1"}), Error);
}

TEST_CASE("reflection sweep output is independent of the worker count") {
  const auto dir = fresh_dir("sweep");
  std::ostringstream log;
  const RunConfig one = with({"output.directory=" + (dir / "a").string(), "engine.workers=1"});
  const RunConfig two = with({"output.directory=" + (dir / "a").string(), "engine.workers=3"});
  CHECK(cmd_reflection_sweep(one, log) == kExitOk);
  const std::string first = slurp(dir / "a" / "t.csv");
  CHECK(cmd_reflection_sweep(two, log) == kExitOk);
  CHECK(slurp(dir / "a" / "t.csv") == first);
  CHECK(first.find("# config_hash: " + one.hash()) != std::string::npos);
  CHECK(first.find("omega_p_hz,p_pump_dbm,r_mag,r_re,r_im,flag") != std::string::npos);
  CHECK(fs::exists(dir / "a" / "t.resolved.cfg"));
  CHECK(fs::exists(dir / "a" / "t.meta"));
  CHECK(fs::exists(dir / "a" / "t.preview.txt"));

  // Rerunning from the echoed config gives the same bytes.
  const RunConfig echoed = load_run_config(dir / "a" / "t.resolved.cfg");
  CHECK(cmd_reflection_sweep(echoed, log) == kExitOk);
  CHECK(slurp(dir / "a" / "t.csv") == first);
}

TEST_CASE("flagged cells give exit code 2") {
  const auto dir = fresh_dir("flag");
  std::ostringstream log;
  const RunConfig c = with({"output.directory=" + dir.string(), "sweep.frequency_start_hz=4.526e9",
                            "sweep.frequency_stop_hz=4.534e9", "sweep.frequency_step_hz=1e6"});
  CHECK(cmd_reflection_sweep(c, log) == kExitFlagged);
  CHECK(slurp(dir / "t.csv").find("DegenerateDetuning") != std::string::npos);
}

TEST_CASE("saturation, sidebands and emission commands") {
  const auto dir = fresh_dir("cmds");
  std::ostringstream log;
  const RunConfig s = with({"output.directory=" + dir.string(), "output.prefix=sat", "sweep.frequency_start_hz=4.7389e9",
                            "sweep.frequency_stop_hz=4.7389e9", "sweep.powers_dbm=-161, -150, -140, -130, -121"});
  CHECK(cmd_saturation(s, log) == kExitOk);
  CHECK(fs::exists(dir / "sat.csv"));
  CHECK(slurp(dir / "sat_linecut.csv").find("half_excess_power_dbm") != std::string::npos);

  const RunConfig b = with({"output.directory=" + dir.string(), "output.prefix=sb", "sweep.powers_dbm=-102",
                            "sweep.band_low_hz=3.9e9", "sweep.band_high_hz=5.1e9"});
  CHECK(cmd_sidebands(b, log) == kExitOk);
  const std::string cat = slurp(dir / "sb_m102p0.csv");
  CHECK(cat.find("i,j,omega_p_hz,classification,strength,r_mag") != std::string::npos);
  CHECK(fs::exists(dir / "sb_ladder.csv"));

  const RunConfig e = with({"output.directory=" + dir.string(), "output.prefix=em", "sweep.powers_dbm=-96.5"});
  CHECK(cmd_emission(e, log) == kExitOk);
  CHECK(slurp(dir / "em_m96p5.csv").find("freq_hz,density") != std::string::npos);
}

TEST_CASE("fit command") {
  const auto dir = fresh_dir("fit");
  std::ostringstream log;
  std::string good = "freq_hz,re,im\n", flat = "freq_hz,re,im\n";
  const double f10 = 4.766e9, g = 2.264e6, gamma = 1.1637e6;
  for (int k = 0; k <= 100; ++k) {
    const double f = f10 - 10e6 + 0.2e6 * k;
    const std::complex<double> r = 1.0 - g / std::complex<double>(gamma, -(f - f10));
    good += format_number(f) + "," + format_number(r.real()) + "," + format_number(r.imag()) + "\n";
    flat += format_number(f) + ",1,0\n";
  }
  write_text_file(dir / "good.csv", good);
  write_text_file(dir / "flat.csv", flat);
  CHECK(cmd_fit(dir / "good.csv", dir / "good_fit.csv", log) == kExitOk);
  CHECK(fs::exists(dir / "good_fit.csv"));
  CHECK(cmd_fit(dir / "flat.csv", dir / "flat_fit.csv", log) == kExitPoorFit);
}
