#pragma once

#include <iosfwd>

#include "mirroramp/config.hpp"
#include "mirroramp/fitting.hpp"

namespace mirroramp {

// Exit-code contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFatal = 1, kExitFlagged = 2, kExitPoorFit = 3 };

int cmd_reflection_sweep(const RunConfig& config, std::ostream& log);
int cmd_saturation(const RunConfig& config, std::ostream& log);
int cmd_sidebands(const RunConfig& config, std::ostream& log);
int cmd_emission(const RunConfig& config, std::ostream& log);
int cmd_fit(const std::filesystem::path& trace_path, const std::filesystem::path& csv_out, std::ostream& log);

// Power where the amplification excess has fallen to half its low-power value, by linear
// interpolation in dB. Returns NaN when it never falls that far.
double half_excess_power(const std::vector<double>& powers_dbm, const std::vector<double>& magnitudes);

std::string format_fit_report(const FitReport& report);

// File-name fragment for a power, e.g. -96.5 -> "m96p5".
std::string power_tag(double dbm);

}  // namespace mirroramp
