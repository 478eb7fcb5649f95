#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"
#include "polaronlab/units.hpp"

namespace polaronlab::cli {

struct RunContext {
  Config& config;
  OutputDir& out;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> mode;  // positional argument after the command
  std::ostream& log;
};

void cmd_rabi(RunContext& ctx);
void cmd_indist(RunContext& ctx);
void cmd_hom(RunContext& ctx);
void cmd_fit(RunContext& ctx);
void cmd_kernels(RunContext& ctx);
void cmd_reproduce(RunContext& ctx);

// Shared config sections with the nominal parameter set as defaults.
PhononCoupling read_phonons(Section s);
EmitterParams read_emitter(Section s);
double read_pulse_fwhm(Section s);
ChargeNoise read_charge_noise(Section s, const ChargeNoise& fallback);
PumpLevel read_pump(Section s);

/// Picks the mode from the positional argument or the config key, which
/// must agree when both are given.
std::string resolve_mode(RunContext& ctx, Section root, const std::string& key,
                         const std::string& fallback, const std::vector<std::string>& allowed);

void write_table(OutputDir& out, const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns);

/// "5.6" -> "5.6", "17.5" -> "17.5", "20" -> "20"; used in file names.
std::string label(double v);

inline const std::vector<double>& standard_temperatures() {
  static const std::vector<double> t{5.6, 10.0, 15.0, 17.5, 20.0};
  return t;
}

}  // namespace polaronlab::cli
