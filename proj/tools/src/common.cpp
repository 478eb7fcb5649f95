#include <charconv>
#include <sstream>

#include "commands.hpp"
#include "polaronlab/csv.hpp"

namespace polaronlab::cli {

PhononCoupling read_phonons(Section s) {
  const auto d = PhononCoupling::nominal();
  const bool enabled = s.flag("enabled", true);
  const double alpha = s.non_negative("alpha_per_ps", d.alpha());
  const double wc = s.positive("omega_c_per_ps", d.omega_c());
  const double mu = s.non_negative("mu_ps2", d.mu());
  return {enabled ? alpha : 0.0, wc, mu};
}

EmitterParams read_emitter(Section s) {
  return EmitterParams::from_lifetime_ps(s.positive("t1_ps", 730.0));
}

double read_pulse_fwhm(Section s) { return s.positive("fwhm_ps", 1.2); }

ChargeNoise read_charge_noise(Section s, const ChargeNoise& fallback) {
  const double g0 = s.non_negative("gamma0_uev", fallback.gamma0_uev());
  const double tc = s.positive("tau_c_ns", fallback.tau_c_ns());
  return {g0, tc};
}

PumpLevel read_pump(Section s) {
  return PumpLevel(1.0 / s.positive("relaxation_time_ps", 53.0));
}

std::string resolve_mode(RunContext& ctx, Section root, const std::string& key,
                         const std::string& fallback, const std::vector<std::string>& allowed) {
  if (ctx.mode && root.has(key)) {
    const std::string from_config = root.choice(key, fallback, allowed);
    if (from_config != *ctx.mode) {
      throw ConfigError(key + " is '" + from_config + "' in the config but '" + *ctx.mode +
                        "' on the command line");
    }
    return from_config;
  }
  return root.choice(key, ctx.mode.value_or(fallback), allowed);
}

void write_table(OutputDir& out, const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns) {
  out.write(name, [&](std::ostream& os) { csv::write(os, header, columns); });
}

std::string label(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace polaronlab::cli
