#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>

#include "commands.hpp"
#include "polaronlab/coherence.hpp"
#include "polaronlab/dynamics.hpp"
#include "polaronlab/parallel.hpp"
#include "polaronlab/phonon.hpp"

namespace polaronlab::cli {

namespace {

struct IndistSetup {
  std::string axis;
  bool jitter = false;
  PhononCoupling coupling = PhononCoupling::nominal();
  EmitterParams emitter{1.0 / 730.0};
  PumpLevel pump{1.0 / 53.0};
  std::optional<ChargeNoise> noise;
  double temperature = 5.6;
  std::optional<double> delay_ns;
  double fwhm = 1.2;
  std::vector<double> values;
};

struct Row {
  double analytic = 0.0, oracle = 0.0, jitter = 1.0, dephasing = 1.0;
};

double total_dephasing(const IndistSetup& s, double temperature, std::optional<double> delay) {
  double g = phonon::virtual_dephasing_rate(s.coupling, temperature);
  if (s.noise && delay) {
    g += units::rate_uev_to_psinv(coherence::charge_noise_rate(*delay, *s.noise));
  }
  return g;
}

Row evaluate(const IndistSetup& s, double x) {
  const double temperature = s.axis == "temperature" ? x : s.temperature;
  const std::optional<double> delay = s.axis == "delay" ? std::optional<double>(x) : s.delay_ns;
  const double gamma = total_dephasing(s, temperature, delay);
  const double big_gamma = s.emitter.gamma_emission();
  Row r;
  if (s.jitter) {
    const auto closed = coherence::indistinguishability_with_jitter(s.pump.gamma_relax(), big_gamma, gamma);
    r.analytic = closed.value;
    r.jitter = closed.jitter_factor;
    r.dephasing = closed.dephasing_factor;
    r.oracle = coherence::three_level_simulation(s.pump, s.emitter, gamma).value;
    return r;
  }
  r.analytic = coherence::indistinguishability_resonant(big_gamma, gamma);
  r.dephasing = r.analytic;
  if (s.axis == "power") {
    const auto pulse = dynamics::simulate_pulse(PulseSpec(x, s.fwhm), s.coupling, temperature,
                                                s.emitter);
    r.oracle = coherence::indistinguishability_after_pulse(pulse, big_gamma, gamma);
  } else {
    r.oracle = coherence::indistinguishability_oracle(big_gamma, gamma);
  }
  return r;
}

}  // namespace

void cmd_indist(RunContext& ctx) {
  Section root = ctx.config.root();
  IndistSetup s;
  s.axis = resolve_mode(ctx, root, "axis", "temperature", {"temperature", "delay", "power"});
  s.jitter = root.choice("excitation", "resonant", {"resonant", "jitter"}) == "jitter";
  s.coupling = read_phonons(root.child("phonons"));
  s.emitter = read_emitter(root.child("emitter"));
  if (s.jitter) s.pump = read_pump(root.child("pump"));
  s.temperature = root.non_negative("temperature_k", 5.6);
  // charge noise is on by default only where the delay is swept
  const bool noise_on = root.flag("charge_noise_enabled", s.axis == "delay");
  if (noise_on) {
    s.noise = read_charge_noise(root.child("charge_noise"),
                                s.jitter ? ChargeNoise::p_shell() : ChargeNoise::s_shell());
  }
  if (s.axis != "delay" && root.has("delay_ns")) s.delay_ns = root.positive("delay_ns", 12.2);
  if (s.axis == "temperature") {
    s.values = grid(root, "temperatures_k", standard_temperatures());
  } else if (s.axis == "delay") {
    s.values = grid(root, "delays_ns", linspace(2.0, 12.0, 11));
  } else {
    s.fwhm = read_pulse_fwhm(root.child("pulse"));
    s.values = grid(root, "areas_rad", {0.5 * std::numbers::pi, std::numbers::pi,
                                        1.5 * std::numbers::pi});
  }
  ctx.config.finish();

  for (double v : s.values) {
    if (!(v >= 0.0)) throw ConfigError("axis values must be >= 0");
  }
  if (s.noise && s.axis != "delay" && !s.delay_ns) {
    throw ConfigError("charge noise off the delay axis needs delay_ns");
  }

  std::vector<Row> rows(s.values.size());
  parallel_for(s.values.size(), ctx.threads, [&](std::size_t i) { rows[i] = evaluate(s, s.values[i]); });

  std::vector<std::vector<double>> cols(5);
  cols[0] = s.values;
  for (const auto& r : rows) {
    cols[1].push_back(r.analytic);
    cols[2].push_back(r.oracle);
    cols[3].push_back(r.jitter);
    cols[4].push_back(r.dephasing);
  }
  const std::string first = s.axis == "temperature" ? "temperature_k"
                            : s.axis == "delay"     ? "delay_ns"
                                                    : "area_rad";
  const std::string name = "indist_" + s.axis + ".csv";
  write_table(ctx.out, name, {first, "i_analytic", "i_oracle", "jitter_factor", "dephasing_factor"},
              cols);
  ctx.out.write_json("summary.json",
                     {{"axis", s.axis},
                      {"excitation", s.jitter ? "jitter" : "resonant"},
                      {"gamma_emission_per_ps", s.emitter.gamma_emission()},
                      {"csv", name},
                      {"max_oracle_deviation",
                       [&] {
                         double d = 0.0;
                         for (const auto& r : rows) d = std::max(d, std::abs(r.oracle - r.analytic));
                         return d;
                       }()}});
  ctx.log << "indist: " << s.values.size() << " points on the " << s.axis << " axis\n";
}

}  // namespace polaronlab::cli
