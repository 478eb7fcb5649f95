#include <cmath>
#include <numbers>
#include <ostream>

#include "commands.hpp"
#include "polaronlab/coherence.hpp"
#include "polaronlab/dynamics.hpp"
#include "polaronlab/parallel.hpp"
#include "polaronlab/phonon.hpp"

namespace polaronlab::cli {

namespace {

constexpr double pi = std::numbers::pi;

struct Presets {
  PhononCoupling coupling = PhononCoupling::nominal();
  EmitterParams emitter = EmitterParams::from_lifetime_ps(730.0);
  PumpLevel pump{1.0 / 53.0};
  double fwhm = 1.2;
  double temperature = 5.6;
};

double resonant_at(const Presets& p, double temperature, std::optional<ChargeNoise> noise,
                   double delay_ns) {
  double g = phonon::virtual_dephasing_rate(p.coupling, temperature);
  if (noise) g += units::rate_uev_to_psinv(coherence::charge_noise_rate(delay_ns, *noise));
  return coherence::indistinguishability_resonant(p.emitter.gamma_emission(), g);
}

void fig3b(RunContext& ctx, const Presets& p, std::size_t n) {
  const auto areas = linspace(0.1 * pi, 4.0 * pi, n);
  const auto& temps = standard_temperatures();
  std::vector<std::vector<double>> cols{areas};
  std::vector<std::string> header{"area_rad"};
  for (double t : temps) {
    const dynamics::PolaronModel model(p.coupling, t, p.emitter, {});
    const auto scan = dynamics::rabi_scan(areas, model, PulseSpec(pi, p.fwhm), {}, ctx.threads);
    cols.push_back(scan.zpl_intensity);
    header.push_back("zpl_intensity_T" + label(t) + "K");
  }
  write_table(ctx.out, "fig3b.csv", header, cols);
}

void fig4c(RunContext& ctx, const Presets& p, std::size_t n) {
  const auto temps = linspace(4.0, 22.0, n);
  std::vector<double> i(temps.size());
  parallel_for(temps.size(), ctx.threads,
               [&](std::size_t k) { i[k] = resonant_at(p, temps[k], std::nullopt, 0.0); });
  write_table(ctx.out, "fig4c.csv", {"temperature_k", "indistinguishability"}, {temps, i});
  std::vector<double> at_standard;
  for (double t : standard_temperatures()) at_standard.push_back(resonant_at(p, t, std::nullopt, 0.0));
  write_table(ctx.out, "fig4c_points.csv", {"temperature_k", "indistinguishability"},
              {standard_temperatures(), at_standard});
}

void fig5a(RunContext& ctx, const Presets& p, std::size_t n) {
  const auto areas = linspace(0.25 * pi, 2.0 * pi, n);
  const double big_gamma = p.emitter.gamma_emission();
  const double g = phonon::virtual_dephasing_rate(p.coupling, p.temperature);
  std::vector<double> res(areas.size()), jit(areas.size());
  const double jitter =
      coherence::indistinguishability_with_jitter(p.pump.gamma_relax(), big_gamma, g).value;
  parallel_for(areas.size(), ctx.threads, [&](std::size_t k) {
    const auto pulse = dynamics::simulate_pulse(PulseSpec(areas[k], p.fwhm), p.coupling,
                                                p.temperature, p.emitter);
    res[k] = coherence::indistinguishability_after_pulse(pulse, big_gamma, g);
    jit[k] = jitter;
  });
  write_table(ctx.out, "fig5a.csv", {"area_rad", "i_resonant", "i_p_shell"}, {areas, res, jit});
}

void fig5b(RunContext& ctx, const Presets& p, std::size_t n) {
  const auto delays = linspace(2.0, 12.0, n);
  const double big_gamma = p.emitter.gamma_emission();
  const double g = phonon::virtual_dephasing_rate(p.coupling, p.temperature);
  std::vector<double> s(delays.size()), pp(delays.size());
  for (std::size_t k = 0; k < delays.size(); ++k) {
    s[k] = resonant_at(p, p.temperature, ChargeNoise::s_shell(), delays[k]);
    const double gp = g + units::rate_uev_to_psinv(coherence::charge_noise_rate(delays[k], ChargeNoise::p_shell()));
    pp[k] = coherence::indistinguishability_with_jitter(p.pump.gamma_relax(), big_gamma, gp).value;
  }
  write_table(ctx.out, "fig5b.csv", {"delay_ns", "i_s_shell", "i_p_shell"}, {delays, s, pp});
}

}  // namespace

void cmd_reproduce(RunContext& ctx) {
  Section root = ctx.config.root();
  const auto figure = resolve_mode(ctx, root, "figure", "fig4c", {"fig3b", "fig4c", "fig5a", "fig5b"});
  const std::size_t defaults = figure == "fig3b" ? 40 : figure == "fig5a" ? 8 : 51;
  const std::size_t n = root.count("points", defaults);
  ctx.config.finish();
  if (n < 2) throw ConfigError("points must be >= 2");

  const Presets p;
  if (figure == "fig3b") {
    fig3b(ctx, p, n);
  } else if (figure == "fig4c") {
    fig4c(ctx, p, n);
  } else if (figure == "fig5a") {
    fig5a(ctx, p, n);
  } else {
    fig5b(ctx, p, n);
  }
  ctx.out.write_json("summary.json", {{"figure", figure},
                                      {"points", n},
                                      {"alpha_per_ps", p.coupling.alpha()},
                                      {"omega_c_per_ps", p.coupling.omega_c()},
                                      {"mu_ps2", p.coupling.mu()},
                                      {"t1_ps", p.emitter.lifetime_ps()}});
  ctx.log << "reproduce: " << figure << " done\n";
}

}  // namespace polaronlab::cli
