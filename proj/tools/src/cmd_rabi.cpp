#include <cmath>
#include <numbers>
#include <ostream>

#include "commands.hpp"
#include "polaronlab/dynamics.hpp"
#include "polaronlab/estimation.hpp"

namespace polaronlab::cli {

namespace {

dynamics::VirtualDissipator dissipator_from(const std::string& s) {
  if (s == "none") return dynamics::VirtualDissipator::none;
  if (s == "full") return dynamics::VirtualDissipator::full_rates;
  return dynamics::VirtualDissipator::static_rate;
}

}  // namespace

void cmd_rabi(RunContext& ctx) {
  Section root = ctx.config.root();
  const PhononCoupling coupling = read_phonons(root.child("phonons"));
  const EmitterParams emitter = read_emitter(root.child("emitter"));
  const double fwhm = read_pulse_fwhm(root.child("pulse"));
  const auto temps = root.numbers("temperatures_k", standard_temperatures());
  const auto areas = grid(root, "areas_rad", linspace(0.1 * std::numbers::pi, 4.0 * std::numbers::pi, 40));
  dynamics::ModelOptions opts;
  opts.virtual_dissipator =
      dissipator_from(root.choice("virtual_dissipator", "static", {"none", "static", "full"}));
  opts.emission = root.flag("emission", false);
  Section integ = root.child("integrator");
  dynamics::SimulationSpec spec;
  spec.integrator.rtol = integ.positive("rtol", spec.integrator.rtol);
  spec.integrator.atol = integ.positive("atol", spec.integrator.atol);
  const bool do_fit = root.flag("fit_damped_rabi", true);
  ctx.config.finish();

  for (double t : temps) {
    if (!(t >= 0.0)) throw ConfigError("temperatures_k must be >= 0");
  }
  for (std::size_t i = 1; i < areas.size(); ++i) {
    if (!(areas[i] > areas[i - 1])) throw ConfigError("areas_rad must be strictly increasing");
  }
  opts.phonons = coupling.alpha() > 0.0;
  const PulseSpec pulse(std::numbers::pi, fwhm);

  nlohmann::json summary = nlohmann::json::array();
  for (double t : temps) {
    const dynamics::PolaronModel model(coupling, t, emitter, opts);
    const auto scan = dynamics::rabi_scan(areas, model, pulse, spec, ctx.threads);
    const std::string name = "rabi_T" + label(t) + "K.csv";
    ctx.out.write(name, [&](std::ostream& os) { dynamics::write_rabi_csv(os, scan); });

    nlohmann::json entry = {{"temperature_k", t},
                            {"franck_condon", scan.franck_condon},
                            {"gamma_pd_per_ps", model.gamma_pd()},
                            {"csv", name}};
    if (do_fit) {
      try {
        const auto f = estimation::fit_rabi_curve({areas, scan.zpl_intensity, {}});
        entry["fit"] = {{"c1", f.c1},
                        {"c2", f.c2},
                        {"c3", f.c3},
                        {"rms_residual", std::sqrt(f.fit.chi_square / static_cast<double>(areas.size()))},
                        {"converged", f.fit.converged}};
      } catch (const std::exception& e) {
        // a scan that never turns over has no first maximum to seed the fit
        entry["fit"] = nullptr;
        entry["fit_error"] = e.what();
      }
    }
    summary.push_back(entry);
    ctx.log << "rabi: T=" << label(t) << " K done\n";
  }
  ctx.out.write_json("summary.json", {{"temperatures", summary}});
}

}  // namespace polaronlab::cli
