#include <ostream>

#include "commands.hpp"
#include "polaronlab/phonon.hpp"

namespace polaronlab::cli {

void cmd_kernels(RunContext& ctx) {
  Section root = ctx.config.root();
  const PhononCoupling coupling = read_phonons(root.child("phonons"));
  const double temperature = root.positive("temperature_k", 5.6);
  phonon::KernelTableSpec spec;
  Section grid_s = root.child("grid");
  spec.tau_step = grid_s.positive("tau_step_ps", spec.tau_step);
  spec.extent_cutoffs = grid_s.positive("extent_cutoffs", spec.extent_cutoffs);
  spec.max_extent = grid_s.positive("max_extent_ps", spec.max_extent);
  const auto omegas = root.numbers("rates_omega_r_per_ps", {});
  ctx.config.finish();
  for (double w : omegas) {
    if (!(w >= 0.0)) throw ConfigError("rates_omega_r_per_ps must be >= 0");
  }

  const phonon::KernelTable table(coupling, temperature, {}, spec);
  ctx.out.write("kernels.csv", [&](std::ostream& os) { table.write_csv(os); });

  nlohmann::json summary = {
      {"temperature_k", temperature},
      {"franck_condon", table.franck_condon()},
      {"gamma_pd_per_ps", phonon::virtual_dephasing_rate(coupling, temperature)},
      {"gamma_pd_from_density_per_ps", phonon::virtual_dephasing_rate_from_density(coupling, temperature)},
      {"extent_ps", table.tau_grid().empty() ? 0.0 : table.tau_grid().back()},
      {"samples", table.tau_grid().size()}};

  if (!omegas.empty()) {
    std::vector<std::vector<double>> cols(13);
    for (double w : omegas) {
      const auto r = table.rate_functions(w);
      cols[0].push_back(w);
      std::size_t k = 1;
      for (const auto& z : {r.gamma1, r.gamma2, r.gamma3, r.chi1, r.chi2, r.chi3}) {
        cols[k++].push_back(z.real());
        cols[k++].push_back(z.imag());
      }
    }
    write_table(ctx.out, "rates.csv",
                {"omega_r_per_ps", "gamma1_re", "gamma1_im", "gamma2_re", "gamma2_im", "gamma3_re",
                 "gamma3_im", "chi1_re", "chi1_im", "chi2_re", "chi2_im", "chi3_re", "chi3_im"},
                cols);
    summary["rates_csv"] = "rates.csv";
  }
  ctx.out.write_json("summary.json", summary);
  ctx.log << "kernels: " << table.tau_grid().size() << " samples at T=" << label(temperature) << " K\n";
}

}  // namespace polaronlab::cli
