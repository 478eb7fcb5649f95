#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "commands.hpp"
#include "polaronlab/csv.hpp"
#include "polaronlab/estimation.hpp"
#include "polaronlab/phonon.hpp"

namespace polaronlab::cli {

namespace est = polaronlab::estimation;

namespace {

struct Columns {
  const char* x;
  const char* y;
};

Columns columns_for(const std::string& pipeline) {
  if (pipeline == "rabi") return {"area_rad", "intensity"};
  if (pipeline == "phonon") return {"temperature_k", "c3"};
  if (pipeline == "mu") return {"temperature_k", "indistinguishability"};
  return {"delay_ns", "indistinguishability"};
}

est::Series load_series(const std::string& path, const Columns& c) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read input file " + path);
  const auto table = csv::read(in);
  est::Series s{table.column(c.x), table.column(c.y), {}};
  const auto& h = table.header;
  if (std::find(h.begin(), h.end(), "sigma") != h.end()) s.sigma = table.column("sigma");
  return s;
}

// Synthetic data from the forward models; noise is relative to each value.
struct Synthetic {
  std::vector<double> x;
  double noise = 0.0;
};

Synthetic read_synthetic(Section s, const std::string& pipeline) {
  Synthetic out;
  out.noise = s.non_negative("relative_noise", 0.0);
  if (pipeline == "rabi") {
    out.x = grid(s, "areas_rad", linspace(0.1 * std::numbers::pi, 4.0 * std::numbers::pi, 40));
  } else if (pipeline == "noise") {
    out.x = grid(s, "delays_ns", linspace(2.0, 12.0, 11));
  } else {
    out.x = grid(s, "temperatures_k", linspace(2.0, 30.0, 15));
  }
  return out;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json result_json(const std::vector<std::string>& names, const fit::FitResult& f,
                           std::size_t n_points) {
  nlohmann::json params = nlohmann::json::object();
  const auto se = f.standard_errors();
  for (std::size_t i = 0; i < names.size(); ++i) {
    params[names[i]] = {{"value", f.parameters(static_cast<Eigen::Index>(i))},
                        {"error", se(static_cast<Eigen::Index>(i))}};
  }
  std::vector<double> res(f.residuals.data(), f.residuals.data() + f.residuals.size());
  const auto p = static_cast<std::size_t>(f.parameters.size());
  return {{"parameter_order", names},
          {"parameters", params},
          {"covariance", matrix_json(f.covariance)},
          {"chi_square", f.chi_square},
          {"degrees_of_freedom", n_points > p ? n_points - p : 0},
          {"residuals", res},
          {"iterations", f.iterations},
          {"converged", f.converged},
          {"singular", f.singular},
          {"condition_number", f.condition_number}};
}

}  // namespace

void cmd_fit(RunContext& ctx) {
  Section root = ctx.config.root();
  const auto pipeline = resolve_mode(ctx, root, "pipeline", "rabi", {"rabi", "phonon", "mu", "noise"});
  const auto input = root.text("input_csv");
  std::optional<Synthetic> synth;
  if (!input) synth = read_synthetic(root.child("synthetic"), pipeline);

  // forward-model parameters; they double as the fixed inputs of the mu and noise fits
  Section truth = root.child("model");
  double c1 = 0, c2 = 0, c3 = 0;
  PhononCoupling coupling = PhononCoupling::nominal();
  double kappa = 1.0;
  est::MuFitInput mu_in;
  est::NoiseFitInput noise_in;
  ChargeNoise noise = ChargeNoise::s_shell();
  if (pipeline == "rabi") {
    c1 = truth.positive("c1", 1.0);
    c2 = truth.non_negative("c2", 0.02);
    c3 = truth.positive("c3", 0.9);
  } else if (pipeline == "phonon") {
    coupling = read_phonons(truth.child("phonons"));
    kappa = truth.positive("kappa", 1.0);
  } else if (pipeline == "mu") {
    coupling = read_phonons(truth.child("phonons"));
    mu_in.alpha = coupling.alpha();
    mu_in.omega_c = coupling.omega_c();
    mu_in.gamma_emission = read_emitter(truth.child("emitter")).gamma_emission();
    mu_in.jitter_factor = truth.positive("jitter_factor", 1.0);
  } else {
    noise_in.model = truth.choice("excitation", "resonant", {"resonant", "jitter"}) == "jitter"
                         ? est::NoiseModel::jitter
                         : est::NoiseModel::resonant;
    noise_in.gamma_emission = read_emitter(truth.child("emitter")).gamma_emission();
    noise_in.gamma_pd = truth.non_negative("gamma_pd_per_ps", 0.0);
    if (noise_in.model == est::NoiseModel::jitter) {
      noise_in.gamma_relax = read_pump(truth.child("pump")).gamma_relax();
    }
    noise = read_charge_noise(truth.child("charge_noise"), noise_in.model == est::NoiseModel::jitter
                                                               ? ChargeNoise::p_shell()
                                                               : ChargeNoise::s_shell());
  }
  ctx.config.finish();

  const Columns cols = columns_for(pipeline);
  est::Series data;
  if (input) {
    data = load_series(*input, cols);
  } else {
    data.x = synth->x;
    for (double x : data.x) {
      double y = 0.0;
      if (pipeline == "rabi") {
        y = c1 * (1.0 - std::exp(-c2 * x * x) * std::cos(c3 * x));
      } else if (pipeline == "phonon") {
        y = kappa * phonon::franck_condon(coupling, x);
      } else if (pipeline == "mu") {
        y = est::indistinguishability_vs_temperature(x, coupling.mu(), mu_in);
      } else {
        y = est::indistinguishability_vs_delay(x, noise.gamma0_uev(), noise.tau_c_ns(), noise_in);
      }
      data.y.push_back(y);
    }
    if (synth->noise > 0.0) {
      data.y = est::add_relative_noise(data.y, synth->noise, ctx.seed);
      for (double y : data.y) data.sigma.push_back(synth->noise * std::abs(y));
      for (double& s : data.sigma) s = std::max(s, 1e-300);
    }
  }

  nlohmann::json report;
  if (pipeline == "rabi") {
    const auto f = est::fit_rabi_curve(data);
    report = result_json({"c1", "c2", "c3"}, f.fit, data.size());
  } else if (pipeline == "phonon") {
    const auto f = est::extract_phonon_params(data);
    report = result_json({"kappa", "alpha_per_ps", "omega_c_per_ps"}, f.fit, data.size());
    report["degenerate"] = f.degenerate;
    report["alpha_omega_c_condition"] = f.condition_number;
  } else if (pipeline == "mu") {
    const auto f = est::fit_mu(data, mu_in);
    report = result_json({"mu_ps2"}, f.fit, data.size());
  } else {
    const auto f = est::fit_charge_noise(data, noise_in);
    report = result_json({"gamma0_uev", "tau_c_ns"}, f.fit, data.size());
    report["tau_c_unidentifiable"] = f.tau_c_unidentifiable;
  }
  report["pipeline"] = pipeline;
  report["source"] = input ? "file" : "synthetic";

  std::vector<std::vector<double>> table{data.x, data.y};
  std::vector<std::string> header{cols.x, cols.y};
  if (!data.sigma.empty()) {
    table.push_back(data.sigma);
    header.emplace_back("sigma");
  }
  write_table(ctx.out, "data.csv", header, table);
  ctx.out.write_json("fit.json", report);
  ctx.log << "fit " << pipeline << ": chi2=" << report["chi_square"].get<double>() << '\n';
}

}  // namespace polaronlab::cli
