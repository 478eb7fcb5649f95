#include "polaronlab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "polaronlab/coherence.hpp"
#include "polaronlab/phonon.hpp"

namespace polaronlab::estimation {

using detail::require;
using Eigen::VectorXd;

namespace {

std::vector<std::size_t> sorted_by_x(const Series& s) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s.x[a] < s.x[b]; });
  return idx;
}

fit::FitProblem problem_for(const Series& s) {
  fit::FitProblem p;
  p.x = s.x;
  p.y = s.y;
  p.sigma = s.sigma;
  return p;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs the problem from each start and keeps the lowest chi^2; rethrows the
// last failure if every start fails.
fit::FitResult best_of(fit::FitProblem p, const std::vector<VectorXd>& starts) {
  std::optional<fit::FitResult> best;
  std::optional<fit::FitError> last;
  for (const auto& s : starts) {
    p.initial = p.bounds.project(s);
    try {
      auto r = fit::least_squares(p);
      if (!best || r.chi_square < best->chi_square) best = std::move(r);
    } catch (const fit::FitError& e) {
      last = e;
    }
  }
  if (!best) throw *last;
  return *best;
}

// Without measurement errors the covariance is scaled by the residual
// variance chi^2 / (n - p).
void scale_unit_weights(fit::FitResult& r, const Series& s) {
  if (!s.sigma.empty()) return;
  const auto dof = static_cast<double>(s.size()) - static_cast<double>(r.parameters.size());
  r.covariance *= dof > 0.0 ? r.chi_square / dof : 0.0;
}

}  // namespace

void Series::validate(std::size_t min_points) const {
  require(x.size() == y.size(), "series x and y differ in length");
  require(sigma.empty() || sigma.size() == x.size(), "series sigma must match the data length");
  require(x.size() >= min_points,
          "series needs at least " + std::to_string(min_points) + " points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]) && std::isfinite(y[i]), "series values must be finite");
    if (!sigma.empty()) require(sigma[i] > 0.0, "sigma_y must be > 0");
  }
}

RabiFit fit_rabi_curve(const Series& data, const RabiFitOptions& opts) {
  data.validate(8);
  require(!opts.c2_starts.empty(), "at least one c2 start is required");
  const auto idx = sorted_by_x(data);
  std::size_t first_max = 0;
  for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
    const double y = data.y[idx[k]];
    if (y >= data.y[idx[k - 1]] && y > data.y[idx[k + 1]]) {
      first_max = k;
      break;
    }
  }
  require(first_max > 0 && data.x[idx[first_max]] > 0.0,
          "Rabi data must span at least one oscillation");
  const double a_max = data.x[idx[first_max]];
  const double y_max = data.y[idx[first_max]];
  const double c3 = std::numbers::pi / a_max;

  auto p = problem_for(data);
  p.model = [](double a, const VectorXd& c) {
    return c[0] * (1.0 - std::exp(-c[1] * a * a) * std::cos(c[2] * a));
  };
  p.bounds = fit::Bounds::non_negative(3);
  p.options = opts.solver;
  std::vector<VectorXd> starts;
  for (double c2 : opts.c2_starts) {
    require(c2 >= 0.0, "c2 starts must be >= 0");
    starts.push_back(VectorXd{{y_max / (1.0 + std::exp(-c2 * a_max * a_max)), c2, c3}});
  }
  RabiFit out;
  out.fit = best_of(std::move(p), starts);
  scale_unit_weights(out.fit, data);
  out.c1 = out.fit.parameters[0];
  out.c2 = out.fit.parameters[1];
  out.c3 = out.fit.parameters[2];
  return out;
}

PhononFit extract_phonon_params(const Series& data, const PhononFitOptions& opts) {
  data.validate(4);
  for (double t : data.x) require(t >= 0.0, "temperatures must be >= 0 K");
  require(opts.alpha_guess >= 0.0 && opts.omega_c_guess > 0.0,
          "phonon guesses must be alpha >= 0, omega_c > 0");
  const QuadratureSpec q = opts.quadrature;
  auto b_of = [q](double t, double alpha, double wc) {
    return phonon::franck_condon(PhononCoupling(alpha, wc), t, q);
  };

  auto p = problem_for(data);
  p.model = [b_of](double t, const VectorXd& v) { return v[0] * b_of(t, v[1], v[2]); };
  p.bounds = fit::Bounds::non_negative(3);
  p.bounds.lower[2] = 1e-3;  // omega_c > 0
  p.options = opts.solver;
  p.options.allow_singular = true;
  // With noisy c3 the fit can run down the omega_c -> 0 valley, where ln B is
  // linear in T and only alpha * omega_c is determined; that is reported as
  // degeneracy rather than as a failure.
  p.options.require_convergence = false;
  std::vector<double> kappa;
  for (std::size_t i = 0; i < data.size(); ++i) {
    kappa.push_back(data.y[i] / b_of(data.x[i], opts.alpha_guess, opts.omega_c_guess));
  }
  const VectorXd start{{std::max(median(kappa), 0.0), opts.alpha_guess, opts.omega_c_guess}};

  PhononFit out;
  out.fit = best_of(std::move(p), {start});
  scale_unit_weights(out.fit, data);
  out.kappa = out.fit.parameters[0];
  out.alpha = out.fit.parameters[1];
  out.omega_c = out.fit.parameters[2];
  out.covariance = out.fit.covariance.block<2, 2>(1, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(out.covariance);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  out.condition_number = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  out.degenerate = out.fit.singular || out.condition_number > opts.degeneracy_condition;
  if (!out.fit.converged && !out.degenerate && opts.solver.require_convergence) {
    throw fit::FitError("phonon parameter fit did not converge", out.fit.condition_number);
  }
  return out;
}

double indistinguishability_vs_temperature(double temperature_k, double mu, const MuFitInput& in,
                                           const QuadratureSpec& q) {
  const double g = phonon::virtual_dephasing_rate(PhononCoupling(in.alpha, in.omega_c, mu),
                                                  temperature_k, q);
  return in.jitter_factor * coherence::indistinguishability_resonant(in.gamma_emission, g);
}

MuFit fit_mu(const Series& data, const MuFitInput& in, const fit::LeastSquaresOptions& solver,
             const QuadratureSpec& q) {
  data.validate(1);
  require(in.gamma_emission > 0.0, "emission rate must be > 0");
  require(in.jitter_factor > 0.0 && in.jitter_factor <= 1.0, "jitter factor must be in (0, 1]");
  // gamma_pd is linear in mu: tabulate it once at mu = 1
  std::vector<double> unit_rate(data.size());
  std::vector<double> inverted;
  for (std::size_t i = 0; i < data.size(); ++i) {
    require(data.x[i] >= 0.0, "temperatures must be >= 0 K");
    unit_rate[i] = phonon::virtual_dephasing_rate(PhononCoupling(in.alpha, in.omega_c, 1.0),
                                                  data.x[i], q);
    if (unit_rate[i] > 0.0 && data.y[i] > 0.0) {
      const double gamma = 0.5 * in.gamma_emission * (in.jitter_factor / data.y[i] - 1.0);
      inverted.push_back(std::max(gamma, 0.0) / unit_rate[i]);
    }
  }
  require(!inverted.empty(), "no temperature point is sensitive to mu");

  // x carries the point index so the model can look up its unit rate
  Series indexed = data;
  for (std::size_t i = 0; i < data.size(); ++i) indexed.x[i] = static_cast<double>(i);
  auto p = problem_for(indexed);
  p.model = [&](double i, const VectorXd& v) {
    const double g = v[0] * unit_rate[static_cast<std::size_t>(i)];
    return in.jitter_factor * in.gamma_emission / (in.gamma_emission + 2.0 * g);
  };
  p.bounds = fit::Bounds::non_negative(1);
  p.options = solver;
  MuFit out;
  out.fit = best_of(std::move(p), {VectorXd::Constant(1, median(inverted))});
  scale_unit_weights(out.fit, data);
  out.mu = out.fit.parameters[0];
  out.mu_error = out.fit.standard_errors()[0];
  return out;
}

double indistinguishability_vs_delay(double tau_d_ns, double gamma0_uev, double tau_c_ns,
                                     const NoiseFitInput& in) {
  const double wander = units::rate_uev_to_psinv(
      coherence::charge_noise_rate(tau_d_ns, ChargeNoise(gamma0_uev, tau_c_ns)));
  const double total = in.gamma_pd + wander;
  if (in.model == NoiseModel::jitter) {
    return coherence::indistinguishability_with_jitter(in.gamma_relax, in.gamma_emission, total)
        .value;
  }
  return coherence::indistinguishability_resonant(in.gamma_emission, total);
}

NoiseFit fit_charge_noise(const Series& data, const NoiseFitInput& in,
                          const NoiseFitOptions& opts) {
  data.validate(4);
  require(in.gamma_emission > 0.0 && in.gamma_pd >= 0.0, "invalid emission or dephasing rate");
  require(in.model == NoiseModel::resonant || in.gamma_relax > 0.0,
          "jitter model needs a pump relaxation rate > 0");
  require(!opts.tau_c_scales.empty(), "at least one tau_c start is required");
  for (double t : data.x) require(t > 0.0, "delays must be > 0 ns");
  const auto idx = sorted_by_x(data);

  // Steepest descent of I(tau_D) sits at tau_c / sqrt(2).
  double steepest = data.x[idx[0]], best_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const double dx = data.x[idx[k + 1]] - data.x[idx[k]];
    if (dx <= 0.0) continue;
    const double slope = (data.y[idx[k]] - data.y[idx[k + 1]]) / dx;
    if (slope > best_slope) {
      best_slope = slope;
      steepest = 0.5 * (data.x[idx[k]] + data.x[idx[k + 1]]);
    }
  }
  const double tau_c0 = std::numbers::sqrt2 * steepest;

  const double ceiling = indistinguishability_vs_delay(1.0, 0.0, 1.0, in);
  const double t_last = data.x[idx.back()], y_last = data.y[idx.back()];
  double wander_last = 0.0;
  if (y_last > 0.0) {
    wander_last = std::max(0.5 * in.gamma_emission * (ceiling / y_last - 1.0), 0.0);
  }

  auto p = problem_for(data);
  p.model = [in](double t, const VectorXd& v) {
    return indistinguishability_vs_delay(t, v[0], v[1], in);
  };
  p.bounds = fit::Bounds::non_negative(2);
  p.bounds.lower[1] = 1e-6;  // tau_c > 0
  p.options = opts.solver;
  p.options.allow_singular = true;
  std::vector<VectorXd> starts;
  for (double scale : opts.tau_c_scales) {
    require(scale > 0.0, "tau_c scales must be > 0");
    const double tc = tau_c0 * scale;
    const double g0 = units::rate_psinv_to_uev(wander_last) /
                      std::max(1.0 - std::exp(-(t_last / tc) * (t_last / tc)), 1e-3);
    starts.push_back(VectorXd{{g0, tc}});
  }

  NoiseFit out;
  out.fit = best_of(std::move(p), starts);
  scale_unit_weights(out.fit, data);
  out.gamma0_uev = out.fit.parameters[0];
  out.tau_c_ns = out.fit.parameters[1];
  out.covariance = out.fit.covariance;
  const VectorXd se = out.fit.standard_errors();
  // tau_c only shows through the rise of gamma(tau_D): it is unidentifiable
  // when the amplitude is consistent with zero or every delay is saturated.
  out.tau_c_unidentifiable = out.fit.singular || out.gamma0_uev <= 2.0 * se[0] ||
                             !(se[1] < out.tau_c_ns) || data.x[idx[0]] > 3.0 * out.tau_c_ns;
  return out;
}

std::vector<double> add_relative_noise(const std::vector<double>& y, double relative_sigma,
                                       std::uint64_t seed) {
  require(relative_sigma >= 0.0, "noise level must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(y);
  for (double& v : out) v += relative_sigma * std::abs(v) * normal(rng);
  return out;
}

}  // namespace polaronlab::estimation
