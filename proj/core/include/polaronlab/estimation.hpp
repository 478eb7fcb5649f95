#pragma once

// Fitting pipelines: damped Rabi curves, the temperature dependence of the
// Rabi frequency scale, the virtual-phonon strength and charge-noise
// parameters. All are thin wrappers over fit::minimize.

#include <cstdint>
#include <vector>

#include "polaronlab/least_squares.hpp"
#include "polaronlab/quadrature.hpp"
#include "polaronlab/units.hpp"

namespace polaronlab::estimation {

/// (x, y, sigma_y) samples. An empty sigma means unit weights, and the
/// reported covariances are then scaled by the residual variance.
struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;

  std::size_t size() const { return x.size(); }
  void validate(std::size_t min_points) const;
};

struct RabiFitOptions {
  std::vector<double> c2_starts{0.0, 0.01, 0.05, 0.2};
  fit::LeastSquaresOptions solver{};
};

struct RabiFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  fit::FitResult fit;
};

/// Fits c1 [1 - exp(-c2 A^2) cos(c3 A)] to (area, intensity) data. c3 starts
/// at pi / A at the first intensity maximum.
RabiFit fit_rabi_curve(const Series& data, const RabiFitOptions& opts = {});

struct PhononFitOptions {
  double alpha_guess = 0.1;     // ps^-1
  double omega_c_guess = 2.0;   // ps^-1
  double degeneracy_condition = 1e6;
  QuadratureSpec quadrature{.rel_tol = 1e-12};
  fit::LeastSquaresOptions solver{};
};

struct PhononFit {
  double alpha = 0.0;
  double omega_c = 0.0;
  double kappa = 0.0;              // c3 at B = 1
  Eigen::Matrix2d covariance;      // (alpha, omega_c)
  double condition_number = 1.0;   // of that covariance
  bool degenerate = false;
  fit::FitResult fit;              // parameters (kappa, alpha, omega_c)
};

/// Fits c3(T) = kappa B(T; alpha, omega_c), x in K.
PhononFit extract_phonon_params(const Series& c3_vs_temperature,
                                const PhononFitOptions& opts = {});

struct MuFitInput {
  double alpha = 0.13;
  double omega_c = 1.8;
  double gamma_emission = 1.0 / 730.0;  // ps^-1
  double jitter_factor = 1.0;
};

struct MuFit {
  double mu = 0.0;         // ps^2
  double mu_error = 0.0;
  fit::FitResult fit;
};

/// Indistinguishability model jitter Gamma / (Gamma + 2 gamma_pd(T; mu)).
double indistinguishability_vs_temperature(double temperature_k, double mu, const MuFitInput& in,
                                           const QuadratureSpec& q = {});

/// Fits mu to (T in K, I) data with alpha and omega_c held fixed.
MuFit fit_mu(const Series& indist_vs_temperature, const MuFitInput& in,
             const fit::LeastSquaresOptions& solver = {}, const QuadratureSpec& q = {});

enum class NoiseModel { resonant, jitter };

struct NoiseFitInput {
  NoiseModel model = NoiseModel::resonant;
  double gamma_emission = 1.0 / 730.0;  // ps^-1
  double gamma_pd = 0.0;                 // ps^-1, delay independent
  double gamma_relax = 1.0 / 53.0;       // ps^-1, jitter model only
};

struct NoiseFitOptions {
  std::vector<double> tau_c_scales{1.0, 0.5, 2.0};  // multiples of the inflection guess
  fit::LeastSquaresOptions solver{};
};

struct NoiseFit {
  double gamma0_uev = 0.0;
  double tau_c_ns = 0.0;
  Eigen::Matrix2d covariance;  // (gamma0 ueV, tau_c ns)
  bool tau_c_unidentifiable = false;
  fit::FitResult fit;
};

/// I(tau_D) for delay in ns under the given charge noise.
double indistinguishability_vs_delay(double tau_d_ns, double gamma0_uev, double tau_c_ns,
                                     const NoiseFitInput& in);

/// Fits (gamma0, tau_c) to (tau_D in ns, I) data.
NoiseFit fit_charge_noise(const Series& indist_vs_delay, const NoiseFitInput& in,
                          const NoiseFitOptions& opts = {});

/// Copy of y with independent Gaussian noise of standard deviation
/// relative_sigma |y_i| added; deterministic in the seed.
std::vector<double> add_relative_noise(const std::vector<double>& y, double relative_sigma,
                                       std::uint64_t seed);

}  // namespace polaronlab::estimation
