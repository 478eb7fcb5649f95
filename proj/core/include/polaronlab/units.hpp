#pragma once

// Domain value types, physical constants and the few unit conversions the
// toolkit needs. Internally every time is in ps and every rate, frequency or
// energy is in ps^-1 (hbar = 1). Kelvin, ueV and ns appear only at the API
// boundary and are converted here.

#include <stdexcept>
#include <string>

namespace polaronlab {

/// Thrown when a value object is built from out-of-range physics.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a quadrature, integrator or fit fails to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace units {

inline constexpr double kHbarMeVps = 0.6582119;   // meV ps
inline constexpr double kBoltzmannMeVK = 0.0861733;  // meV / K
inline constexpr double kHbarUeVps = kHbarMeVps * 1000.0;
inline constexpr double kKbOverHbar = kBoltzmannMeVK / kHbarMeVps;  // ps^-1 / K

/// k_B T / hbar in ps^-1. Zero at T = 0.
double thermal_frequency(double temperature_k);

double rate_uev_to_psinv(double x_uev);
double rate_psinv_to_uev(double x_psinv);

inline constexpr double ns_to_ps(double x_ns) { return x_ns * 1000.0; }
inline constexpr double ps_to_ns(double x_ps) { return x_ps / 1000.0; }

}  // namespace units

/// Effective exciton-phonon parameters. J(w) = alpha w^3 exp(-(w/wc)^2) and
/// the quadratic (virtual) density uses mu through alpha_Q = alpha^2 mu / wc^4.
class PhononCoupling {
 public:
  PhononCoupling(double alpha, double omega_c, double mu = 0.0);

  double alpha() const { return alpha_; }
  double omega_c() const { return omega_c_; }
  double mu() const { return mu_; }
  double alpha_q() const;

  PhononCoupling with_alpha(double alpha) const { return {alpha, omega_c_, mu_}; }
  PhononCoupling with_mu(double mu) const { return {alpha_, omega_c_, mu}; }

  static PhononCoupling nominal() { return {0.13, 1.8, 1.1e-3}; }

 private:
  double alpha_;
  double omega_c_;
  double mu_;
};

class EmitterParams {
 public:
  explicit EmitterParams(double gamma_emission, double detuning = 0.0, double omega_x = 0.0);

  static EmitterParams from_lifetime_ps(double t1_ps) { return EmitterParams(1.0 / t1_ps); }

  double gamma_emission() const { return gamma_emission_; }
  double detuning() const { return detuning_; }
  double omega_x() const { return omega_x_; }
  double lifetime_ps() const { return 1.0 / gamma_emission_; }

 private:
  double gamma_emission_;
  double detuning_;
  double omega_x_;
};

/// Gaussian drive pulse. The envelope is Omega(t) = A/(2 dtau sqrt(pi))
/// exp(-(t - t0)^2 / (2 dtau)^2) with dtau = fwhm / (4 sqrt(ln 2)).
class PulseSpec {
 public:
  PulseSpec(double area, double fwhm_ps, double center_ps = 0.0, double carrier_detuning = 0.0);

  double area() const { return area_; }
  double fwhm() const { return fwhm_; }
  double center() const { return center_; }
  double carrier_detuning() const { return carrier_detuning_; }
  double width_parameter() const;

  PulseSpec with_area(double area) const { return {area, fwhm_, center_, carrier_detuning_}; }

 private:
  double area_;
  double fwhm_;
  double center_;
  double carrier_detuning_;
};

class Environment {
 public:
  explicit Environment(double temperature_k);
  double temperature() const { return temperature_; }

 private:
  double temperature_;
};

/// Spectral-wandering parameters; gamma0 in ueV, correlation time in ns.
class ChargeNoise {
 public:
  ChargeNoise(double gamma0_uev, double tau_c_ns);

  double gamma0_uev() const { return gamma0_uev_; }
  double tau_c_ns() const { return tau_c_ns_; }

  static ChargeNoise s_shell() { return {0.37, 6.48}; }
  static ChargeNoise p_shell() { return {1.0, 5.8}; }

 private:
  double gamma0_uev_;
  double tau_c_ns_;
};

class PumpLevel {
 public:
  explicit PumpLevel(double gamma_relax, double level_shift = 0.0);

  double gamma_relax() const { return gamma_relax_; }
  double level_shift() const { return level_shift_; }

 private:
  double gamma_relax_;
  double level_shift_;
};

namespace detail {
void require(bool condition, const std::string& message);
}

}  // namespace polaronlab
