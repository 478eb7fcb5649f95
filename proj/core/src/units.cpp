#include "polaronlab/units.hpp"

#include <cmath>
#include <numbers>

namespace polaronlab {

namespace detail {
void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidParameter(message);
}
}  // namespace detail

using detail::require;

namespace units {

double thermal_frequency(double temperature_k) {
  require(temperature_k >= 0.0 && std::isfinite(temperature_k), "temperature must be >= 0 K");
  return kBoltzmannMeVK * temperature_k / kHbarMeVps;
}

double rate_uev_to_psinv(double x_uev) { return x_uev / kHbarUeVps; }
double rate_psinv_to_uev(double x_psinv) { return x_psinv * kHbarUeVps; }

}  // namespace units

PhononCoupling::PhononCoupling(double alpha, double omega_c, double mu)
    : alpha_(alpha), omega_c_(omega_c), mu_(mu) {
  require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be >= 0");
  require(omega_c > 0.0 && std::isfinite(omega_c), "omega_c must be > 0");
  require(mu >= 0.0 && std::isfinite(mu), "mu must be >= 0");
}

double PhononCoupling::alpha_q() const {
  return alpha_ * alpha_ * mu_ / std::pow(omega_c_, 4);
}

EmitterParams::EmitterParams(double gamma_emission, double detuning, double omega_x)
    : gamma_emission_(gamma_emission), detuning_(detuning), omega_x_(omega_x) {
  require(gamma_emission > 0.0 && std::isfinite(gamma_emission), "emission rate must be > 0");
  require(std::isfinite(detuning), "detuning must be finite");
}

PulseSpec::PulseSpec(double area, double fwhm_ps, double center_ps, double carrier_detuning)
    : area_(area), fwhm_(fwhm_ps), center_(center_ps), carrier_detuning_(carrier_detuning) {
  require(std::isfinite(area), "pulse area must be finite");
  require(fwhm_ps > 0.0 && std::isfinite(fwhm_ps), "pulse FWHM must be > 0");
  require(std::isfinite(center_ps), "pulse center must be finite");
}

double PulseSpec::width_parameter() const {
  return fwhm_ / (4.0 * std::sqrt(std::numbers::ln2));
}

Environment::Environment(double temperature_k) : temperature_(temperature_k) {
  require(temperature_k >= 0.0 && std::isfinite(temperature_k), "temperature must be >= 0 K");
}

ChargeNoise::ChargeNoise(double gamma0_uev, double tau_c_ns)
    : gamma0_uev_(gamma0_uev), tau_c_ns_(tau_c_ns) {
  require(gamma0_uev >= 0.0 && std::isfinite(gamma0_uev), "gamma0 must be >= 0");
  require(tau_c_ns > 0.0 && std::isfinite(tau_c_ns), "tau_c must be > 0");
}

PumpLevel::PumpLevel(double gamma_relax, double level_shift)
    : gamma_relax_(gamma_relax), level_shift_(level_shift) {
  require(gamma_relax > 0.0 && std::isfinite(gamma_relax), "pump relaxation rate must be > 0");
  require(std::isfinite(level_shift), "pump level shift must be finite");
}

}  // namespace polaronlab
