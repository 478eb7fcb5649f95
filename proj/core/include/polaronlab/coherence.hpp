#pragma once

// Photon indistinguishability: closed forms, the quantum-regression g1, the
// double-integral definition evaluated numerically, and a three-level
// (pump-state) simulation for timing jitter.

#include <complex>
#include <string_view>

#include "polaronlab/ode.hpp"
#include "polaronlab/units.hpp"

namespace polaronlab::dynamics {
struct SimulationResult;
}

namespace polaronlab::coherence {

/// Dephasing rates in ps^-1; total = gamma_pd + gamma_charge.
class DephasingBudget {
 public:
  DephasingBudget(double gamma_pd, double gamma_charge);

  double gamma_pd() const { return gamma_pd_; }
  double gamma_charge() const { return gamma_charge_; }
  double total() const { return gamma_pd_ + gamma_charge_; }

 private:
  double gamma_pd_;
  double gamma_charge_;
};

enum class Method { analytic, oracle, three_level };

std::string_view to_string(Method m);

struct IndistinguishabilityResult {
  double value = 1.0;
  Method method = Method::analytic;
  double jitter_factor = 1.0;
  double dephasing_factor = 1.0;
};

/// gamma0 (1 - exp(-(tau_d / tau_c)^2)), in ueV.
double charge_noise_rate(double tau_d_ns, const ChargeNoise& noise);

/// Gamma / (Gamma + 2 gamma).
double indistinguishability_resonant(double gamma_emission, double gamma_total);

/// [G_ps / (G_ps + Gamma)] [Gamma / (Gamma + 2 gamma)].
IndistinguishabilityResult indistinguishability_with_jitter(double gamma_relax,
                                                            double gamma_emission,
                                                            double gamma_total);

/// rho_XX(0) exp(-Gamma t) exp(-(Gamma + 2 gamma) tau / 2).
std::complex<double> g1_resonant(double t, double tau, double rho_xx0, double gamma_emission,
                                 double gamma_total);

struct OracleSpec {
  double truncation_lifetimes = 15.0;  // integrate t, tau over [0, n / Gamma]
  double rel_tol = 1e-11;
  unsigned max_depth = 20;
};

/// Ratio of double integrals of |g1|^2 and of the population product,
/// evaluated by nested adaptive quadrature of g1_resonant.
double indistinguishability_oracle(double gamma_emission, double gamma_total,
                                   double rho_xx0 = 1.0, const OracleSpec& spec = {});

/// Indistinguishability of the photon emitted after a simulated pulse.
double indistinguishability_after_pulse(const dynamics::SimulationResult& pulse,
                                        double gamma_emission, double gamma_total,
                                        const OracleSpec& spec = {});

struct ThreeLevelSpec {
  IntegratorSpec integrator{1e-11, 1e-13, 0.0, 1e-3};
  double truncation_lifetimes = 15.0;
  double panel_growth = 1.25;  // geometric grading of quadrature panels
};

/// Integrates the pump/exciton/ground master equation from |P><P|, builds g1
/// by quantum regression with the same generator and evaluates the double
/// integral.
IndistinguishabilityResult three_level_simulation(const PumpLevel& pump, const EmitterParams& e,
                                                  double gamma_total,
                                                  const ThreeLevelSpec& spec = {});

}  // namespace polaronlab::coherence
