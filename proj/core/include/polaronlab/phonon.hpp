#pragma once

// Phonon environment functions: spectral densities, Franck-Condon factor,
// polaron propagator, bath correlation functions, their half-Fourier
// transforms and the virtual-phonon pure-dephasing rate.

#include <complex>
#include <iosfwd>
#include <vector>

#include "polaronlab/quadrature.hpp"
#include "polaronlab/spline.hpp"
#include "polaronlab/units.hpp"

namespace polaronlab::phonon {

using cplx = std::complex<double>;

/// J(w) = alpha w^3 exp(-(w/wc)^2).
double spectral_density(double omega, const PhononCoupling& c);

/// Quadratic (virtual) density sqrt(alpha_Q) w^5 exp(-(w/wc)^2).
double quadratic_spectral_density(double omega, const PhononCoupling& c);

/// Bose occupation 1/(exp(w / kT) - 1). Rejects w <= 0.
double thermal_occupation(double omega, double temperature_k);

/// w coth(w / 2kT), finite at w = 0 and equal to w at T = 0.
double omega_coth(double omega, double thermal_freq);

/// n(w)(n(w)+1), zero at T = 0.
double occupation_product(double omega, double thermal_freq);

double franck_condon(const PhononCoupling& c, double temperature_k, const QuadratureSpec& q = {});

/// phi(tau) by direct quadrature.
cplx propagator_phi(double tau, const PhononCoupling& c, double temperature_k,
                    const QuadratureSpec& q = {});

/// Integral of the quadratic density against the thermal phase factor; its
/// square is Lambda_z.
cplx virtual_amplitude(double tau, const PhononCoupling& c, double temperature_k,
                       const QuadratureSpec& q = {});

cplx lambda_z_direct(double tau, const PhononCoupling& c, double temperature_k,
                     const QuadratureSpec& q = {});

/// gamma_pd as (alpha^2 mu / wc^4) int w^10 exp(-2 (w/wc)^2) n (n+1) dw.
double virtual_dephasing_rate(const PhononCoupling& c, double temperature_k,
                              const QuadratureSpec& q = {});

/// gamma_pd evaluated as int Jq(w)^2 n (n+1) dw with Jq the quadratic density.
double virtual_dephasing_rate_from_density(const PhononCoupling& c, double temperature_k,
                                           const QuadratureSpec& q = {});

enum class Channel { x, y, z };

struct HalfFourier {
  cplx value;
  double tail_bound = 0.0;  // bound on the truncated tail contribution
};

/// Real-transition rates Gamma_1..3 and virtual-transition rates chi_1..3 at
/// a renormalized Rabi frequency.
struct RateFunctions {
  cplx gamma1;
  cplx gamma2;
  cplx gamma3;
  cplx chi1;
  cplx chi2;
  cplx chi3;
};

struct KernelTableSpec {
  double tau_step = 0.01;       // ps
  double extent_cutoffs = 20.0;  // minimum extent, in units of 1/omega_c
  double max_extent = 200.0;    // ps
};

/// phi(tau) and the virtual amplitude sampled on a uniform delay grid with
/// cubic interpolation in between. Built once, then shared read-only.
class KernelTable {
 public:
  KernelTable(const PhononCoupling& c, double temperature_k, const QuadratureSpec& q = {},
              const KernelTableSpec& spec = {});

  const std::vector<double>& tau_grid() const { return tau_; }
  const std::vector<cplx>& phi_values() const { return phi_; }
  double franck_condon() const { return b_; }
  const PhononCoupling& coupling() const { return coupling_; }
  double temperature() const { return temperature_; }

  cplx phi(double tau) const;
  cplx lambda_x(double tau) const;
  cplx lambda_y(double tau) const;
  cplx lambda_z(double tau) const;
  cplx lambda(Channel ch, double tau) const;

  /// int_0^inf Lambda_ch(tau) exp(i w tau) dtau.
  HalfFourier half_fourier(Channel ch, double omega) const;

  RateFunctions rate_functions(double omega_r) const;

  void write_csv(std::ostream& os) const;

 private:
  PhononCoupling coupling_;
  double temperature_;
  QuadratureSpec quad_;
  double b_ = 1.0;
  bool has_virtual_ = false;
  std::vector<double> tau_;
  std::vector<cplx> phi_;
  std::vector<cplx> virt_;
  ComplexSpline phi_spline_;
  ComplexSpline virt_spline_;
  std::size_t cut_x_ = 0, cut_y_ = 0, cut_z_ = 0;  // truncation indices
};

/// Minimum delay-grid extent that resolves the thermal decay of the kernels.
double kernel_extent(const PhononCoupling& c, double temperature_k, const KernelTableSpec& spec);

}  // namespace polaronlab::phonon
