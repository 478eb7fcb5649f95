#include "polaronlab/phonon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "polaronlab/csv.hpp"

namespace polaronlab::phonon {

using detail::require;

namespace {

constexpr cplx kI{0.0, 1.0};

double upper_limit(const PhononCoupling& c, const QuadratureSpec& q) {
  return q.omega_max_factor * c.omega_c();
}

double oscillation_panel(double tau) {
  return tau > 0.0 ? 2.0 * std::numbers::pi / tau : 0.0;
}

double gaussian_cutoff(double omega, double omega_c) {
  const double u = omega / omega_c;
  return std::exp(-u * u);
}

}  // namespace

double spectral_density(double omega, const PhononCoupling& c) {
  require(omega >= 0.0, "spectral density needs omega >= 0");
  return c.alpha() * omega * omega * omega * gaussian_cutoff(omega, c.omega_c());
}

double quadratic_spectral_density(double omega, const PhononCoupling& c) {
  require(omega >= 0.0, "quadratic spectral density needs omega >= 0");
  const double w2 = omega * omega;
  return std::sqrt(c.alpha_q()) * w2 * w2 * omega * gaussian_cutoff(omega, c.omega_c());
}

double thermal_occupation(double omega, double temperature_k) {
  require(omega > 0.0, "thermal occupation has a pole at omega = 0");
  const double theta = units::thermal_frequency(temperature_k);
  if (theta == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / theta);
}

double omega_coth(double omega, double thermal_freq) {
  if (thermal_freq == 0.0) return std::abs(omega);
  const double x = omega / (2.0 * thermal_freq);
  if (std::abs(x) < 1e-6) {
    // x coth x = 1 + x^2/3 + O(x^4)
    return 2.0 * thermal_freq * (1.0 + x * x / 3.0);
  }
  return omega / std::tanh(x);
}

double occupation_product(double omega, double thermal_freq) {
  if (thermal_freq == 0.0 || omega <= 0.0) return 0.0;
  // n (n+1) = e^{-bw} / (1 - e^{-bw})^2
  const double bw = omega / thermal_freq;
  const double em = std::expm1(-bw);
  return std::exp(-bw) / (em * em);
}

double franck_condon(const PhononCoupling& c, double temperature_k, const QuadratureSpec& q) {
  q.validate();
  if (c.alpha() == 0.0) return 1.0;
  const double theta = units::thermal_frequency(temperature_k);
  const double wc = c.omega_c();
  // J(w) w^-2 coth(w/2kT) = alpha exp(-(w/wc)^2) * w coth(w/2kT)
  const auto r = integrate(
      [&](double w) { return c.alpha() * gaussian_cutoff(w, wc) * omega_coth(w, theta); }, 0.0,
      upper_limit(c, q), q);
  return std::exp(-0.5 * r.value);
}

cplx propagator_phi(double tau, const PhononCoupling& c, double temperature_k,
                    const QuadratureSpec& q) {
  require(tau >= 0.0, "propagator needs tau >= 0");
  q.validate();
  if (c.alpha() == 0.0) return 0.0;
  const double theta = units::thermal_frequency(temperature_k);
  const double wc = c.omega_c();
  const auto r = integrate_complex(
      [&](double w) {
        const double g = c.alpha() * gaussian_cutoff(w, wc);
        return cplx{g * omega_coth(w, theta) * std::cos(w * tau), -g * w * std::sin(w * tau)};
      },
      0.0, upper_limit(c, q), q, oscillation_panel(tau));
  return r.value;
}

cplx virtual_amplitude(double tau, const PhononCoupling& c, double temperature_k,
                       const QuadratureSpec& q) {
  require(tau >= 0.0, "virtual amplitude needs tau >= 0");
  q.validate();
  if (c.mu() == 0.0 || c.alpha() == 0.0) return 0.0;
  const double theta = units::thermal_frequency(temperature_k);
  const double wc = c.omega_c();
  const double sq = std::sqrt(c.alpha_q());
  // Jq(w) [n e^{iwt} + (n+1) e^{-iwt}] = Jq(w) [(2n+1) cos wt - i sin wt]
  const auto r = integrate_complex(
      [&](double w) {
        const double w4 = w * w * w * w;
        const double g = sq * w4 * gaussian_cutoff(w, wc);
        return cplx{g * omega_coth(w, theta) * std::cos(w * tau), -g * w * std::sin(w * tau)};
      },
      0.0, upper_limit(c, q), q, oscillation_panel(tau));
  return r.value;
}

cplx lambda_z_direct(double tau, const PhononCoupling& c, double temperature_k,
                     const QuadratureSpec& q) {
  const cplx a = virtual_amplitude(tau, c, temperature_k, q);
  return a * a;
}

double virtual_dephasing_rate(const PhononCoupling& c, double temperature_k,
                              const QuadratureSpec& q) {
  q.validate();
  const double theta = units::thermal_frequency(temperature_k);
  if (theta == 0.0 || c.mu() == 0.0 || c.alpha() == 0.0) return 0.0;
  const double wc = c.omega_c();
  const double pref = c.alpha() * c.alpha() * c.mu() / std::pow(wc, 4);
  const auto r = integrate(
      [&](double w) {
        const double u = w / wc;
        return std::pow(w, 10) * std::exp(-2.0 * u * u) * occupation_product(w, theta);
      },
      0.0, upper_limit(c, q), q);
  return pref * r.value;
}

double virtual_dephasing_rate_from_density(const PhononCoupling& c, double temperature_k,
                                           const QuadratureSpec& q) {
  q.validate();
  const double theta = units::thermal_frequency(temperature_k);
  if (theta == 0.0 || c.mu() == 0.0 || c.alpha() == 0.0) return 0.0;
  const auto r = integrate(
      [&](double w) {
        const double j = quadratic_spectral_density(w, c);
        return j * j * occupation_product(w, theta);
      },
      0.0, upper_limit(c, q), q);
  return r.value;
}

double kernel_extent(const PhononCoupling& c, double temperature_k, const KernelTableSpec& spec) {
  const double theta = units::thermal_frequency(temperature_k);
  double extent = spec.extent_cutoffs / c.omega_c();
  // Away from the Gaussian cutoff the kernels decay as exp(-2 pi kT tau / hbar).
  if (theta > 0.0) extent = std::max(extent, 32.0 / (2.0 * std::numbers::pi * theta));
  return std::min(extent, spec.max_extent);
}

KernelTable::KernelTable(const PhononCoupling& c, double temperature_k, const QuadratureSpec& q,
                         const KernelTableSpec& spec)
    : coupling_(c), temperature_(temperature_k), quad_(q) {
  q.validate();
  require(temperature_k >= 0.0, "temperature must be >= 0 K");
  require(spec.tau_step > 0.0, "tau_step must be > 0");
  const double extent = kernel_extent(c, temperature_k, spec);
  const auto n = static_cast<std::size_t>(std::ceil(extent / spec.tau_step)) + 1;
  tau_.resize(n);
  for (std::size_t i = 0; i < n; ++i) tau_[i] = static_cast<double>(i) * spec.tau_step;

  b_ = phonon::franck_condon(c, temperature_k, q);
  phi_.resize(n);
  for (std::size_t i = 0; i < n; ++i) phi_[i] = propagator_phi(tau_[i], c, temperature_k, q);
  phi_spline_ = ComplexSpline(tau_, phi_);

  has_virtual_ = c.mu() > 0.0 && c.alpha() > 0.0;
  if (has_virtual_) {
    virt_.resize(n);
    for (std::size_t i = 0; i < n; ++i) virt_[i] = virtual_amplitude(tau_[i], c, temperature_k, q);
    virt_spline_ = ComplexSpline(tau_, virt_);
  }

  // Truncate each channel where it has fallen below abs_tol of its peak.
  auto cut_for = [&](Channel ch) {
    double peak = 0.0;
    for (double t : tau_) peak = std::max(peak, std::abs(lambda(ch, t)));
    if (peak == 0.0) return std::size_t{0};
    std::size_t cut = n - 1;
    while (cut > 1 && std::abs(lambda(ch, tau_[cut - 1])) < q.abs_tol * peak) --cut;
    return cut;
  };
  cut_x_ = cut_for(Channel::x);
  cut_y_ = cut_for(Channel::y);
  cut_z_ = cut_for(Channel::z);
}

cplx KernelTable::phi(double tau) const {
  require(tau >= 0.0, "tau must be >= 0");
  if (tau > tau_.back()) return propagator_phi(tau, coupling_, temperature_, quad_);
  return phi_spline_(tau);
}

cplx KernelTable::lambda_x(double tau) const {
  const cplx p = phi(tau);
  return b_ * b_ * (std::cosh(p) - 1.0);
}

cplx KernelTable::lambda_y(double tau) const {
  const cplx p = phi(tau);
  return b_ * b_ * std::sinh(p);
}

cplx KernelTable::lambda_z(double tau) const {
  if (!has_virtual_) return 0.0;
  require(tau >= 0.0, "tau must be >= 0");
  const cplx a = tau > tau_.back() ? virtual_amplitude(tau, coupling_, temperature_, quad_)
                                   : virt_spline_(tau);
  return a * a;
}

cplx KernelTable::lambda(Channel ch, double tau) const {
  switch (ch) {
    case Channel::x: return lambda_x(tau);
    case Channel::y: return lambda_y(tau);
    case Channel::z: return lambda_z(tau);
  }
  return 0.0;
}

HalfFourier KernelTable::half_fourier(Channel ch, double omega) const {
  const std::size_t cut = ch == Channel::x ? cut_x_ : ch == Channel::y ? cut_y_ : cut_z_;
  if (cut == 0) return {};
  const double t_end = tau_[cut];

  // The interpolant is piecewise smooth between knots, so an 8-point
  // Gauss-Legendre rule per grid interval is exact to rounding.
  using Rule = boost::math::quadrature::gauss<double, 8>;
  cplx sum = 0.0;
  for (std::size_t i = 0; i < cut; ++i) {
    const double a = tau_[i];
    const double h = tau_[i + 1] - a;
    sum += Rule::integrate(
               [&](double u) {
                 const double t = a + 0.5 * h * (u + 1.0);
                 return lambda(ch, t) * std::exp(kI * (omega * t));
               },
               -1.0, 1.0) *
           (0.5 * h);
  }
  // Every kernel decays at least as fast as 1/tau^2 past the cutoff scale.
  const double tail = std::abs(lambda(ch, t_end)) * t_end;
  if (tail > quad_.tail_rel_tol * std::max(std::abs(sum), quad_.abs_tol)) {
    std::ostringstream os;
    os << "half-Fourier tail bound " << tail << " exceeds tolerance at T = " << temperature_
       << " K; extend the kernel table";
    throw NumericalError(os.str());
  }
  return {sum, tail};
}

RateFunctions KernelTable::rate_functions(double omega_r) const {
  require(omega_r >= 0.0, "rate functions need omega_r >= 0");
  RateFunctions out;
  out.gamma1 = half_fourier(Channel::x, 0.0).value;
  const cplx yp = half_fourier(Channel::y, omega_r).value;
  const cplx ym = omega_r == 0.0 ? yp : half_fourier(Channel::y, -omega_r).value;
  out.gamma2 = 0.5 * (yp + ym);
  out.gamma3 = (yp - ym) / (2.0 * kI);
  if (has_virtual_) {
    const cplx z0 = half_fourier(Channel::z, 0.0).value;
    const cplx zp = omega_r == 0.0 ? z0 : half_fourier(Channel::z, omega_r).value;
    const cplx zm = omega_r == 0.0 ? z0 : half_fourier(Channel::z, -omega_r).value;
    out.chi1 = 0.5 * z0 - 0.25 * (zp + zm);
    out.chi2 = (zp - zm) / (4.0 * kI);
    out.chi3 = 0.5 * (zp + zm);
  }
  return out;
}

void KernelTable::write_csv(std::ostream& os) const {
  std::vector<double> re(phi_.size()), im(phi_.size());
  for (std::size_t i = 0; i < phi_.size(); ++i) {
    re[i] = phi_[i].real();
    im[i] = phi_[i].imag();
  }
  csv::write(os, {"tau_ps", "re_phi", "im_phi"}, {tau_, re, im});
}

}  // namespace polaronlab::phonon
