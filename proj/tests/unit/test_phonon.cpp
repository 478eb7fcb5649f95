#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "polaronlab/phonon.hpp"

using namespace polaronlab;
using namespace polaronlab::phonon;

namespace {
const PhononCoupling nominal = PhononCoupling::nominal();
}

TEST(SpectralDensity, ShapeAndMaximum) {
  EXPECT_EQ(spectral_density(0.0, nominal), 0.0);
  EXPECT_EQ(spectral_density(1.3, PhononCoupling(0.0, 1.8)), 0.0);
  double best = 0.0, arg = 0.0;
  for (double w = 0.0; w < 6.0; w += 1e-4) {
    const double j = spectral_density(w, nominal);
    if (j > best) best = j, arg = w;
  }
  EXPECT_NEAR(arg, 1.8 * std::sqrt(1.5), 2e-4);
  EXPECT_NEAR(arg, 2.205, 1e-3);
}

TEST(QuadraticDensity, ShapeAndMaximum) {
  EXPECT_EQ(quadratic_spectral_density(0.0, nominal), 0.0);
  for (double w : {0.5, 1.0, 3.0}) EXPECT_EQ(quadratic_spectral_density(w, nominal.with_mu(0.0)), 0.0);
  double best = 0.0, arg = 0.0;
  for (double w = 0.0; w < 8.0; w += 1e-4) {
    const double j = quadratic_spectral_density(w, nominal);
    if (j > best) best = j, arg = w;
  }
  EXPECT_NEAR(arg, 1.8 * std::sqrt(2.5), 2e-4);
}

TEST(ThermalOccupation, Limits) {
  EXPECT_EQ(thermal_occupation(1.0, 0.0), 0.0);
  const double theta = units::thermal_frequency(10.0);
  EXPECT_NEAR(thermal_occupation(std::log(2.0) * theta, 10.0), 1.0, 1e-12);
  const double w = 1e-4 * theta;
  EXPECT_NEAR(thermal_occupation(w, 10.0) * 1e-4, 1.0, 1e-4);
}

TEST(FranckCondon, ClosedFormAtZeroTemperature) {
  EXPECT_EQ(franck_condon(PhononCoupling(0.0, 1.8), 10.0), 1.0);
  const double exact = std::exp(-0.13 * 1.8 * 1.8 / 4.0);
  EXPECT_NEAR(franck_condon(nominal, 0.0), exact, 1e-12);
  EXPECT_NEAR(exact, 0.9001, 1e-4);
}

TEST(FranckCondon, MatchesReferenceQuadratureAt20K) {
  const double t = oracle::kt(20.0);
  double prev = 0.0, cur = 0.0;
  for (int n = 2000;; n *= 2) {
    cur = oracle::simpson(
        [&](double w) { return 0.13 * std::exp(-std::pow(w / 1.8, 2)) * oracle::coth_term(w, t); },
        0.0, 6.0 * 1.8, n);
    if (prev != 0.0 && std::abs(cur - prev) < 1e-10 * std::abs(cur)) break;
    prev = cur;
  }
  EXPECT_NEAR(franck_condon(nominal, 20.0), std::exp(-0.5 * cur), 1e-8);
}

TEST(Propagator, IdentityAndDecay) {
  for (double a : {0.05, 0.13, 0.3}) {
    for (double wc : {1.0, 1.8, 2.5}) {
      for (double t : {1.0, 5.6, 20.0}) {
        const PhononCoupling c(a, wc);
        const double b = franck_condon(c, t, {.rel_tol = 1e-12});
        const auto phi0 = propagator_phi(0.0, c, t, {.rel_tol = 1e-12});
        EXPECT_NEAR(phi0.imag(), 0.0, 1e-15);
        EXPECT_NEAR(b, std::exp(-0.5 * phi0.real()), 1e-8);
      }
    }
  }
  EXPECT_EQ(propagator_phi(1.0, PhononCoupling(0.0, 1.8), 5.6), std::complex<double>(0.0));
  const auto phi0 = propagator_phi(0.0, nominal, 5.6);
  EXPECT_LT(std::abs(propagator_phi(10.0 / 1.8, nominal, 5.6)), 0.02 * std::abs(phi0));
}

TEST(KernelTable, MatchesDirectEvaluation) {
  const KernelTable k(nominal, 10.0);
  EXPECT_NEAR(k.franck_condon(), franck_condon(nominal, 10.0), 1e-10);
  for (double tau : {0.0, 0.137, 1.0, 2.71, 6.0}) {
    EXPECT_NEAR(std::abs(k.phi(tau) - propagator_phi(tau, nominal, 10.0)), 0.0, 1e-7) << tau;
    EXPECT_NEAR(std::abs(k.lambda_z(tau) - lambda_z_direct(tau, nominal, 10.0)), 0.0,
                1e-7 * std::abs(lambda_z_direct(0.0, nominal, 10.0)))
        << tau;
  }
}

TEST(KernelTable, LambdaIdentities) {
  const KernelTable k(nominal, 5.6);
  const auto phi0 = k.phi(0.0);
  const double b = k.franck_condon();
  const auto expected = 0.5 * b * b * (std::exp(phi0) + std::exp(-phi0) - 2.0);
  EXPECT_NEAR(std::abs(k.lambda_x(0.0) - expected), 0.0, 1e-12);
  EXPECT_GE(k.lambda_x(0.0).real(), 0.0);

  const PhononCoupling weak = nominal.with_alpha(0.13e-3);
  const KernelTable w(weak, 5.6);
  const double bw = w.franck_condon();
  for (double tau : {0.0, 0.5, 1.5}) {
    const auto approx = bw * bw * w.phi(tau);
    EXPECT_NEAR(std::abs(w.lambda_y(tau) - approx), 0.0, 0.01 * std::abs(approx)) << tau;
  }
}

TEST(KernelTable, VanishWithoutCoupling) {
  const KernelTable k(PhononCoupling(0.0, 1.8, 1.1e-3), 10.0);
  EXPECT_EQ(k.franck_condon(), 1.0);
  for (double tau : {0.0, 0.5, 3.0}) {
    EXPECT_EQ(std::abs(k.phi(tau)), 0.0);
    EXPECT_EQ(std::abs(k.lambda_x(tau)), 0.0);
    EXPECT_EQ(std::abs(k.lambda_y(tau)), 0.0);
    EXPECT_EQ(std::abs(k.lambda_z(tau)), 0.0);
  }
  for (double w : {0.0, 1.0, 2.6}) {
    const auto r = k.rate_functions(w);
    for (auto z : {r.gamma1, r.gamma2, r.gamma3, r.chi1, r.chi2, r.chi3}) EXPECT_EQ(std::abs(z), 0.0);
  }
  EXPECT_EQ(std::abs(KernelTable(nominal.with_mu(0.0), 10.0).lambda_z(0.3)), 0.0);
}

TEST(LambdaZ, ZeroDelayAgainstReference) {
  const double t = oracle::kt(10.0);
  const double sq = std::sqrt(nominal.alpha_q());
  const double inner = oracle::simpson(
      [&](double w) {
        return sq * std::pow(w, 4) * std::exp(-std::pow(w / 1.8, 2)) * oracle::coth_term(w, t);
      },
      0.0, 6.0 * 1.8, 40000);
  const auto lz = lambda_z_direct(0.0, nominal, 10.0, {.rel_tol = 1e-12});
  EXPECT_NEAR(lz.real(), inner * inner, 1e-8 * inner * inner);
  EXPECT_NEAR(lz.imag(), 0.0, 1e-15);
}

TEST(LambdaZ, ZeroTemperatureOnlySpontaneous) {
  const double tau = 0.7;
  const double sq = std::sqrt(nominal.alpha_q());
  const auto amp = oracle::simpson(
      [&](double w) {
        return sq * std::pow(w, 5) * std::exp(-std::pow(w / 1.8, 2)) *
               std::exp(std::complex<double>(0.0, -w * tau));
      },
      0.0, 6.0 * 1.8, 40000);
  EXPECT_NEAR(std::abs(lambda_z_direct(tau, nominal, 0.0) - amp * amp), 0.0, 1e-9 * std::norm(amp));
}

TEST(HalfFourier, AgainstTrapezoid) {
  const KernelTable k(nominal, 10.0);
  EXPECT_EQ(std::abs(KernelTable(PhononCoupling(0.0, 1.8), 10.0).half_fourier(Channel::x, 0.7).value), 0.0);
  // dense trapezoid over the cubic interpolant's own samples
  const auto& tau = k.tau_grid();
  std::complex<double> sum = 0.0;
  const int sub = 16;
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
    const double h = (tau[i + 1] - tau[i]) / sub;
    for (int j = 0; j < sub; ++j) {
      const double a = tau[i] + j * h;
      sum += 0.5 * h * (k.lambda_x(a) + k.lambda_x(a + h));
    }
  }
  const auto hf = k.half_fourier(Channel::x, 0.0).value;
  EXPECT_NEAR(std::abs(hf - sum), 0.0, 1e-6 * std::abs(hf));
}

TEST(RateFunctions, ZeroRabiFrequency) {
  const KernelTable k(nominal, 10.0);
  const auto r = k.rate_functions(0.0);
  EXPECT_EQ(std::abs(r.gamma3), 0.0);
  EXPECT_EQ(std::abs(r.chi2), 0.0);
  EXPECT_NEAR(std::abs(r.chi3 - k.half_fourier(Channel::z, 0.0).value), 0.0, 1e-15);
  const auto yp = k.half_fourier(Channel::y, 0.0).value;
  EXPECT_NEAR(std::abs(r.gamma2 - yp), 0.0, 1e-15);
}

TEST(RateFunctions, Gamma2AgainstHalfFourier) {
  const KernelTable k(nominal, 10.0);
  const double w = std::numbers::pi / 1.2;
  const auto r = k.rate_functions(w);
  const auto& tau = k.tau_grid();
  std::complex<double> plus = 0.0, minus = 0.0;
  const int sub = 16;
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
    const double h = (tau[i + 1] - tau[i]) / sub;
    for (int j = 0; j < sub; ++j) {
      const double a = tau[i] + j * h, b = a + h;
      const std::complex<double> I(0.0, 1.0);
      plus += 0.5 * h * (k.lambda_y(a) * std::exp(I * w * a) + k.lambda_y(b) * std::exp(I * w * b));
      minus += 0.5 * h * (k.lambda_y(a) * std::exp(-I * w * a) + k.lambda_y(b) * std::exp(-I * w * b));
    }
  }
  EXPECT_NEAR(std::abs(r.gamma2 - 0.5 * (plus + minus)), 0.0, 1e-5 * std::abs(r.gamma2));
}

TEST(VirtualDephasing, LimitsAndMagnitude) {
  EXPECT_EQ(virtual_dephasing_rate(nominal, 0.0), 0.0);
  EXPECT_EQ(virtual_dephasing_rate(nominal.with_mu(0.0), 10.0), 0.0);
  const double g = virtual_dephasing_rate(nominal, 10.0);
  EXPECT_GE(g, 1e-4 / 3.0);
  EXPECT_LE(g, 3e-4);
  const double g2 = virtual_dephasing_rate_from_density(nominal, 10.0);
  EXPECT_NEAR(g, g2, 1e-10 * g);
  // increases with temperature
  EXPECT_LT(virtual_dephasing_rate(nominal, 5.6), g);
  EXPECT_LT(g, virtual_dephasing_rate(nominal, 20.0));
}

TEST(Quadrature, StableUnderDomainDoubling) {
  QuadratureSpec q{.rel_tol = 1e-10};
  QuadratureSpec q2 = q;
  q2.omega_max_factor *= 2.0;
  for (double t : {5.6, 20.0}) {
    const double b1 = franck_condon(nominal, t, q), b2 = franck_condon(nominal, t, q2);
    EXPECT_NEAR(b1, b2, 1e-10 * b1);
    const double g1 = virtual_dephasing_rate(nominal, t, q), g2 = virtual_dephasing_rate(nominal, t, q2);
    EXPECT_NEAR(g1, g2, 1e-10 * g1);
    const auto p1 = propagator_phi(1.0, nominal, t, q), p2 = propagator_phi(1.0, nominal, t, q2);
    EXPECT_NEAR(std::abs(p1 - p2), 0.0, 1e-10 * std::abs(p1));
  }
}

TEST(KernelTable, CsvOutput) {
  const KernelTable k(nominal, 10.0);
  std::ostringstream os;
  k.write_csv(os);
  const auto s = os.str();
  EXPECT_EQ(s.rfind("tau_ps,re_phi,im_phi\n", 0), 0u);
  EXPECT_EQ(s.find('\r'), std::string::npos);
  EXPECT_GT(k.tau_grid().back(), 20.0 / 1.8 - 1e-9);
}
