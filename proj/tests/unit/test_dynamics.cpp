#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "polaronlab/dynamics.hpp"
#include "polaronlab/estimation.hpp"
#include "polaronlab/phonon.hpp"

using namespace polaronlab;
using namespace polaronlab::dynamics;

namespace {
constexpr double pi = std::numbers::pi;
const PhononCoupling nominal = PhononCoupling::nominal();
const EmitterParams emitter = EmitterParams::from_lifetime_ps(730.0);

ModelOptions phonons_off() {
  ModelOptions o;
  o.phonons = false;
  return o;
}

SimulationSpec tight() {
  SimulationSpec s;
  s.integrator.rtol = 1e-11;
  s.integrator.atol = 1e-13;
  return s;
}
}  // namespace

TEST(Pulse, EnvelopeIntegratesToArea) {
  for (double a : {0.5, pi, 3.7}) {
    const PulseSpec p(a, 1.2, 0.4);
    const double w = p.width_parameter();
    const double area = oracle::simpson([&](double t) { return pulse_envelope(t, p); },
                                        0.4 - 30.0 * w, 0.4 + 30.0 * w, 20000);
    EXPECT_NEAR(area, a, 1e-9);
  }
  EXPECT_EQ(pulse_envelope(0.1, PulseSpec(0.0, 1.2)), 0.0);
  const auto d = Drive::gaussian(PulseSpec(pi, 1.2));
  EXPECT_NEAR(d.area(), pi, 1e-8);
}

TEST(MasterEquation, FreeDecay) {
  ModelOptions o = phonons_off();
  o.emission = true;
  const EmitterParams fast(0.05);
  const PolaronModel m(nominal, 5.6, fast, o);
  const auto r = simulate(m, Drive::flat(0.0, 0.0, 40.0), DensityOperator::excited(), tight());
  for (const auto& s : r.trajectory) EXPECT_NEAR(s.rho_xx, std::exp(-0.05 * s.t), 1e-9) << s.t;
}

TEST(MasterEquation, PureDephasing) {
  ModelOptions o;
  o.gamma_pd_override = 0.02;
  const PolaronModel m(nominal, 5.6, emitter, o);
  CVector psi(2);
  psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto r = simulate(m, Drive::flat(0.0, 0.0, 100.0), DensityOperator::pure(psi), tight());
  for (const auto& s : r.trajectory) {
    EXPECT_NEAR(std::abs(s.rho_x0), 0.5 * std::exp(-0.02 * s.t), 1e-9) << s.t;
    EXPECT_NEAR(s.rho_xx, 0.5, 1e-12);
  }
}

TEST(MasterEquation, FlatRabiLimit) {
  const double omega = 0.8;
  const PolaronModel m(PhononCoupling(0.0, 1.8), 5.6, emitter, {});
  const auto r = simulate(m, Drive::flat(omega, 0.0, 20.0), DensityOperator::ground(), tight());
  double lo = 1.0, hi = 0.0;
  for (const auto& s : r.trajectory) {
    EXPECT_NEAR(s.rho_xx, std::pow(std::sin(0.5 * omega * s.t), 2), 1e-8) << s.t;
    lo = std::min(lo, s.rho_xx);
    hi = std::max(hi, s.rho_xx);
  }
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1.0 - 1e-3);
}

TEST(SimulatePulse, InversionWithoutPhonons) {
  const auto r1 = simulate_pulse(PulseSpec(pi, 1.2), nominal, 5.6, emitter, tight(), phonons_off());
  EXPECT_NEAR(r1.rho_end.exciton_population(), 1.0, 1e-6);
  const auto r2 = simulate_pulse(PulseSpec(2.0 * pi, 1.2), nominal, 5.6, emitter, tight(), phonons_off());
  EXPECT_NEAR(r2.rho_end.exciton_population(), 0.0, 1e-6);
}

TEST(SimulatePulse, PhysicalStateAndTemperatureOrdering) {
  const auto cold = simulate_pulse(PulseSpec(pi, 1.2), nominal, 5.6, emitter);
  const auto hot = simulate_pulse(PulseSpec(pi, 1.2), nominal, 20.0, emitter);
  for (const auto* r : {&cold, &hot}) {
    EXPECT_LT(r->rho_end.trace_error(), 1e-12);
    EXPECT_LT(r->rho_end.hermiticity_error(), 1e-12);
    EXPECT_GT(r->rho_end.min_eigenvalue(), -1e-9);
  }
  EXPECT_LT(hot.rho_end.exciton_population(), cold.rho_end.exciton_population());
}

TEST(RabiScan, NoCouplingIsSinSquared) {
  std::vector<double> a;
  for (int i = 0; i <= 16; ++i) a.push_back(i * pi / 4.0);
  const auto s = rabi_scan(a, PhononCoupling(0.0, 1.8), 10.0, emitter, PulseSpec(pi, 1.2), tight());
  EXPECT_EQ(s.franck_condon, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(s.zpl_intensity[i], std::pow(std::sin(0.5 * a[i]), 2), 1e-6) << a[i];
  }
}

TEST(RabiScan, FirstMaximumNearPi) {
  std::vector<double> a;
  for (int i = 1; i <= 100; ++i) a.push_back(i * 0.05);
  const auto s = rabi_scan(a, nominal, 5.6, emitter, PulseSpec(pi, 1.2), {}, {}, 4);
  std::size_t im = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (s.final_population[i] > s.final_population[im]) im = i;
  }
  EXPECT_LE(std::abs(a[im] - pi) / pi, 0.05);
}

TEST(RabiScan, ThreadCountDoesNotChangeResults) {
  std::vector<double> a{0.5, 1.5, pi, 5.0, 7.5};
  const auto s1 = rabi_scan(a, nominal, 10.0, emitter, PulseSpec(pi, 1.2), {}, {}, 1);
  const auto s4 = rabi_scan(a, nominal, 10.0, emitter, PulseSpec(pi, 1.2), {}, {}, 4);
  EXPECT_EQ(s1.zpl_intensity, s4.zpl_intensity);
  EXPECT_EQ(s1.final_population, s4.final_population);
}

// The period of the damped oscillation (1 / c3) is expected to scale as
// 1 / B(T) between the coldest and hottest temperatures.
TEST(RabiScan, PeriodScalesWithFranckCondon) {
  std::vector<double> a;
  for (int i = 0; i < 40; ++i) a.push_back(0.1 * pi + (4.0 * pi - 0.1 * pi) * i / 39.0);
  double c3[2];
  int k = 0;
  for (double t : {5.6, 20.0}) {
    const auto s = rabi_scan(a, nominal, t, emitter, PulseSpec(pi, 1.2), {}, {}, 4);
    c3[k++] = estimation::fit_rabi_curve({a, s.zpl_intensity, {}}).c3;
  }
  const double b_ratio = phonon::franck_condon(nominal, 20.0) / phonon::franck_condon(nominal, 5.6);
  EXPECT_NEAR(c3[1] / c3[0], b_ratio, 0.02 * b_ratio);
}

TEST(RabiScan, CsvHeader) {
  const auto s = rabi_scan({0.0, pi}, PhononCoupling(0.0, 1.8), 5.6, emitter, PulseSpec(pi, 1.2));
  std::ostringstream os;
  write_rabi_csv(os, s);
  EXPECT_EQ(os.str().rfind("area_rad,final_population,zpl_intensity\n", 0), 0u);
}

TEST(Phenomenological, Examples) {
  EXPECT_EQ(phenomenological_rabi(0.0, 0.7, 0.1, 1.0), 0.0);
  EXPECT_NEAR(phenomenological_rabi(2.0, 0.7, 0.0, 0.9), 0.7 * (1.0 - std::cos(1.8)), 1e-15);
  EXPECT_NEAR(phenomenological_rabi(pi, 1.0, 0.01, 1.0), 1.9061, 1e-4);
}

TEST(VirtualRates, StaticApproximation) {
  ModelOptions stat, full, none;
  full.virtual_dissipator = VirtualDissipator::full_rates;
  none.virtual_dissipator = VirtualDissipator::none;
  const PulseSpec p(pi, 1.2);
  const auto rs = simulate_pulse(p, nominal, 20.0, emitter, {}, stat);
  const auto rf = simulate_pulse(p, nominal, 20.0, emitter, {}, full);
  EXPECT_LT(std::abs(rs.rho_end.exciton_population() - rf.rho_end.exciton_population()), 1e-4);

  const auto no_mu = nominal.with_mu(0.0);
  const auto a = simulate_pulse(p, no_mu, 20.0, emitter, {}, stat);
  const auto b = simulate_pulse(p, no_mu, 20.0, emitter, {}, none);
  EXPECT_EQ(a.rho_end.exciton_population(), b.rho_end.exciton_population());

  const auto big = nominal.with_mu(1.1e3);
  const auto bs = simulate_pulse(p, big, 20.0, emitter, {}, stat);
  const auto bf = simulate_pulse(p, big, 20.0, emitter, {}, full);
  EXPECT_GT(std::abs(bs.rho_end.exciton_population() - bf.rho_end.exciton_population()), 1e-3);
}

TEST(Trajectory, CsvRoundTrip) {
  const auto r = simulate_pulse(PulseSpec(pi, 1.2), nominal, 5.6, emitter);
  std::ostringstream os;
  write_trajectory_csv(os, r.trajectory);
  EXPECT_EQ(os.str().rfind("t_ps,rho_xx,re_rho_x0,im_rho_x0\n", 0), 0u);
  EXPECT_EQ(r.trajectory.size(), SimulationSpec{}.samples);
}

TEST(Dynamics, RejectsInvalidInput) {
  EXPECT_THROW(PolaronModel(nominal, -1.0, emitter), InvalidParameter);
  EXPECT_THROW(PolaronModel(nominal, 5.6, EmitterParams(1.0 / 730.0, 0.1)), InvalidParameter);
  EXPECT_THROW(rabi_scan({2.0, 1.0}, nominal, 5.6, emitter, PulseSpec(pi, 1.2)), InvalidParameter);
  EXPECT_THROW(DensityOperator(CMatrix::Identity(2, 2)), InvalidParameter);
}
