#include <cmath>

#include <gtest/gtest.h>

#include "polaronlab/units.hpp"

using namespace polaronlab;

TEST(Units, ThermalFrequency) {
  EXPECT_EQ(units::thermal_frequency(0.0), 0.0);
  EXPECT_NEAR(units::thermal_frequency(10.0), 0.0861733 * 10.0 / 0.6582119, 1e-12);
  EXPECT_NEAR(units::thermal_frequency(10.0), 1.309, 5e-4);
  EXPECT_NEAR(units::thermal_frequency(5.6), 0.7331, 5e-4);
  EXPECT_THROW(units::thermal_frequency(-1.0), InvalidParameter);
}

TEST(Units, EnergyRateConversion) {
  EXPECT_EQ(units::rate_uev_to_psinv(0.0), 0.0);
  EXPECT_NEAR(units::rate_uev_to_psinv(658.2119), 1.0, 1e-12);
  EXPECT_NEAR(units::rate_uev_to_psinv(0.37), 5.621e-4, 5e-7);
  EXPECT_NEAR(units::rate_psinv_to_uev(units::rate_uev_to_psinv(1.234)), 1.234, 1e-14);
  EXPECT_DOUBLE_EQ(units::ns_to_ps(12.2), 12200.0);
  EXPECT_DOUBLE_EQ(units::ps_to_ns(730.0), 0.73);
}

TEST(PhononCoupling, Validation) {
  EXPECT_NO_THROW(PhononCoupling(0.0, 1.8));
  EXPECT_THROW(PhononCoupling(-0.1, 1.8), InvalidParameter);
  EXPECT_THROW(PhononCoupling(0.13, 0.0), InvalidParameter);
  EXPECT_THROW(PhononCoupling(0.13, 1.8, -1e-3), InvalidParameter);
  EXPECT_THROW(PhononCoupling(NAN, 1.8), InvalidParameter);
  const auto c = PhononCoupling::nominal();
  EXPECT_NEAR(c.alpha_q(), 0.13 * 0.13 * 1.1e-3 / std::pow(1.8, 4), 1e-18);
  EXPECT_EQ(c.with_mu(0.0).alpha_q(), 0.0);
}

TEST(EmitterParams, Validation) {
  EXPECT_THROW(EmitterParams(0.0), InvalidParameter);
  EXPECT_THROW(EmitterParams(-1.0), InvalidParameter);
  const auto e = EmitterParams::from_lifetime_ps(730.0);
  EXPECT_DOUBLE_EQ(e.gamma_emission(), 1.0 / 730.0);
  EXPECT_DOUBLE_EQ(e.lifetime_ps(), 730.0);
}

TEST(PulseSpec, WidthParameter) {
  const PulseSpec p(M_PI, 1.2);
  EXPECT_NEAR(p.width_parameter(), 1.2 / (4.0 * std::sqrt(std::log(2.0))), 1e-15);
  EXPECT_NEAR(p.width_parameter(), 0.3603, 1e-4);
  EXPECT_THROW(PulseSpec(M_PI, 0.0), InvalidParameter);
  EXPECT_THROW(PulseSpec(M_PI, -1.2), InvalidParameter);
  EXPECT_DOUBLE_EQ(p.with_area(2.0).fwhm(), 1.2);
}

TEST(OtherTypes, Validation) {
  EXPECT_THROW(Environment(-0.1), InvalidParameter);
  EXPECT_NO_THROW(Environment(0.0));
  EXPECT_THROW(ChargeNoise(-0.1, 6.0), InvalidParameter);
  EXPECT_THROW(ChargeNoise(0.37, 0.0), InvalidParameter);
  EXPECT_THROW(PumpLevel(0.0), InvalidParameter);
  EXPECT_DOUBLE_EQ(ChargeNoise::s_shell().gamma0_uev(), 0.37);
  EXPECT_DOUBLE_EQ(ChargeNoise::p_shell().tau_c_ns(), 5.8);
}
