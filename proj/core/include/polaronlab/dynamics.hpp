#pragma once

// Polaron-frame master equation for a resonantly driven exciton, simulated
// Rabi curves and the phenomenological damped-Rabi form.

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "polaronlab/lindblad.hpp"
#include "polaronlab/ode.hpp"
#include "polaronlab/phonon.hpp"
#include "polaronlab/spline.hpp"
#include "polaronlab/units.hpp"

namespace polaronlab::dynamics {

/// Trace-one Hermitian state of dimension 2 or 3.
class DensityOperator {
 public:
  explicit DensityOperator(CMatrix m);

  static DensityOperator ground(Eigen::Index dim = 2);
  static DensityOperator excited();  // |X><X| in the two-level basis
  static DensityOperator pure(const CVector& psi);

  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double population(Eigen::Index level) const { return m_(level, level).real(); }
  double exciton_population() const { return population(0); }
  std::complex<double> coherence() const { return m_(0, 1); }  // rho_X0

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  CMatrix m_;
};

/// Omega(t) = A / (2 dtau sqrt(pi)) exp(-(t - t0)^2 / (2 dtau)^2).
double pulse_envelope(double t, const PulseSpec& p);

/// Bare drive envelope over a finite window.
class Drive {
 public:
  static Drive gaussian(const PulseSpec& p, double span_widths = 10.0);
  /// Constant Rabi frequency on [t_begin, t_end]; used to test the flat-pulse limit.
  static Drive flat(double rabi_frequency, double t_begin, double t_end);

  double operator()(double t) const;
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  double peak() const { return peak_; }
  double area() const { return area_; }

 private:
  Drive() = default;
  std::optional<PulseSpec> pulse_;
  double flat_value_ = 0.0;
  double t_begin_ = 0.0;
  double t_end_ = 0.0;
  double peak_ = 0.0;
  double area_ = 0.0;
};

enum class VirtualDissipator {
  none,
  static_rate,  // gamma_pd L_{sigma+ sigma}, coherence decays at gamma_pd
  full_rates,   // time-dependent chi_1..3 form
};

struct ModelOptions {
  bool phonons = true;
  bool emission = false;  // (Gamma/2) L_sigma during the pulse
  VirtualDissipator virtual_dissipator = VirtualDissipator::static_rate;
  std::size_t rate_grid_points = 41;
  std::optional<double> gamma_pd_override;  // replaces the computed virtual rate
};

/// Rate functions tabulated over Omega_r in [0, omega_max] (zero plus
/// log-spaced knots) with cubic interpolation.
class RateTable {
 public:
  RateTable(const phonon::KernelTable& kernels, double omega_max, std::size_t points);

  phonon::RateFunctions operator()(double omega_r) const;
  double omega_max() const { return omega_max_; }
  const std::vector<double>& knots() const { return knots_; }

 private:
  double omega_max_;
  std::vector<double> knots_;
  std::vector<ComplexSpline> splines_;  // gamma1..3, chi1..3
};

/// Everything the right-hand side needs at a given temperature. Building it
/// computes the kernel table once; simulations then share it read-only.
class PolaronModel {
 public:
  PolaronModel(const PhononCoupling& c, double temperature_k, const EmitterParams& e,
               ModelOptions opts = {}, const QuadratureSpec& q = {});

  /// Tabulates rates up to the given renormalized Rabi frequency.
  void prepare_rates(double omega_r_max);

  const PhononCoupling& coupling() const { return coupling_; }
  double temperature() const { return temperature_; }
  const EmitterParams& emitter() const { return emitter_; }
  const ModelOptions& options() const { return opts_; }
  double franck_condon() const { return b_; }
  double gamma_pd() const { return gamma_pd_; }
  const phonon::KernelTable* kernels() const { return kernels_.get(); }
  bool has_rate_table() const { return rates_ != nullptr; }

  phonon::RateFunctions rates(double omega_r) const;
  phonon::RateFunctions rates_direct(double omega_r) const;

  /// d rho / dt for bare drive amplitude omega at time t.
  CMatrix rhs(double omega, const CMatrix& rho) const;

  PolaronModel with_virtual(VirtualDissipator v) const;

 private:
  PhononCoupling coupling_;
  double temperature_;
  EmitterParams emitter_;
  ModelOptions opts_;
  QuadratureSpec quad_;
  double b_ = 1.0;
  double gamma_pd_ = 0.0;
  std::shared_ptr<const phonon::KernelTable> kernels_;
  std::shared_ptr<const RateTable> rates_;
};

/// Master-equation derivative at time t under the given drive.
CMatrix master_equation_rhs(double t, const CMatrix& rho, const PolaronModel& model,
                            const Drive& drive);

struct TrajectorySample {
  double t;
  double rho_xx;
  std::complex<double> rho_x0;
};

struct SimulationResult {
  DensityOperator rho_end;
  std::vector<TrajectorySample> trajectory;
};

struct SimulationSpec {
  IntegratorSpec integrator;
  double span_widths = 10.0;  // half-window in units of dtau; 6 would lose ~2e-5 of the area
  std::size_t samples = 241;
};

SimulationResult simulate(const PolaronModel& model, const Drive& drive,
                          const DensityOperator& initial, const SimulationSpec& spec = {});

SimulationResult simulate_pulse(const PulseSpec& p, const PhononCoupling& c, double temperature_k,
                                const EmitterParams& e, const SimulationSpec& spec = {},
                                ModelOptions opts = {});

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory);

struct RabiScanResult {
  std::vector<double> areas;
  std::vector<double> final_population;
  std::vector<double> zpl_intensity;
  double franck_condon = 1.0;
};

/// Final exciton population and ZPL intensity B^2 rho_XX over pulse areas.
/// The pulse template supplies width and center; its area is ignored.
RabiScanResult rabi_scan(const std::vector<double>& areas, const PhononCoupling& c,
                         double temperature_k, const EmitterParams& e,
                         const PulseSpec& pulse_template, const SimulationSpec& spec = {},
                         ModelOptions opts = {}, unsigned threads = 1);

RabiScanResult rabi_scan(const std::vector<double>& areas, const PolaronModel& model,
                         const PulseSpec& pulse_template, const SimulationSpec& spec = {},
                         unsigned threads = 1);

/// c1 [1 - exp(-c2 A^2) cos(c3 A)].
double phenomenological_rabi(double area, double c1, double c2, double c3);

void write_rabi_csv(std::ostream& os, const RabiScanResult& r);

}  // namespace polaronlab::dynamics
