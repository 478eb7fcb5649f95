#include "polaronlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "polaronlab/csv.hpp"
#include "polaronlab/parallel.hpp"

namespace polaronlab::dynamics {

using cplx = std::complex<double>;
using detail::require;

namespace {

constexpr cplx kI{0.0, 1.0};

// Lambda_z carries a 2 pi relative to gamma_pd: Re gamma_z(0) = 2 pi gamma_pd.
// The chi rates are rescaled so that their zero-drive limit reproduces the
// static gamma_pd dissipator.
constexpr double kVirtualRateScale = 1.0 / (2.0 * std::numbers::pi);

struct Operators {
  CMatrix sx = tls::sigma_x();
  CMatrix sy = tls::sigma_y();
  CMatrix sz = tls::sigma_z();
  CMatrix sm = tls::sigma_minus();
  CMatrix proj = tls::exciton_projector();
};

const Operators& ops() {
  static const Operators o;
  return o;
}

}  // namespace

DensityOperator::DensityOperator(CMatrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols() && (m_.rows() == 2 || m_.rows() == 3),
          "density operator must be 2x2 or 3x3");
  require(m_.allFinite(), "density operator must be finite");
  require(hermiticity_error() <= 1e-12, "density operator must be Hermitian");
  require(trace_error() <= 1e-10, "density operator must have unit trace");
}

DensityOperator DensityOperator::ground(Eigen::Index dim) {
  require(dim == 2 || dim == 3, "dimension must be 2 or 3");
  CMatrix m = CMatrix::Zero(dim, dim);
  m(1, 1) = 1.0;  // |0> is index 1 in both bases
  return DensityOperator(m);
}

DensityOperator DensityOperator::excited() {
  return DensityOperator(tls::exciton_projector());
}

DensityOperator DensityOperator::pure(const CVector& psi) {
  const double norm = psi.norm();
  require(norm > 0.0, "state vector must be non-zero");
  const CVector v = psi / norm;
  return DensityOperator(v * v.adjoint());
}

double DensityOperator::trace_error() const { return std::abs(m_.trace() - 1.0); }

double DensityOperator::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_);
  return es.eigenvalues().minCoeff();
}

double pulse_envelope(double t, const PulseSpec& p) {
  const double dtau = p.width_parameter();
  const double x = (t - p.center()) / (2.0 * dtau);
  return p.area() / (2.0 * dtau * std::sqrt(std::numbers::pi)) * std::exp(-x * x);
}

Drive Drive::gaussian(const PulseSpec& p, double span_widths) {
  require(span_widths >= 5.0, "integration window must cover at least +-5 dtau");
  Drive d;
  d.pulse_ = p;
  const double dtau = p.width_parameter();
  d.t_begin_ = p.center() - span_widths * dtau;
  d.t_end_ = p.center() + span_widths * dtau;
  d.peak_ = pulse_envelope(p.center(), p);
  d.area_ = p.area();
  return d;
}

Drive Drive::flat(double rabi_frequency, double t_begin, double t_end) {
  require(t_end > t_begin, "flat drive needs t_end > t_begin");
  require(std::isfinite(rabi_frequency), "flat drive amplitude must be finite");
  Drive d;
  d.flat_value_ = rabi_frequency;
  d.t_begin_ = t_begin;
  d.t_end_ = t_end;
  d.peak_ = rabi_frequency;
  d.area_ = rabi_frequency * (t_end - t_begin);
  return d;
}

double Drive::operator()(double t) const {
  if (pulse_) return pulse_envelope(t, *pulse_);
  return (t >= t_begin_ && t <= t_end_) ? flat_value_ : 0.0;
}

RateTable::RateTable(const phonon::KernelTable& kernels, double omega_max, std::size_t points)
    : omega_max_(omega_max) {
  require(omega_max > 0.0, "rate table needs omega_max > 0");
  require(points >= 4, "rate table needs at least 4 points");
  knots_.push_back(0.0);
  const double lo = std::log(omega_max * 1e-3);
  const double hi = std::log(omega_max);
  for (std::size_t k = 0; k + 1 < points; ++k) {
    knots_.push_back(std::exp(lo + (hi - lo) * static_cast<double>(k) /
                                       static_cast<double>(points - 2)));
  }
  std::vector<std::vector<cplx>> cols(6, std::vector<cplx>(knots_.size()));
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const auto r = kernels.rate_functions(knots_[i]);
    cols[0][i] = r.gamma1;
    cols[1][i] = r.gamma2;
    cols[2][i] = r.gamma3;
    cols[3][i] = r.chi1;
    cols[4][i] = r.chi2;
    cols[5][i] = r.chi3;
  }
  for (const auto& c : cols) splines_.emplace_back(knots_, c);
}

phonon::RateFunctions RateTable::operator()(double omega_r) const {
  return {splines_[0](omega_r), splines_[1](omega_r), splines_[2](omega_r),
          splines_[3](omega_r), splines_[4](omega_r), splines_[5](omega_r)};
}

PolaronModel::PolaronModel(const PhononCoupling& c, double temperature_k, const EmitterParams& e,
                           ModelOptions opts, const QuadratureSpec& q)
    : coupling_(c), temperature_(temperature_k), emitter_(e), opts_(opts), quad_(q) {
  require(temperature_k >= 0.0, "temperature must be >= 0 K");
  require(e.detuning() == 0.0,
          "only the resonant polaron master equation is implemented (detuning must be 0)");
  if (opts_.phonons && c.alpha() > 0.0) {
    kernels_ = std::make_shared<phonon::KernelTable>(c, temperature_k, q);
    b_ = kernels_->franck_condon();
  }
  if (opts_.phonons && opts_.virtual_dissipator != VirtualDissipator::none) {
    gamma_pd_ = phonon::virtual_dephasing_rate(c, temperature_k, q);
  }
  if (opts_.gamma_pd_override) {
    require(*opts_.gamma_pd_override >= 0.0, "gamma_pd override must be >= 0");
    gamma_pd_ = *opts_.gamma_pd_override;
  }
}

void PolaronModel::prepare_rates(double omega_r_max) {
  if (!kernels_ || omega_r_max <= 0.0) return;
  if (rates_ && rates_->omega_max() >= omega_r_max) return;
  rates_ = std::make_shared<RateTable>(*kernels_, omega_r_max, opts_.rate_grid_points);
}

phonon::RateFunctions PolaronModel::rates(double omega_r) const {
  const double w = std::abs(omega_r);
  phonon::RateFunctions r =
      (rates_ && w <= rates_->omega_max()) ? (*rates_)(w) : rates_direct(w);
  if (omega_r < 0.0) {
    r.gamma3 = -r.gamma3;
    r.chi2 = -r.chi2;
  }
  return r;
}

phonon::RateFunctions PolaronModel::rates_direct(double omega_r) const {
  if (!kernels_) return {};
  return kernels_->rate_functions(std::abs(omega_r));
}

CMatrix PolaronModel::rhs(double omega, const CMatrix& rho) const {
  const auto& o = ops();
  const double omega_r = b_ * omega;
  CMatrix out = -kI * (0.5 * omega_r) * commutator(o.sx, rho);

  const bool need_rates =
      kernels_ && (omega != 0.0 || opts_.virtual_dissipator == VirtualDissipator::full_rates);
  const phonon::RateFunctions r = need_rates ? rates(omega_r) : phonon::RateFunctions{};

  if (kernels_ && omega != 0.0) {
    CMatrix k = r.gamma1 * commutator(o.sx, o.sx * rho) +
                r.gamma2 * commutator(o.sy, o.sy * rho) +
                r.gamma3 * commutator(o.sy, o.sz * rho);
    out -= 0.25 * omega * omega * (k + k.adjoint());
  }

  switch (opts_.virtual_dissipator) {
    case VirtualDissipator::none:
      break;
    case VirtualDissipator::static_rate:
      if (gamma_pd_ != 0.0) out += gamma_pd_ * lindblad_dissipator(o.proj, rho);
      break;
    case VirtualDissipator::full_rates:
      if (kernels_ && coupling_.mu() > 0.0) {
        const CMatrix a = r.chi1 * CMatrix::Identity(2, 2) + r.chi2 * o.sy + r.chi3 * o.proj;
        const CMatrix kq = commutator(o.proj, a * rho);
        out -= kVirtualRateScale * (kq + kq.adjoint());
      }
      break;
  }

  if (opts_.emission) {
    out += 0.5 * emitter_.gamma_emission() * lindblad_dissipator(o.sm, rho);
  }
  return out;
}

PolaronModel PolaronModel::with_virtual(VirtualDissipator v) const {
  PolaronModel m = *this;
  m.opts_.virtual_dissipator = v;
  if (v != VirtualDissipator::none && m.opts_.phonons && !opts_.gamma_pd_override &&
      gamma_pd_ == 0.0) {
    m.gamma_pd_ = phonon::virtual_dephasing_rate(coupling_, temperature_, quad_);
  }
  return m;
}

CMatrix master_equation_rhs(double t, const CMatrix& rho, const PolaronModel& model,
                            const Drive& drive) {
  require(rho.rows() == 2 && rho.cols() == 2, "polaron master equation is two-level");
  return model.rhs(drive(t), rho);
}

SimulationResult simulate(const PolaronModel& model, const Drive& drive,
                          const DensityOperator& initial, const SimulationSpec& spec) {
  require(initial.dim() == 2, "pulse simulation needs a two-level state");
  require(spec.samples >= 2, "need at least two trajectory samples");
  SimulationResult out{initial, {}};

  const PolaronModel* m = &model;
  std::optional<PolaronModel> local;
  const double omega_r_max = model.franck_condon() * std::abs(drive.peak());
  if (model.kernels() && omega_r_max > 0.0 && !model.has_rate_table()) {
    local = model;
    local->prepare_rates(omega_r_max);
    m = &*local;
  }

  std::vector<double> times(spec.samples);
  const double dt = (drive.t_end() - drive.t_begin()) / static_cast<double>(spec.samples - 1);
  for (std::size_t i = 0; i < spec.samples; ++i) times[i] = drive.t_begin() + dt * i;
  times.back() = drive.t_end();

  const auto traj = integrate_matrix(
      [&](double t, const CMatrix& rho) { return master_equation_rhs(t, rho, *m, drive); },
      initial.matrix(), times, spec.integrator);

  out.trajectory.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto& s = traj.states[i];
    out.trajectory.push_back({traj.times[i], s(0, 0).real(), s(0, 1)});
  }
  const CMatrix& last = traj.states.back();
  CMatrix herm = 0.5 * (last + last.adjoint());
  herm /= herm.trace().real();
  out.rho_end = DensityOperator(herm);
  return out;
}

SimulationResult simulate_pulse(const PulseSpec& p, const PhononCoupling& c, double temperature_k,
                                const EmitterParams& e, const SimulationSpec& spec,
                                ModelOptions opts) {
  require(p.carrier_detuning() == 0.0, "only resonant driving is supported");
  const Drive drive = Drive::gaussian(p, spec.span_widths);
  if (p.area() == 0.0) {
    const auto g = DensityOperator::ground();
    return {g, {{drive.t_begin(), 0.0, 0.0}, {drive.t_end(), 0.0, 0.0}}};
  }
  PolaronModel model(c, temperature_k, e, opts);
  return simulate(model, drive, DensityOperator::ground(), spec);
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory) {
  std::vector<std::vector<double>> cols(4);
  for (const auto& s : trajectory) {
    cols[0].push_back(s.t);
    cols[1].push_back(s.rho_xx);
    cols[2].push_back(s.rho_x0.real());
    cols[3].push_back(s.rho_x0.imag());
  }
  csv::write(os, {"t_ps", "rho_xx", "re_rho_x0", "im_rho_x0"}, cols);
}

RabiScanResult rabi_scan(const std::vector<double>& areas, const PolaronModel& model,
                         const PulseSpec& pulse_template, const SimulationSpec& spec,
                         unsigned threads) {
  require(pulse_template.carrier_detuning() == 0.0, "only resonant driving is supported");
  require(std::is_sorted(areas.begin(), areas.end()), "pulse areas must be sorted ascending");

  RabiScanResult out;
  out.areas = areas;
  out.franck_condon = model.franck_condon();
  out.final_population.assign(areas.size(), 0.0);
  out.zpl_intensity.assign(areas.size(), 0.0);
  if (areas.empty()) return out;

  double max_area = 0.0;
  for (double a : areas) max_area = std::max(max_area, std::abs(a));
  PolaronModel prepared = model;
  const double peak = pulse_envelope(pulse_template.center(), pulse_template.with_area(max_area));
  prepared.prepare_rates(prepared.franck_condon() * peak);

  const double b2 = out.franck_condon * out.franck_condon;
  SimulationSpec s = spec;
  s.samples = 2;
  parallel_for(areas.size(), threads, [&](std::size_t i) {
    if (areas[i] == 0.0) return;  // ground state is left untouched
    const Drive drive = Drive::gaussian(pulse_template.with_area(areas[i]), s.span_widths);
    const auto r = simulate(prepared, drive, DensityOperator::ground(), s);
    out.final_population[i] = r.rho_end.exciton_population();
    out.zpl_intensity[i] = b2 * out.final_population[i];
  });
  return out;
}

RabiScanResult rabi_scan(const std::vector<double>& areas, const PhononCoupling& c,
                         double temperature_k, const EmitterParams& e,
                         const PulseSpec& pulse_template, const SimulationSpec& spec,
                         ModelOptions opts, unsigned threads) {
  return rabi_scan(areas, PolaronModel(c, temperature_k, e, opts), pulse_template, spec, threads);
}

double phenomenological_rabi(double area, double c1, double c2, double c3) {
  return c1 * (1.0 - std::exp(-c2 * area * area) * std::cos(c3 * area));
}

void write_rabi_csv(std::ostream& os, const RabiScanResult& r) {
  csv::write(os, {"area_rad", "final_population", "zpl_intensity"},
             {r.areas, r.final_population, r.zpl_intensity});
}

}  // namespace polaronlab::dynamics
