#include "polaronlab/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "polaronlab/csv.hpp"

namespace polaronlab::histogram {

using detail::require;

namespace {

// exp(x^2) erfc(x)
double erfcx(double x) {
  if (x < 26.0) return std::exp(x * x) * std::erfc(x);
  const double inv2 = 1.0 / (x * x);
  return (1.0 - 0.5 * inv2 * (1.0 - 1.5 * inv2 * (1.0 - 2.5 * inv2))) / (x * std::sqrt(std::numbers::pi));
}

// 1/2 erfc(w / sqrt 2) exp((w^2 - y^2) / 2) with w = r + y, evaluated
// without overflow or cancellation in the exponent.
double term(double r, double y) {
  const double w = r + y;
  const double s = w / std::numbers::sqrt2;
  if (w < 0.0) return 0.5 * std::erfc(s) * std::exp(r * (0.5 * r + y));
  return 0.5 * erfcx(s) * std::exp(-0.5 * y * y);
}

// Floor on the model variance used as a Poisson weight, in counts.
constexpr double kMinVariance = 0.1;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

PeakModel::PeakModel(double center_ns, double decay_time_ns, double resolution_sigma_ns,
                     double area)
    : center_(center_ns), decay_time_(decay_time_ns), sigma_(resolution_sigma_ns), area_(area) {
  require(std::isfinite(center_ns), "peak center must be finite");
  require(decay_time_ns > 0.0 && std::isfinite(decay_time_ns), "decay_time must be > 0");
  require(resolution_sigma_ns >= 0.0 && std::isfinite(resolution_sigma_ns),
          "resolution_sigma must be >= 0");
  require(area >= 0.0 && std::isfinite(area), "peak area must be >= 0");
}

double PeakModel::cdf(double t_ns) const {
  const double x = t_ns - center_;
  const double b = decay_time_;
  if (sigma_ == 0.0) {
    return x < 0.0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
  }
  const double z = x / sigma_;
  const double r = sigma_ / b;
  return normal_cdf(z) - 0.5 * (term(r, -z) - term(r, z));
}

double peak_shape(double t_ns, const PeakModel& p) {
  const double x = t_ns - p.center();
  const double b = p.decay_time();
  const double s = p.resolution_sigma();
  if (s == 0.0) return p.area() / (2.0 * b) * std::exp(-std::abs(x) / b);
  const double z = x / s;
  const double r = s / b;
  return p.area() / (2.0 * b) * (term(r, z) + term(r, -z));
}

Binning Binning::centered(double half_span_ns, double width_ns) {
  require(half_span_ns > 0.0 && width_ns > 0.0, "binning needs positive span and width");
  const auto half = static_cast<std::size_t>(std::ceil(half_span_ns / width_ns - 0.5));
  // odd bin count with a bin centered on zero
  return {-(static_cast<double>(half) + 0.5) * width_ns, width_ns, 2 * half + 1};
}

void Binning::validate() const {
  require(width_ns > 0.0 && std::isfinite(width_ns), "bin width must be > 0");
  require(std::isfinite(start_ns), "bin start must be finite");
}

double Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

namespace {

// Fraction of a peak's area in every bin. Edges right of the center use the
// mirrored lower tail, so tail bins keep full relative precision instead of
// differencing numbers close to one.
void bin_fractions(const PeakModel& p, const Binning& b, std::vector<double>& out) {
  const double c = p.center();
  std::vector<double> tail(b.count + 1);
  for (std::size_t e = 0; e <= b.count; ++e) {
    const double t = b.lower(e);
    tail[e] = t <= c ? p.cdf(t) : p.cdf(2.0 * c - t);
  }
  out.resize(b.count);
  for (std::size_t k = 0; k < b.count; ++k) {
    const bool left = b.lower(k) <= c, right = b.lower(k + 1) <= c;
    if (right) {
      out[k] = tail[k + 1] - tail[k];
    } else if (!left) {
      out[k] = tail[k] - tail[k + 1];
    } else {
      out[k] = 1.0 - tail[k] - tail[k + 1];
    }
  }
}

}  // namespace

std::vector<double> expected_counts(const std::vector<PeakModel>& peaks, const Binning& b,
                                    double baseline) {
  b.validate();
  require(baseline >= 0.0, "baseline must be >= 0");
  std::vector<double> out(b.count, baseline);
  std::vector<double> frac;
  for (const auto& p : peaks) {
    bin_fractions(p, b, frac);
    for (std::size_t k = 0; k < b.count; ++k) out[k] += p.area() * frac[k];
  }
  return out;
}

Histogram expected_histogram(const std::vector<PeakModel>& peaks, const Binning& b,
                             double baseline) {
  return {b, expected_counts(peaks, b, baseline)};
}

Histogram synthesize_histogram(const std::vector<PeakModel>& peaks, const Binning& b,
                               std::uint64_t noise_seed, double baseline) {
  Histogram h = expected_histogram(peaks, b, baseline);
  std::mt19937_64 rng(noise_seed);
  for (double& c : h.counts) {
    // clamp tiny negative values from CDF cancellation
    const double mean = std::max(c, 0.0);
    c = mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(rng)) : 0.0;
  }
  return h;
}

void FitConfig::validate() const {
  require(pulse_period_ns > 0.0, "pulse period must be > 0");
  require(n_peaks >= 1, "at least one peak is required");
  if (layout == Layout::hbt) {
    require(n_peaks % 2 == 1, "hbt layout needs an odd number of peaks");
  } else {
    require(pair_delay_ns > 0.0, "pair delay must be > 0");
    require(4.0 * pair_delay_ns < pulse_period_ns, "pair structure must fit inside one period");
    require(n_peaks % 5 == 0 && (n_peaks / 5) % 2 == 1,
            "hom layout needs an odd number of five-peak clusters");
  }
  if (t1_guess_ns) require(*t1_guess_ns > 0.0, "t1 guess must be > 0");
  if (sigma_guess_ns) require(*sigma_guess_ns >= 0.0, "sigma guess must be >= 0");
}

std::vector<double> peak_grid(const FitConfig& cfg) {
  cfg.validate();
  std::vector<double> out;
  if (cfg.layout == Layout::hbt) {
    const auto half = static_cast<long>(cfg.n_peaks / 2);
    for (long k = -half; k <= half; ++k) out.push_back(static_cast<double>(k) * cfg.pulse_period_ns);
  } else {
    const auto half = static_cast<long>(cfg.n_peaks / 10);
    for (long c = -half; c <= half; ++c) {
      for (int j = -2; j <= 2; ++j) {
        out.push_back(static_cast<double>(c) * cfg.pulse_period_ns + j * cfg.pair_delay_ns);
      }
    }
  }
  return out;
}

namespace {

// Parameter layout. Shared shape: [t1, sigma^2, baseline, (center, area)...].
// Per-peak shape: [baseline, (center, area, t1, sigma^2)...]. Bin counts
// depend smoothly on sigma^2, while sigma = 0 is a stationary point in sigma.
struct ParamMap {
  bool shared;
  std::size_t n;
  Eigen::Index baseline() const { return shared ? 2 : 0; }
  Eigen::Index center(std::size_t k) const {
    return static_cast<Eigen::Index>(shared ? 3 + 2 * k : 1 + 4 * k);
  }
  Eigen::Index area(std::size_t k) const { return center(k) + 1; }
  Eigen::Index t1(std::size_t k) const { return shared ? 0 : center(k) + 2; }
  Eigen::Index variance(std::size_t k) const { return shared ? 1 : center(k) + 3; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(shared ? 3 + 2 * n : 1 + 4 * n); }
};

std::vector<PeakModel> peaks_from(const Eigen::VectorXd& p, const ParamMap& m) {
  std::vector<PeakModel> out;
  out.reserve(m.n);
  for (std::size_t k = 0; k < m.n; ++k) {
    out.emplace_back(p[m.center(k)], p[m.t1(k)], std::sqrt(std::max(p[m.variance(k)], 0.0)),
                     p[m.area(k)]);
  }
  return out;
}

double window_sum(const Histogram& h, double lo, double hi) {
  double s = 0.0;
  for (std::size_t k = 0; k < h.binning.count; ++k) {
    const double c = h.binning.center(k);
    if (c >= lo && c < hi) s += h.counts[k];
  }
  return s;
}

// Mean |t - center| of the counts within the window: T1 for a sharp
// two-sided exponential.
double window_decay(const Histogram& h, double center, double half) {
  double s = 0.0, w = 0.0;
  for (std::size_t k = 0; k < h.binning.count; ++k) {
    const double x = h.binning.center(k) - center;
    if (std::abs(x) < half) {
      s += h.counts[k] * std::abs(x);
      w += h.counts[k];
    }
  }
  return w > 0.0 ? s / w : 0.0;
}

// Distance from sigma to the one-standard-error upper limit implied by the
// variance estimate; equals the delta-method error when sigma >> its error.
double sigma_error(double variance, double variance_error) {
  const double s = std::sqrt(std::max(variance, 0.0));
  return variance_error / (s + std::sqrt(s * s + variance_error));
}

}  // namespace

HistogramFit fit_histogram(const Histogram& h, const FitConfig& cfg) {
  h.binning.validate();
  require(h.counts.size() == h.binning.count, "histogram counts do not match the binning");
  require(h.binning.count > 0, "histogram has no bins");
  for (double c : h.counts) require(c >= 0.0 && std::isfinite(c), "counts must be >= 0");
  const std::vector<double> grid = peak_grid(cfg);
  const std::size_t n = grid.size();
  if (h.total() <= 0.0) throw fit::FitError("histogram is empty; nothing to fit");

  const double spacing = cfg.layout == Layout::hbt ? cfg.pulse_period_ns : cfg.pair_delay_ns;
  const ParamMap m{cfg.shared_shape, n};
  const Eigen::Index np = m.size();
  require(static_cast<Eigen::Index>(h.binning.count) > np, "more parameters than bins");

  // initial guess: areas from bin sums over one spacing around each nominal center
  std::vector<double> area0(n);
  for (std::size_t k = 0; k < n; ++k) {
    area0[k] = window_sum(h, grid[k] - 0.5 * spacing, grid[k] + 0.5 * spacing);
  }
  const std::size_t brightest =
      static_cast<std::size_t>(std::max_element(area0.begin(), area0.end()) - area0.begin());
  const double t1_0 = cfg.t1_guess_ns.value_or(
      std::max(window_decay(h, grid[brightest], 0.5 * spacing), 2.0 * h.binning.width_ns));
  const double sigma0 = cfg.sigma_guess_ns.value_or(std::min(h.binning.width_ns, 0.5 * t1_0));

  Eigen::VectorXd p0(np);
  fit::Bounds bounds = fit::Bounds::non_negative(np);
  p0[m.baseline()] = 0.0;
  if (!cfg.fit_baseline) bounds.upper[m.baseline()] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    p0[m.center(k)] = grid[k];
    bounds.lower[m.center(k)] = grid[k] - 0.5 * spacing;
    bounds.upper[m.center(k)] = grid[k] + 0.5 * spacing;
    p0[m.area(k)] = area0[k];
    p0[m.t1(k)] = t1_0;
    bounds.lower[m.t1(k)] = 1e-6;
    p0[m.variance(k)] = sigma0 * sigma0;
  }

  const auto nb = static_cast<Eigen::Index>(h.binning.count);
  std::vector<double> weight(h.binning.count, 1.0);
  if (cfg.weighting != Weighting::unweighted) {
    for (std::size_t k = 0; k < weight.size(); ++k) {
      weight[k] = 1.0 / std::sqrt(std::max(h.counts[k], 1.0));
    }
  }
  fit::ResidualFn residuals = [&](const Eigen::VectorXd& p) {
    const auto model = expected_counts(peaks_from(p, m), h.binning, p[m.baseline()]);
    Eigen::VectorXd r(nb);
    for (Eigen::Index k = 0; k < nb; ++k) r[k] = (h.counts[k] - model[k]) * weight[k];
    return r;
  };
  // Areas, centers and the baseline enter linearly or through the peak's own
  // density; only the shape parameters need finite differences.
  fit::JacobianFn jacobian = [&](const Eigen::VectorXd& p) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(nb, np);
    const auto peaks = peaks_from(p, m);
    std::vector<double> f, fa, fb;
    for (std::size_t i = 0; i < n; ++i) {
      const PeakModel unit(peaks[i].center(), peaks[i].decay_time(), peaks[i].resolution_sigma(),
                           1.0);
      bin_fractions(unit, h.binning, f);
      double dens_prev = peak_shape(h.binning.lower(0), unit);
      for (Eigen::Index k = 0; k < nb; ++k) {
        const double dens = peak_shape(h.binning.lower(k + 1), unit);
        j(k, m.area(i)) = -weight[k] * f[k];
        j(k, m.center(i)) = weight[k] * peaks[i].area() * (dens - dens_prev);
        dens_prev = dens;
      }
    }
    j.col(m.baseline()).setZero();
    for (Eigen::Index k = 0; k < nb; ++k) j(k, m.baseline()) = -weight[k];
    const std::size_t groups = cfg.shared_shape ? 1 : n;
    for (std::size_t g = 0; g < groups; ++g) {
      for (const Eigen::Index idx : {m.t1(g), m.variance(g)}) {
        if (bounds.lower[idx] == bounds.upper[idx]) continue;
        // near sigma = 0 a step of a few 1e-9 ns^2 drowns in the round-off of
        // the bin integrals; floor it on the scale of the decay time
        const double floor = idx == m.variance(g) ? 1e-6 * p[m.t1(g)] * p[m.t1(g)] : 1e-9;
        const double step = std::max(1e-6 * std::abs(p[idx]), floor);
        Eigen::VectorXd lo = p, hi = p;
        hi[idx] = std::min(p[idx] + step, bounds.upper[idx]);
        lo[idx] = std::max(p[idx] - step, bounds.lower[idx]);
        const auto plo = peaks_from(lo, m), phi = peaks_from(hi, m);
        for (std::size_t i = 0; i < n; ++i) {
          if (!cfg.shared_shape && i != g) continue;
          bin_fractions(plo[i], h.binning, fa);
          bin_fractions(phi[i], h.binning, fb);
          for (Eigen::Index k = 0; k < nb; ++k) {
            j(k, idx) -= weight[k] * peaks[i].area() * (fb[k] - fa[k]) / (hi[idx] - lo[idx]);
          }
        }
      }
    }
    return j;
  };

  fit::LeastSquaresOptions opts = cfg.solver;
  opts.allow_singular = true;
  fit::LeastSquaresOptions rough = opts;
  rough.require_convergence = false;
  rough.max_iterations = std::min(rough.max_iterations, 60);
  auto solve = [&](const Eigen::VectorXd& start) {
    fit::FitResult r = fit::minimize(residuals, jacobian, start, bounds, opts);
    if (cfg.weighting != Weighting::poisson) return r;
    // Reweight with the fitted expectation until the weights are
    // self-consistent; the fixed point is the Poisson maximum-likelihood fit.
    for (int it = 0; it < cfg.max_reweightings; ++it) {
      const auto model = expected_counts(peaks_from(r.parameters, m), h.binning,
                                         r.parameters[m.baseline()]);
      for (std::size_t k = 0; k < weight.size(); ++k) {
        weight[k] = 1.0 / std::sqrt(std::max(model[k], kMinVariance));
      }
      const Eigen::VectorXd prev = r.parameters;
      r = fit::minimize(residuals, jacobian, prev, bounds, opts);
      const double change =
          ((r.parameters - prev).cwiseAbs().array() /
           (prev.cwiseAbs().array() + 1e-9))
              .maxCoeff();
      if (change < 1e-7) break;
    }
    return r;
  };
  // Preliminary pass with count-based weights: locates the peaks and finds
  // the empty ones. Its convergence is not required.
  fit::FitResult res = fit::minimize(residuals, jacobian, p0, bounds, rough);

  // A peak whose area is consistent with zero, or whose position is
  // uncertain by more than a quarter of the decay time, has no usable
  // position (or shape): pin those to the grid, shifted by the mean offset of
  // the others.
  double offset = 0.0;
  std::size_t resolved = 0;
  std::vector<std::size_t> empty;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = res.parameters[m.area(k)];
    const double se = std::sqrt(std::max(res.covariance(m.area(k), m.area(k)), 0.0));
    const double se_c = std::sqrt(std::max(res.covariance(m.center(k), m.center(k)), 0.0));
    if (a <= 3.0 * se || a == 0.0 || se_c > 0.25 * res.parameters[m.t1(k)]) {
      empty.push_back(k);
    } else {
      offset += res.parameters[m.center(k)] - grid[k];
      ++resolved;
    }
  }
  if (resolved == 0) throw fit::FitError("no peak is resolved above its error");
  Eigen::VectorXd p1 = res.parameters;
  if (!empty.empty()) {
    offset /= static_cast<double>(resolved);
    for (auto k : empty) {
      const Eigen::Index c = m.center(k);
      p1[c] = std::clamp(grid[k] + offset, bounds.lower[c], bounds.upper[c]);
      bounds.lower[c] = bounds.upper[c] = p1[c];
      if (!cfg.shared_shape) {
        p1[m.t1(k)] = t1_0;
        p1[m.variance(k)] = sigma0 * sigma0;
        bounds.lower[m.t1(k)] = bounds.upper[m.t1(k)] = t1_0;
        bounds.lower[m.variance(k)] = bounds.upper[m.variance(k)] = sigma0 * sigma0;
      }
    }
  }
  res = solve(p1);
  if (res.singular) {
    throw fit::FitError("singular Jacobian: peaks are degenerate or unconstrained",
                        res.condition_number);
  }

  double scale = 1.0;
  const std::size_t dof = h.binning.count - static_cast<std::size_t>(np);
  if (cfg.weighting == Weighting::unweighted) {
    // no noise model: scale the covariance by the residual variance
    scale = dof > 0 ? res.chi_square / static_cast<double>(dof) : 0.0;
  }
  const Eigen::VectorXd se = (res.covariance.diagonal() * scale).cwiseMax(0.0).cwiseSqrt();

  HistogramFit out;
  out.layout = cfg.layout;
  out.pulse_period_ns = cfg.pulse_period_ns;
  const auto models = peaks_from(res.parameters, m);
  for (std::size_t k = 0; k < n; ++k) {
    out.peaks.push_back({models[k], se[m.center(k)], se[m.t1(k)],
                         sigma_error(res.parameters[m.variance(k)], se[m.variance(k)]),
                         se[m.area(k)]});
    if (grid[k] == 0.0) out.central_index = k;
  }
  out.area_covariance.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.area_covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          scale * res.covariance(m.area(i), m.area(j));
    }
  }
  out.baseline = res.parameters[m.baseline()];
  out.baseline_error = se[m.baseline()];
  out.chi_square = res.chi_square;
  out.residual_norm = std::sqrt(res.chi_square);
  out.degrees_of_freedom = dof;
  out.iterations = res.iterations;
  return out;
}

G2Result g2_from_fit(const HistogramFit& fit) {
  const std::size_t n = fit.peaks.size();
  require(n >= 3, "g2 needs at least three fitted peaks");
  const std::size_t c = fit.central_index;
  const double t0 = fit.peaks[c].peak.center();

  // nearest neighbours on either side
  std::size_t left = n, right = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == c) continue;
    const double t = fit.peaks[k].peak.center();
    if (t < t0 && (left == n || t > fit.peaks[left].peak.center())) left = k;
    if (t > t0 && (right == n || t < fit.peaks[right].peak.center())) right = k;
  }
  require(left != n && right != n, "g2 needs a peak on each side of the central one");

  auto ratio = [&](const std::vector<std::size_t>& sides, double& error) {
    double mean = 0.0;
    for (auto k : sides) mean += fit.peaks[k].peak.area();
    mean /= static_cast<double>(sides.size());
    if (!(mean > 0.0)) throw InvalidParameter("side-peak area is zero");
    const double a0 = fit.peaks[c].peak.area();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    grad[static_cast<Eigen::Index>(c)] = 1.0 / mean;
    for (auto k : sides) {
      grad[static_cast<Eigen::Index>(k)] = -a0 / (mean * mean * static_cast<double>(sides.size()));
    }
    if (fit.area_covariance.rows() == static_cast<Eigen::Index>(n)) {
      error = std::sqrt(std::max(0.0, grad.dot(fit.area_covariance * grad)));
    }
    return a0 / mean;
  };

  std::vector<std::size_t> sides;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != c) sides.push_back(k);
  }
  G2Result r;
  r.g2 = ratio(sides, r.g2_error);
  r.g_star = ratio({left, right}, r.g_star_error);
  return r;
}

double raw_visibility(double a_hh, double a_hv) {
  require(a_hv > 0.0, "A_HV must be > 0");
  require(a_hh >= 0.0, "A_HH must be >= 0");
  return 1.0 - a_hh / a_hv;
}

BeamsplitterSpec::BeamsplitterSpec(double reflectivity, double transmissivity,
                                   double interferometer_contrast, double g_star)
    : r_(reflectivity), t_(transmissivity), contrast_(interferometer_contrast), g_star_(g_star) {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  require(unit(reflectivity) && unit(transmissivity) && unit(interferometer_contrast) &&
              unit(g_star),
          "beamsplitter parameters must lie in [0, 1]");
  require(std::abs(reflectivity + transmissivity - 1.0) <= 1e-6, "R + T must equal 1");
}

namespace {

double unbalanced_term(const BeamsplitterSpec& bs) {
  const double r = bs.reflectivity(), t = bs.transmissivity();
  return (r * r * r * t + r * t * t * t) * (1.0 + 2.0 * bs.g_star());
}

double interference_term(const BeamsplitterSpec& bs) {
  const double r = bs.reflectivity(), t = bs.transmissivity();
  return 2.0 * bs.contrast() * bs.contrast() * r * r * t * t;
}

}  // namespace

CorrectedVisibility santori_correction(double nu_raw, const BeamsplitterSpec& bs) {
  require(nu_raw <= 1.0, "raw visibility must be <= 1");
  require(bs.contrast() > 0.0, "zero interferometer contrast cannot be corrected");
  const double denom = interference_term(bs);
  require(denom > 0.0, "beamsplitter with R T = 0 cannot be corrected");
  CorrectedVisibility out;
  out.value = nu_raw * unbalanced_term(bs) / denom;
  out.above_unity = out.value > 1.0;
  return out;
}

std::pair<double, double> central_peak_areas(double nu, const BeamsplitterSpec& bs) {
  const double perp = unbalanced_term(bs);
  return {perp - interference_term(bs) * nu, perp};
}

double michelson_contrast(double i_max, double i_min) {
  require(i_min >= 0.0, "I_min must be >= 0");
  require(i_max > 0.0, "I_max must be > 0");
  require(i_max >= i_min, "I_max must be >= I_min");
  return (i_max - i_min) / (i_max + i_min);
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
  std::vector<double> centers(h.binning.count);
  for (std::size_t k = 0; k < centers.size(); ++k) centers[k] = h.binning.center(k);
  csv::write(os, {"bin_center_ns", "counts"}, {centers, h.counts});
}

Histogram read_histogram_csv(std::istream& is) {
  const csv::Table t = csv::read(is);
  const auto centers = t.column("bin_center_ns");
  const auto counts = t.column("counts");
  if (centers.size() < 2) throw csv::CsvError("histogram needs at least two bins");
  const double width = centers[1] - centers[0];
  if (!(width > 0.0)) throw csv::CsvError("bin centers must increase");
  for (std::size_t k = 1; k < centers.size(); ++k) {
    const double d = centers[k] - centers[k - 1];
    if (std::abs(d - width) > 1e-6 * width) throw csv::CsvError("bins must be uniform");
  }
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw csv::CsvError("counts must be finite and >= 0");
  }
  Histogram h;
  h.binning = {centers.front() - 0.5 * width, width, centers.size()};
  h.counts = counts;
  return h;
}

}  // namespace polaronlab::histogram
