#pragma once

// Coincidence histograms: two-sided exponential peaks convolved with a
// Gaussian detector response, Poisson synthesis, shared-shape fitting and
// the visibility corrections used for HOM data.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "polaronlab/least_squares.hpp"

namespace polaronlab::histogram {

/// One coincidence peak; times in ns, area in counts.
class PeakModel {
 public:
  PeakModel(double center_ns, double decay_time_ns, double resolution_sigma_ns, double area);

  double center() const { return center_; }
  double decay_time() const { return decay_time_; }
  double resolution_sigma() const { return sigma_; }
  double area() const { return area_; }

  /// Fraction of the area at or below t.
  double cdf(double t_ns) const;

 private:
  double center_;
  double decay_time_;
  double sigma_;
  double area_;
};

/// Counts per ns at time t.
double peak_shape(double t_ns, const PeakModel& p);

/// Uniform bins [start + k width, start + (k+1) width).
struct Binning {
  double start_ns = 0.0;
  double width_ns = 0.1;
  std::size_t count = 0;

  static Binning centered(double half_span_ns, double width_ns);
  double center(std::size_t k) const { return start_ns + (static_cast<double>(k) + 0.5) * width_ns; }
  double lower(std::size_t k) const { return start_ns + static_cast<double>(k) * width_ns; }
  double end_ns() const { return lower(count); }
  void validate() const;
};

struct Histogram {
  Binning binning;
  std::vector<double> counts;

  double total() const;
};

/// Integral of the peaks over each bin plus a flat baseline (counts / bin).
std::vector<double> expected_counts(const std::vector<PeakModel>& peaks, const Binning& b,
                                    double baseline = 0.0);

/// Poisson draw of expected_counts; identical seeds give identical histograms.
Histogram synthesize_histogram(const std::vector<PeakModel>& peaks, const Binning& b,
                               std::uint64_t noise_seed, double baseline = 0.0);

/// Noise-free histogram (expected counts).
Histogram expected_histogram(const std::vector<PeakModel>& peaks, const Binning& b,
                             double baseline = 0.0);

enum class Layout {
  hbt,  // one peak per pulse on the repetition grid
  hom,  // clusters of five peaks spaced by the pair delay on the repetition grid
};

enum class Weighting {
  poisson,     // variance = fitted model, iterated to self-consistency
  neyman,      // variance = max(counts, 1)
  unweighted,  // unit variance, covariance scaled by the residual variance
};

struct FitConfig {
  Layout layout = Layout::hbt;
  std::size_t n_peaks = 3;       // hom: multiple of 5 with an odd number of clusters
  double pulse_period_ns = 12.2;
  double pair_delay_ns = 2.0;
  Weighting weighting = Weighting::poisson;
  bool shared_shape = true;      // one T1 and sigma for every peak
  bool fit_baseline = true;
  int max_reweightings = 8;      // poisson weighting only
  std::optional<double> t1_guess_ns;
  std::optional<double> sigma_guess_ns;
  fit::LeastSquaresOptions solver{.max_iterations = 500, .edm_tol = 2e-4};

  void validate() const;
};

/// Nominal peak centers, ordered by time.
std::vector<double> peak_grid(const FitConfig& cfg);

struct PeakEstimate {
  PeakModel peak;
  double center_error = 0.0;
  double decay_time_error = 0.0;
  double sigma_error = 0.0;
  double area_error = 0.0;
};

struct HistogramFit {
  std::vector<PeakEstimate> peaks;
  double baseline = 0.0;
  double baseline_error = 0.0;
  double residual_norm = 0.0;  // sqrt(chi^2) in the chosen weighting
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  int iterations = 0;
  std::size_t central_index = 0;
  Eigen::MatrixXd area_covariance;
  Layout layout = Layout::hbt;
  double pulse_period_ns = 12.2;
};

HistogramFit fit_histogram(const Histogram& h, const FitConfig& cfg);

struct G2Result {
  double g2 = 0.0;            // central / mean of all other peaks
  double g2_error = 0.0;
  double g_star = 0.0;        // central / mean of the peaks one period away
  double g_star_error = 0.0;
};

G2Result g2_from_fit(const HistogramFit& fit);

/// 1 - A_HH / A_HV.
double raw_visibility(double a_hh, double a_hv);

class BeamsplitterSpec {
 public:
  BeamsplitterSpec(double reflectivity, double transmissivity, double interferometer_contrast,
                   double g_star);

  double reflectivity() const { return r_; }
  double transmissivity() const { return t_; }
  double contrast() const { return contrast_; }  // 1 - epsilon
  double g_star() const { return g_star_; }

  static BeamsplitterSpec nominal() { return {0.485, 0.515, 0.99, 0.006}; }

 private:
  double r_;
  double t_;
  double contrast_;
  double g_star_;
};

struct CorrectedVisibility {
  double value = 0.0;
  bool above_unity = false;  // reported, never clamped
};

CorrectedVisibility santori_correction(double nu_raw, const BeamsplitterSpec& bs);

/// Central-peak areas (parallel, perpendicular) up to a common factor for a
/// given true visibility: the forward model the correction inverts.
std::pair<double, double> central_peak_areas(double nu, const BeamsplitterSpec& bs);

/// (I_max - I_min) / (I_max + I_min).
double michelson_contrast(double i_max, double i_min);

void write_histogram_csv(std::ostream& os, const Histogram& h);
/// Reads `bin_center_ns,counts`; bins must be uniform.
Histogram read_histogram_csv(std::istream& is);

}  // namespace polaronlab::histogram
