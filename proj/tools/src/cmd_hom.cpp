#include <cmath>
#include <fstream>
#include <ostream>

#include "commands.hpp"
#include "polaronlab/histogram.hpp"

namespace polaronlab::cli {

namespace hist = polaronlab::histogram;

namespace {

struct Geometry {
  hist::Layout layout = hist::Layout::hbt;
  std::size_t peaks = 5;
  double period = 12.2;
  double pair_delay = 2.0;
};

Geometry read_geometry(Section root) {
  Geometry g;
  g.layout = root.choice("layout", "hbt", {"hbt", "hom"}) == "hom" ? hist::Layout::hom
                                                                     : hist::Layout::hbt;
  g.peaks = root.count("peaks", g.layout == hist::Layout::hom ? 15 : 5);
  g.period = root.positive("pulse_period_ns", 12.2);
  g.pair_delay = root.positive("pair_delay_ns", 2.0);
  return g;
}

hist::FitConfig fit_config(const Geometry& g) {
  hist::FitConfig c;
  c.layout = g.layout;
  c.n_peaks = g.peaks;
  c.pulse_period_ns = g.period;
  c.pair_delay_ns = g.pair_delay;
  return c;
}

hist::BeamsplitterSpec read_beamsplitter(Section s) {
  const auto d = hist::BeamsplitterSpec::nominal();
  const double r = s.number("reflectivity", d.reflectivity());
  const double t = s.number("transmissivity", d.transmissivity());
  const double c = s.number("contrast", d.contrast());
  const double g = s.number("g_star", d.g_star());
  return {r, t, c, g};
}

hist::Histogram load_histogram(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read histogram file " + path);
  return hist::read_histogram_csv(in);
}

nlohmann::json fit_report(const hist::HistogramFit& f) {
  nlohmann::json peaks = nlohmann::json::array();
  for (const auto& p : f.peaks) {
    peaks.push_back({{"center_ns", p.peak.center()},
                     {"center_error_ns", p.center_error},
                     {"t1_ns", p.peak.decay_time()},
                     {"t1_error_ns", p.decay_time_error},
                     {"sigma_ns", p.peak.resolution_sigma()},
                     {"sigma_error_ns", p.sigma_error},
                     {"area", p.peak.area()},
                     {"area_error", p.area_error}});
  }
  return {{"layout", f.layout == hist::Layout::hom ? "hom" : "hbt"},
          {"peaks", peaks},
          {"central_index", f.central_index},
          {"baseline", f.baseline},
          {"baseline_error", f.baseline_error},
          {"chi_square", f.chi_square},
          {"degrees_of_freedom", f.degrees_of_freedom},
          {"residual_norm", f.residual_norm},
          {"iterations", f.iterations}};
}

void synth(RunContext& ctx, Section root) {
  const Geometry g = read_geometry(root);
  const double t1 = root.positive("t1_ns", 0.73);
  const double sigma = root.non_negative("sigma_ns", 0.05);
  const double side = root.non_negative("side_area_counts", 1000.0);
  // hbt: central area relative to the side peaks; hom: interference
  // visibility applied to the zero-delay peak of the central cluster
  const double central_ratio = root.non_negative("central_ratio", 0.006);
  const double visibility = root.number("visibility", 0.963);
  const double baseline = root.non_negative("baseline_counts", 0.0);
  const double width = root.positive("bin_width_ns", 0.05);
  const bool poisson = root.flag("poisson_noise", true);
  auto cfg = fit_config(g);
  const double half_default = (static_cast<double>(g.layout == hist::Layout::hom ? g.peaks / 10 : g.peaks / 2) + 0.5) * g.period;
  const double half_span = root.positive("half_span_ns", half_default);
  ctx.config.finish();
  if (visibility > 1.0) throw ConfigError("visibility must be <= 1");

  const auto centers = hist::peak_grid(cfg);
  std::vector<hist::PeakModel> peaks;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    double area = side;
    if (g.layout == hist::Layout::hbt) {
      if (k == centers.size() / 2) area = side * central_ratio;
    } else {
      // five-peak cluster 1:2:2:2:1 from the two interferometer arms
      const std::size_t j = k % 5;
      area = (j == 0 || j == 4) ? side : 2.0 * side;
      if (k == centers.size() / 2) area *= 1.0 - visibility;
    }
    peaks.emplace_back(centers[k], t1, sigma, area);
  }
  const auto bins = hist::Binning::centered(half_span, width);
  const auto h = poisson ? hist::synthesize_histogram(peaks, bins, ctx.seed, baseline)
                         : hist::expected_histogram(peaks, bins, baseline);
  ctx.out.write("histogram.csv", [&](std::ostream& os) { hist::write_histogram_csv(os, h); });
  ctx.log << "hom synth: " << peaks.size() << " peaks, " << bins.count << " bins\n";
}

void fit(RunContext& ctx, Section root) {
  const auto path = root.text("histogram_csv");
  if (!path) throw ConfigError("missing required key histogram_csv");
  const auto reference = root.text("reference_histogram_csv");
  const Geometry g = read_geometry(root);
  auto cfg = fit_config(g);
  const auto w = root.choice("weighting", "poisson", {"poisson", "neyman", "unweighted"});
  cfg.weighting = w == "neyman"       ? hist::Weighting::neyman
                  : w == "unweighted" ? hist::Weighting::unweighted
                                      : hist::Weighting::poisson;
  cfg.shared_shape = root.flag("shared_shape", true);
  cfg.fit_baseline = root.flag("fit_baseline", true);
  if (root.has("t1_guess_ns")) cfg.t1_guess_ns = root.positive("t1_guess_ns", 0.73);
  if (root.has("sigma_guess_ns")) cfg.sigma_guess_ns = root.non_negative("sigma_guess_ns", 0.05);
  std::optional<hist::BeamsplitterSpec> bs;
  if (reference) bs = read_beamsplitter(root.child("beamsplitter"));
  ctx.config.finish();
  cfg.validate();

  const auto h = load_histogram(*path);
  const auto f = hist::fit_histogram(h, cfg);
  nlohmann::json report = fit_report(f);
  if (g.layout == hist::Layout::hbt) {
    const auto g2 = hist::g2_from_fit(f);
    report["g2"] = {{"g2_zero", g2.g2},
                    {"g2_zero_error", g2.g2_error},
                    {"g_star", g2.g_star},
                    {"g_star_error", g2.g_star_error}};
  }
  if (reference) {
    const auto fr = hist::fit_histogram(load_histogram(*reference), cfg);
    const auto& par = f.peaks[f.central_index];
    const auto& perp = fr.peaks[fr.central_index];
    const double a = par.peak.area(), b = perp.peak.area();
    const double nu = hist::raw_visibility(a, b);
    const double nu_err = std::hypot(par.area_error / b, a * perp.area_error / (b * b));
    const auto corrected = hist::santori_correction(nu, *bs);
    const double scale = nu != 0.0 ? corrected.value / nu : 0.0;
    report["reference"] = fit_report(fr);
    report["visibility"] = {{"nu_raw", nu},
                            {"nu_raw_error", nu_err},
                            {"i_corrected", corrected.value},
                            {"i_corrected_error", std::abs(scale) * nu_err},
                            {"above_unity", corrected.above_unity}};
  }
  ctx.out.write_json("fit.json", report);
  ctx.log << "hom fit: chi2=" << f.chi_square << " dof=" << f.degrees_of_freedom << '\n';
}

void correct(RunContext& ctx, Section root) {
  double nu_raw = 0.963;
  if (root.has("areas")) {
    Section a = root.child("areas");
    const double hh = a.non_negative("a_hh_counts", 0.0);
    const double hv = a.positive("a_hv_counts", 1.0);
    if (root.has("nu_raw")) throw ConfigError("give either nu_raw or areas, not both");
    nu_raw = hist::raw_visibility(hh, hv);
  } else {
    nu_raw = root.number("nu_raw", nu_raw);
  }
  const auto bs = read_beamsplitter(root.child("beamsplitter"));
  Section m = root.child("michelson");
  const double i_max = m.positive("i_max_uw", 533.0);
  const double i_min = m.non_negative("i_min_uw", 2.80);
  ctx.config.finish();
  if (nu_raw > 1.0) throw ConfigError("nu_raw must be <= 1");

  const auto c = hist::santori_correction(nu_raw, bs);
  ctx.out.write_json("correction.json", {{"nu_raw", nu_raw},
                                         {"i_corrected", c.value},
                                         {"above_unity", c.above_unity},
                                         {"c_m", hist::michelson_contrast(i_max, i_min)}});
  ctx.log << "hom correct: I=" << c.value << '\n';
}

}  // namespace

void cmd_hom(RunContext& ctx) {
  Section root = ctx.config.root();
  const auto mode = resolve_mode(ctx, root, "mode", "synth", {"synth", "fit", "correct"});
  if (mode == "synth") {
    synth(ctx, root);
  } else if (mode == "fit") {
    fit(ctx, root);
  } else {
    correct(ctx, root);
  }
}

}  // namespace polaronlab::cli
