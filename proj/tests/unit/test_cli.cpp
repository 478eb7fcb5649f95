#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "polaronlab/csv.hpp"
#include "run.hpp"

namespace fs = std::filesystem;
using namespace polaronlab;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / (std::string("polaronlab_cli_") + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
    setenv("SOURCE_DATE_EPOCH", "0", 1);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path file(const std::string& name, const std::string& text) {
    const auto p = root_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(std::vector<std::string> args, const std::string& out_name = "out") {
    args.push_back("--out");
    args.push_back((root_ / out_name).string());
    args.push_back("--threads");
    args.push_back("2");
    std::ostringstream out;
    err_.str("");
    return cli::run(args, out, err_);
  }

  fs::path out(const std::string& name = "out") const { return root_ / name; }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  static json read_json(const fs::path& p) { return json::parse(slurp(p)); }
  static csv::Table read_csv(const fs::path& p) {
    std::ifstream in(p);
    return csv::read(in);
  }

  fs::path root_;
  std::ostringstream err_;
};

}  // namespace

TEST(Config, StrictKeys) {
  auto c = cli::Config::parse(R"({"a": 1.5, "nested": {"b": true}, "extra": 2})");
  auto r = c.root();
  EXPECT_EQ(r.number("a", 0.0), 1.5);
  EXPECT_TRUE(r.child("nested").flag("b", false));
  EXPECT_EQ(r.number("missing", 7.0), 7.0);
  EXPECT_THROW(c.finish(), cli::ConfigError);
  EXPECT_EQ(c.resolved()["missing"], 7.0);

  auto d = cli::Config::parse(R"({"t": "x"})");
  EXPECT_THROW(d.root().number("t", 0.0), cli::ConfigError);
  EXPECT_THROW(cli::Config::parse("{bad json"), cli::ConfigError);
  EXPECT_THROW(cli::Config::parse("[1,2]"), cli::ConfigError);
  auto e = cli::Config::parse(R"({"v": -1})");
  EXPECT_THROW(e.root().positive("v", 1.0), cli::ConfigError);
}

TEST(Config, Grid) {
  auto c = cli::Config::parse(R"({"g": {"start": 0, "stop": 1, "count": 5}, "l": [3, 1]})");
  EXPECT_EQ(cli::grid(c.root(), "g", {}), (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ(cli::grid(c.root(), "l", {}), (std::vector<double>{3, 1}));
}

TEST_F(Cli, RabiDefaultsWritesFiveCsvs) {
  ASSERT_EQ(run({"rabi"}), 0) << err_.str();
  for (const char* t : {"5.6", "10", "15", "17.5", "20"}) {
    EXPECT_TRUE(fs::exists(out() / (std::string("rabi_T") + t + "K.csv"))) << t;
  }
  const auto m = read_json(out() / "manifest.json");
  EXPECT_EQ(m["files"].size(), 6u);
  EXPECT_EQ(m["version"], "0.3.0");
  EXPECT_EQ(m["config_hash"].get<std::string>().rfind("sha256:", 0), 0u);
  const auto s = read_json(out() / "summary.json");
  for (const auto& t : s["temperatures"]) EXPECT_FALSE(t["fit"].is_null());
}

TEST_F(Cli, RabiPhononsOffIsSinSquared) {
  const auto cfg = file("c.json", R"({"temperatures_k": [10], "phonons": {"enabled": false},
    "integrator": {"rtol": 1e-11, "atol": 1e-13}})");
  ASSERT_EQ(run({"rabi", "--config", cfg.string()}), 0) << err_.str();
  const auto t = read_csv(out() / "rabi_T10K.csv");
  const auto a = t.column("area_rad"), i = t.column("zpl_intensity");
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(i[k], std::pow(std::sin(0.5 * a[k]), 2), 1e-6);
}

TEST_F(Cli, Deterministic) {
  const auto cfg = file("c.json", R"({"temperatures_k": [5.6, 20], "areas_rad": {"start": 0.5, "stop": 6, "count": 8}})");
  ASSERT_EQ(run({"rabi", "--config", cfg.string(), "--seed", "4"}, "a"), 0);
  ASSERT_EQ(run({"rabi", "--config", cfg.string(), "--seed", "4"}, "b"), 0);
  for (const auto& e : fs::directory_iterator(out("a"))) {
    EXPECT_EQ(slurp(e.path()), slurp(out("b") / e.path().filename())) << e.path();
  }
  ASSERT_EQ(run({"hom", "synth", "--seed", "11"}, "h1"), 0);
  ASSERT_EQ(run({"hom", "synth", "--seed", "11"}, "h2"), 0);
  EXPECT_EQ(slurp(out("h1") / "histogram.csv"), slurp(out("h2") / "histogram.csv"));
  const auto m1 = read_json(out("h1") / "manifest.json"), m2 = read_json(out("h2") / "manifest.json");
  EXPECT_EQ(m1["config_hash"], m2["config_hash"]);
  ASSERT_EQ(run({"hom", "synth", "--seed", "12"}, "h3"), 0);
  EXPECT_NE(read_json(out("h3") / "manifest.json")["config_hash"], m1["config_hash"]);
}

TEST_F(Cli, IndistAxes) {
  ASSERT_EQ(run({"indist", "temperature"}, "t"), 0) << err_.str();
  const auto t = read_csv(out("t") / "indist_temperature.csv").column("i_analytic");
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LT(t[k], t[k - 1]);

  ASSERT_EQ(run({"indist", "power"}, "p"), 0) << err_.str();
  const auto p = read_csv(out("p") / "indist_power.csv");
  const auto pa = p.column("i_analytic"), po = p.column("i_oracle");
  for (std::size_t k = 1; k < pa.size(); ++k) {
    EXPECT_LT(std::abs(pa[k] - pa[0]), 1e-10);
    EXPECT_LT(std::abs(po[k] - po[0]), 1e-10);
  }

  ASSERT_EQ(run({"indist", "delay"}, "d"), 0) << err_.str();
  const auto d = read_csv(out("d") / "indist_delay.csv");
  const auto dx = d.column("delay_ns"), di = d.column("i_analytic");
  EXPECT_EQ(dx.front(), 2.0);
  EXPECT_EQ(dx.back(), 12.0);
  EXPECT_GT(di.front(), di.back());
}

TEST_F(Cli, ModeConflict) {
  const auto cfg = file("c.json", R"({"axis": "delay"})");
  EXPECT_EQ(run({"indist", "power", "--config", cfg.string()}), 2);
  EXPECT_EQ(run({"indist", "--config", cfg.string()}), 0);
}

TEST_F(Cli, HomCorrect) {
  ASSERT_EQ(run({"hom", "correct"}), 0) << err_.str();
  const auto j = read_json(out() / "correction.json");
  EXPECT_NEAR(j["i_corrected"].get<double>(), 0.996, 5e-4);
  EXPECT_NEAR(j["c_m"].get<double>(), 0.990, 1e-3);
  EXPECT_EQ(j["nu_raw"].get<double>(), 0.963);
}

TEST_F(Cli, HomSynthFitRoundTrip) {
  const auto s = file("s.json", R"({"sigma_ns": 0.15})");
  ASSERT_EQ(run({"hom", "synth", "--config", s.string(), "--seed", "5"}, "syn"), 0);
  const auto f = file("f.json", "{\"histogram_csv\": \"" + (out("syn") / "histogram.csv").string() + "\"}");
  ASSERT_EQ(run({"hom", "fit", "--config", f.string()}, "fit"), 0) << err_.str();
  const auto j = read_json(out("fit") / "fit.json");
  const std::vector<double> truth{1000, 1000, 6, 1000, 1000};
  for (std::size_t k = 0; k < 5; ++k) {
    const auto& p = j["peaks"][k];
    EXPECT_LE(std::abs(p["area"].get<double>() - truth[k]), 3.0 * p["area_error"].get<double>()) << k;
  }
  EXPECT_TRUE(j.contains("g2"));
}

TEST_F(Cli, HomVisibilityFromTwoHistograms) {
  const auto par = file("par.json", R"({"layout": "hom", "visibility": 0.963, "poisson_noise": false})");
  const auto perp = file("perp.json", R"({"layout": "hom", "visibility": 0.0, "poisson_noise": false})");
  ASSERT_EQ(run({"hom", "synth", "--config", par.string()}, "a"), 0) << err_.str();
  ASSERT_EQ(run({"hom", "synth", "--config", perp.string()}, "b"), 0);
  const auto f = file("f.json", "{\"layout\": \"hom\", \"histogram_csv\": \"" +
                                    (out("a") / "histogram.csv").string() +
                                    "\", \"reference_histogram_csv\": \"" +
                                    (out("b") / "histogram.csv").string() + "\"}");
  ASSERT_EQ(run({"hom", "fit", "--config", f.string()}, "fit"), 0) << err_.str();
  const auto j = read_json(out("fit") / "fit.json");
  EXPECT_NEAR(j["visibility"]["nu_raw"].get<double>(), 0.963, 1e-3);
}

TEST_F(Cli, HomFitFailures) {
  const auto zero = file("z.csv", "bin_center_ns,counts\n-0.1,0\n0,0\n0.1,0\n0.2,0\n");
  const auto cz = file("z.json", "{\"histogram_csv\": \"" + zero.string() + "\", \"peaks\": 1}");
  EXPECT_EQ(run({"hom", "fit", "--config", cz.string()}), 3);
  const auto bad = file("b.csv", "bin_center_ns,counts\n0,abc\n");
  const auto cb = file("b.json", "{\"histogram_csv\": \"" + bad.string() + "\"}");
  EXPECT_EQ(run({"hom", "fit", "--config", cb.string()}), 2);
  const auto cm = file("m.json", "{\"histogram_csv\": \"" + (root_ / "nope.csv").string() + "\"}");
  EXPECT_EQ(run({"hom", "fit", "--config", cm.string()}), 2);
}

TEST_F(Cli, FitPipelines) {
  ASSERT_EQ(run({"fit", "phonon"}, "p"), 0) << err_.str();
  auto j = read_json(out("p") / "fit.json");
  EXPECT_NEAR(j["parameters"]["alpha_per_ps"]["value"].get<double>(), 0.13, 0.0065);
  EXPECT_NEAR(j["parameters"]["omega_c_per_ps"]["value"].get<double>(), 1.8, 0.09);

  ASSERT_EQ(run({"fit", "mu"}, "m"), 0) << err_.str();
  j = read_json(out("m") / "fit.json");
  EXPECT_NEAR(j["parameters"]["mu_ps2"]["value"].get<double>(), 1.1e-3, 3.3e-5);

  ASSERT_EQ(run({"fit", "noise"}, "n"), 0) << err_.str();
  j = read_json(out("n") / "fit.json");
  EXPECT_NEAR(j["parameters"]["gamma0_uev"]["value"].get<double>(), 0.37, 0.037);
  EXPECT_NEAR(j["parameters"]["tau_c_ns"]["value"].get<double>(), 6.48, 0.648);

  // round trip through a data file
  const auto cfg = file("r.json", "{\"input_csv\": \"" + (out("n") / "data.csv").string() + "\"}");
  ASSERT_EQ(run({"fit", "noise", "--config", cfg.string()}, "n2"), 0) << err_.str();
  EXPECT_EQ(read_json(out("n2") / "fit.json")["parameters"], j["parameters"]);

  const auto noisy = file("x.json", R"({"synthetic": {"relative_noise": 0.001}})");
  ASSERT_EQ(run({"fit", "rabi", "--config", noisy.string(), "--seed", "3"}, "r"), 0) << err_.str();
  j = read_json(out("r") / "fit.json");
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_EQ(read_csv(out("r") / "data.csv").header.back(), "sigma");
}

TEST_F(Cli, Kernels) {
  ASSERT_EQ(run({"kernels"}), 0) << err_.str();
  const auto j = read_json(out() / "summary.json");
  EXPECT_NEAR(j["gamma_pd_per_ps"].get<double>(), j["gamma_pd_from_density_per_ps"].get<double>(),
              1e-10 * j["gamma_pd_per_ps"].get<double>());
  EXPECT_TRUE(fs::exists(out() / "kernels.csv"));
}

TEST_F(Cli, ReproduceFigures) {
  ASSERT_EQ(run({"reproduce", "fig4c"}, "a"), 0) << err_.str();
  const auto pts = read_csv(out("a") / "fig4c_points.csv");
  EXPECT_EQ(pts.column("temperature_k").front(), 5.6);
  EXPECT_GE(pts.column("indistinguishability").front(), 0.98);

  ASSERT_EQ(run({"reproduce", "fig5b"}, "b"), 0) << err_.str();
  const auto b = read_csv(out("b") / "fig5b.csv");
  const auto s = b.column("i_s_shell"), p = b.column("i_p_shell");
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_LT(p[k], s[k]);

  ASSERT_EQ(run({"reproduce", "fig5a"}, "c"), 0) << err_.str();
  EXPECT_EQ(run({"reproduce", "fig9"}, "d"), 2);
  EXPECT_NE(err_.str().find("Usage"), std::string::npos);
}

TEST_F(Cli, InputErrors) {
  const auto unknown = file("u.json", R"({"temperature_k": 10, "bogus": 1})");
  EXPECT_EQ(run({"kernels", "--config", unknown.string()}), 2);
  EXPECT_NE(err_.str().find("bogus"), std::string::npos);
  const auto neg = file("n.json", R"({"emitter": {"t1_ps": -5}})");
  EXPECT_EQ(run({"indist", "--config", neg.string()}), 2);
  EXPECT_EQ(run({"nonsense"}), 2);
  EXPECT_EQ(run({"kernels", "--config", (root_ / "missing.json").string()}), 2);
  const auto broken = file("b.json", "{");
  EXPECT_EQ(run({"kernels", "--config", broken.string()}), 2);

  setenv("POLARONLAB_THREADS", "zero", 1);
  std::ostringstream o, e;
  EXPECT_EQ(cli::run({"kernels", "--out", (root_ / "t").string()}, o, e), 2);
  setenv("POLARONLAB_THREADS", "3", 1);
  EXPECT_EQ(cli::run({"kernels", "--out", (root_ / "t").string()}, o, e), 0);
  unsetenv("POLARONLAB_THREADS");
}
