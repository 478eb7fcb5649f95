#include "run.hpp"

#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "polaronlab/csv.hpp"
#include "polaronlab/least_squares.hpp"
#include "polaronlab/parallel.hpp"

namespace polaronlab::cli {

namespace {

const std::map<std::string, std::function<void(RunContext&)>>& commands() {
  static const std::map<std::string, std::function<void(RunContext&)>> m{
      {"rabi", cmd_rabi}, {"indist", cmd_indist}, {"hom", cmd_hom},
      {"fit", cmd_fit},   {"kernels", cmd_kernels}, {"reproduce", cmd_reproduce}};
  return m;
}

unsigned threads_from_env() {
  const char* v = std::getenv("POLARONLAB_THREADS");
  if (!v || !*v) return 0;
  unsigned n = 0;
  const auto end = v + std::char_traits<char>::length(v);
  const auto r = std::from_chars(v, end, n);
  if (r.ec != std::errc() || r.ptr != end || n == 0) {
    throw ConfigError(std::string("POLARONLAB_THREADS must be a positive integer, got '") + v + "'");
  }
  return n;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-dot photon source modelling toolkit", "polaronlab"};
  std::string command;
  std::string mode;
  std::string config_file;
  std::string out_dir = "out";
  unsigned threads = 0;
  std::uint64_t seed = 0;
  app.add_option("command", command, "rabi | indist | hom | fit | kernels | reproduce")
      ->required()
      ->check(CLI::IsMember({"rabi", "indist", "hom", "fit", "kernels", "reproduce"}));
  app.add_option("mode", mode,
                 "indist: temperature|delay|power; hom: synth|fit|correct; "
                 "fit: rabi|phonon|mu|noise; reproduce: fig3b|fig4c|fig5a|fig5b");
  app.add_option("--config", config_file, "JSON scenario file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (default: POLARONLAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return input_error;
  }

  try {
    if (threads == 0) threads = threads_from_env();
    if (threads == 0) threads = default_thread_count();
    Config config = config_file.empty() ? Config() : Config::load(config_file);
    const std::string started = utc_timestamp();
    OutputDir dir(out_dir);
    RunContext ctx{config, dir, threads, seed, std::nullopt, err};
    if (!mode.empty()) ctx.mode = mode;
    commands().at(command)(ctx);
    // the thread count never changes results, so it stays out of the hash
    const nlohmann::json invocation = {{"command", command},
                                       {"mode", mode.empty() ? nlohmann::json() : nlohmann::json(mode)},
                                       {"seed", seed},
                                       {"config", config.resolved()}};
    dir.write_manifest(command, invocation, started);
    out << dir.path().string() << '\n';
    return ok;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return input_error;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }
}

}  // namespace polaronlab::cli
