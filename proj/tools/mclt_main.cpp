// Batch front end: analyze / simulate / verify / converge / report pipelines
// over a chain specification file, with reproducible seeded outputs.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mclt/error.hpp"
#include "mclt/pipeline.hpp"
#include "mclt/version.hpp"

namespace {

struct CommonFlags {
  std::string config_file;
  std::string chain;
  std::string out;
  std::string seed;
  std::string workers;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_file,
                  "JSON config file (a manifest.json replays its run)");
  cmd->add_option("--chain", flags.chain, "chain specification JSON file");
  cmd->add_option("--out", flags.out, "output directory (must not already hold results)");
  cmd->add_option("--seed", flags.seed, "master seed (mandatory, here or in the config)");
  cmd->add_option("--workers", flags.workers, "worker threads (0 = all cores)");
}

int dispatch(const std::string& command, const CommonFlags& flags,
             const std::map<std::string, std::string>& extra) {
  mclt::ExperimentConfig config;
  try {
    if (!flags.config_file.empty()) {
      std::ifstream in(flags.config_file);
      if (!in) {
        std::cerr << "error: cannot open config " << flags.config_file << "\n";
        return 1;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      config = mclt::parse_config_json_text(ss.str());
    }
    config.command = command;
    std::map<std::string, std::string> overrides = extra;
    if (!flags.chain.empty()) overrides["chain"] = flags.chain;
    if (!flags.out.empty()) overrides["out"] = flags.out;
    if (!flags.seed.empty()) overrides["seed"] = flags.seed;
    if (!flags.workers.empty()) overrides["workers"] = flags.workers;
    mclt::apply_overrides(config, overrides);
  } catch (const mclt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return mclt::run_pipeline(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"markov chain local-time laboratory"};
  app.set_version_flag("--version", std::string("mclt ") + mclt::kVersion);
  app.require_subcommand(1);

  CommonFlags common;
  std::map<std::string, std::string> extra;

  auto opt = [&](CLI::App* cmd, const char* name, const char* help) {
    // Store every value-flag as a string override; the pipeline parses them.
    auto key = std::string(name).substr(2);
    cmd->add_option_function<std::string>(
        name, [&extra, key](const std::string& v) { extra[key] = v; }, help);
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "eigenvalue curve, aperiodicity verdicts, asymptotic variance");
  add_common(analyze, common);
  opt(analyze, "--delta", "low-frequency cutoff of the scan window [delta, pi]");
  opt(analyze, "--grid_step", "scan grid step (<= 1e-3)");
  opt(analyze, "--margin", "verdict margin on 1 - rho");
  opt(analyze, "--curve_step", "eigencurve grid step");

  CLI::App* simulate = app.add_subcommand("simulate", "sample seeded chain paths");
  add_common(simulate, common);
  opt(simulate, "--n", "path length");
  opt(simulate, "--paths", "number of paths");
  simulate->add_flag_function(
      "--full", [&extra](std::int64_t) { extra["full"] = "1"; }, "emit full trajectories");

  CLI::App* verify = app.add_subcommand(
      "verify", "local-limit, potential-kernel and fourth-moment bound checks");
  add_common(verify, common);
  opt(verify, "--llt_n_max", "local-limit scan horizon");
  opt(verify, "--kernel_N", "kernel partial-sum horizon");
  opt(verify, "--kernel_span", "kernel |x-y| sweep limit");
  opt(verify, "--m4_exact_n", "largest exact-enumeration n (<= 12)");
  opt(verify, "--m4_paths", "Monte Carlo paths per fourth-moment point");

  CLI::App* converge = app.add_subcommand(
      "converge", "empirical law of the normalized local time vs the Brownian reference");
  add_common(converge, common);
  opt(converge, "--n_list", "comma-separated n values");
  opt(converge, "--eval_points", "t:x pairs, comma separated");
  opt(converge, "--paths", "paths per n");
  opt(converge, "--brownian_mesh", "mesh of the Brownian reference paths");
  opt(converge, "--eps_band", "band half-width of the local-time estimator");

  CLI::App* report = app.add_subcommand("report", "merge JSON reports from previous runs");
  add_common(report, common);
  opt(report, "--inputs", "comma-separated report files");

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* cmd : {analyze, simulate, verify, converge, report}) {
    if (cmd->parsed()) return dispatch(cmd->get_name(), common, extra);
  }
  return 1;
}
