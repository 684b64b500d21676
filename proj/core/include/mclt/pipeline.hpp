#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mclt {

// Resolved configuration of one batch run. Values come from the config file
// first, then flag overrides (flags win); the seed is mandatory so every run
// is replayable from its manifest.
struct ExperimentConfig {
  std::string command;  // analyze | simulate | verify | converge | report
  std::string chain_file;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  int workers = 0;  // 0 = hardware concurrency

  // analyze
  double delta = 0.05;
  double grid_step = 1e-3;
  double margin = 1e-6;
  double curve_step = 5e-3;

  // simulate
  long long n = 10000;
  long long paths = 10000;
  bool full = false;

  // verify
  long long llt_n_max = 2000;
  long long kernel_big_n = 20000;
  long long kernel_span = 30;
  long long m4_exact_n = 8;
  std::vector<long long> m4_mc_n = {100, 1000, 10000};
  long long m4_paths = 2000;

  // converge
  std::vector<long long> n_list = {100, 1000, 10000};
  std::vector<std::pair<double, double>> eval_points = {{1.0, 0.0}, {1.0, 0.5}, {0.5, 0.0}};
  long long brownian_mesh = 20000;
  double eps_band = 0.01;

  // report
  std::vector<std::string> inputs;
};

// Parse a JSON config document (or a manifest: its embedded "config" object
// is used so a run can be replayed byte-for-byte). Throws config_invalid.
ExperimentConfig parse_config_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

// Flag overrides as key/value strings; keys mirror the config field names.
void apply_overrides(ExperimentConfig& config,
                     const std::map<std::string, std::string>& overrides);

// FNV-1a over the canonical config dump plus the chain file bytes: covers
// every input that affects the artifacts.
std::string config_hash(const ExperimentConfig& config);

// Runs the configured pipeline, writing CSV/JSON artifacts plus manifest.json
// into a fresh out_dir. Exit status: 0 = pass, 2 = a bound check failed,
// 1 = input or module error (diagnostic on stderr names the check).
int run_pipeline(const ExperimentConfig& config);

}  // namespace mclt
