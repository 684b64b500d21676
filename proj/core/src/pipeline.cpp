#include "mclt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mclt/chain.hpp"
#include "mclt/csv.hpp"
#include "mclt/exact_law.hpp"
#include "mclt/local_time.hpp"
#include "mclt/parallel.hpp"
#include "mclt/sampler.hpp"
#include "mclt/spectral.hpp"
#include "mclt/stats.hpp"
#include "mclt/version.hpp"

namespace mclt {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::config_invalid, "cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json cert_to_json(const ExactCertificate& cert) {
  json j;
  j["strongly_aperiodic"] = cert.strongly_aperiodic;
  j["fundamental_cycles"] = cert.fundamental_cycles;
  j["smith_diag"] = cert.smith_diag;
  j["t_generator"] = {{"num", cert.t_gen_num}, {"den", cert.t_gen_den}};
  j["summary"] = cert.summary;
  if (!cert.strongly_aperiodic) {
    j["witness"] = {
        {"t_over_2pi", {{"num", cert.t_num}, {"den", cert.t_den}}},
        {"theta_over_2pi", {{"num", cert.theta_num}, {"den", cert.theta_den}}},
        {"lambda_re", cert.lambda.real()},
        {"lambda_im", cert.lambda.imag()},
    };
    json phi = json::array();
    for (const auto& v : cert.phi) phi.push_back({{"re", v.real()}, {"im", v.imag()}});
    j["witness"]["phi"] = phi;
  }
  return j;
}

json numeric_report_to_json(const AperiodicityReport& rep, const std::string& status) {
  json j;
  j["status"] = status;
  j["is_strongly_aperiodic"] = rep.is_strongly_aperiodic;
  j["sup_radius"] = rep.sup_radius;
  j["r_delta"] = rep.r_delta;
  if (rep.witness_t) {
    j["witness_t"] = *rep.witness_t;
    j["witness_lambda_re"] = rep.witness_lambda->real();
    j["witness_lambda_im"] = rep.witness_lambda->imag();
    json phi = json::array();
    for (int i = 0; i < rep.witness_phi->size(); ++i) {
      phi.push_back({{"re", (*rep.witness_phi)(i).real()}, {"im", (*rep.witness_phi)(i).imag()}});
    }
    j["witness_phi"] = phi;
  }
  return j;
}

struct OutDir {
  fs::path root;
  std::vector<std::string> artifacts;

  explicit OutDir(const std::string& dir) : root(dir) {
    if (dir.empty()) raise(errc::config_invalid, "output directory not set");
    if (fs::exists(root)) {
      if (!fs::is_directory(root) || !fs::is_empty(root)) {
        raise(errc::config_invalid,
              "output directory exists and is not empty (refusing to overwrite): " + dir);
      }
    } else {
      fs::create_directories(root);
    }
  }

  std::string file(const std::string& name) {
    artifacts.push_back(name);
    return (root / name).string();
  }

  void write_json(const std::string& name, const json& j) {
    std::ofstream out((root / name).string());
    out << j.dump(2) << '\n';
    artifacts.push_back(name);
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_manifest(OutDir& dir, const ExperimentConfig& config, double wall_seconds) {
  json j;
  j["tool"] = "mclt";
  j["version"] = kVersion;
  j["command"] = config.command;
  j["config"] = json::parse(config_to_json_text(config));
  j["config_hash"] = config_hash(config);
  j["seed"] = config.seed;
  j["workers"] = config.workers;
  j["wall_time_s"] = wall_seconds;
  j["artifacts"] = dir.artifacts;
  std::ofstream out((dir.root / "manifest.json").string());
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// analyze

int run_analyze(const ExperimentConfig& config) {
  auto start = std::chrono::steady_clock::now();
  MarkovChain chain = load_chain(config.chain_file);
  OutDir dir(config.out_dir);

  // Symmetric grid through 0 out to +-pi.
  std::vector<double> grid;
  long long half = static_cast<long long>(std::ceil(std::numbers::pi / config.curve_step));
  for (long long k = -half; k <= half; ++k) {
    double t = static_cast<double>(k) * std::numbers::pi / static_cast<double>(half);
    grid.push_back(t);
  }
  EigenCurve curve = leading_eigen_curve(chain, grid);
  {
    CsvWriter csv(dir.file("eigencurve.csv"),
                  {"t", "re_lambda", "im_lambda", "abs_lambda", "gap", "proj_deviation"});
    for (const auto& s : curve.samples) {
      csv.write_row({fmt_double(s.t), fmt_double(s.lambda.real()), fmt_double(s.lambda.imag()),
                     fmt_double(std::abs(s.lambda)), fmt_double(s.gap),
                     fmt_double(s.proj_deviation)});
    }
  }

  json aper;
  try {
    AperiodicityReport numeric =
        strong_aperiodicity_numeric(chain, config.delta, config.grid_step, config.margin);
    aper["numeric"] = numeric_report_to_json(numeric, "conclusive");
  } catch (const InconclusiveNearThreshold& inc) {
    aper["numeric"] = numeric_report_to_json(inc.report, "inconclusive");
  }
  auto [ok, cert] = strong_aperiodicity_exact(chain);
  aper["exact"] = cert_to_json(cert);
  aper["agree"] =
      aper["numeric"]["status"] == "inconclusive" ||
      aper["numeric"]["is_strongly_aperiodic"].get<bool>() == ok;
  dir.write_json("aperiodicity.json", aper);

  json sig;
  for (auto [method, name] :
       {std::pair{SigmaMethod::curvature, "curvature"},
        std::pair{SigmaMethod::autocovariance, "autocovariance"},
        std::pair{SigmaMethod::monte_carlo, "monte_carlo"}}) {
    try {
      sig[name] = sigma_squared(chain, method);
    } catch (const Error& e) {
      sig[name] = std::string("error: ") + e.what();
    }
  }
  dir.write_json("sigma.json", sig);
  write_manifest(dir, config, seconds_since(start));
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

int run_simulate(const ExperimentConfig& config) {
  auto start = std::chrono::steady_clock::now();
  MarkovChain chain = load_chain(config.chain_file);
  OutDir dir(config.out_dir);
  ChainSamplingTables tables(chain);
  const long long n = config.n;
  const double root_n = std::sqrt(static_cast<double>(std::max<long long>(n, 1)));

  struct Row {
    long long s_n = 0;
    long long max_abs = 0;
    long long visits_zero = 0;
  };
  std::vector<Row> rows(static_cast<size_t>(config.paths));
  std::vector<std::vector<long long>> trajectories;
  if (config.full) trajectories.resize(static_cast<size_t>(config.paths));

  parallel_for(static_cast<size_t>(config.paths), config.workers, [&](size_t i) {
    RngStream rng = path_stream(config.seed, i);
    int state = tables.sample_initial(rng);
    long long sum = tables.labels[static_cast<size_t>(state)];
    Row r;
    r.max_abs = std::llabs(sum);
    r.visits_zero = sum == 0 ? 1 : 0;
    std::vector<long long> traj;
    if (config.full) {
      traj.reserve(static_cast<size_t>(2 * (n + 1)));
      traj.push_back(tables.labels[static_cast<size_t>(state)]);
      traj.push_back(sum);
    }
    for (long long k = 1; k <= n; ++k) {
      state = tables.sample_step(state, rng);
      long long lab = tables.labels[static_cast<size_t>(state)];
      sum += lab;
      r.max_abs = std::max(r.max_abs, std::llabs(sum));
      if (sum == 0) ++r.visits_zero;
      if (config.full) {
        traj.push_back(lab);
        traj.push_back(sum);
      }
    }
    r.s_n = sum;
    rows[i] = r;
    if (config.full) trajectories[i] = std::move(traj);
  });

  {
    CsvWriter csv(dir.file("paths.csv"),
                  {"path", "s_n", "w_n_1", "max_abs_s", "visits_zero", "t_n_0"});
    for (size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      csv.write_row({std::to_string(i), std::to_string(r.s_n),
                     fmt_double(static_cast<double>(r.s_n) / root_n),
                     std::to_string(r.max_abs), std::to_string(r.visits_zero),
                     fmt_double(static_cast<double>(r.visits_zero) / root_n)});
    }
  }
  if (config.full) {
    CsvWriter csv(dir.file("trajectories.csv"), {"path", "k", "x_k", "s_k"});
    for (size_t i = 0; i < trajectories.size(); ++i) {
      const auto& traj = trajectories[i];
      for (long long k = 0; k <= n; ++k) {
        csv.write_row({std::to_string(i), std::to_string(k),
                       std::to_string(traj[static_cast<size_t>(2 * k)]),
                       std::to_string(traj[static_cast<size_t>(2 * k + 1)])});
      }
    }
  }
  write_manifest(dir, config, seconds_since(start));
  return 0;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const ExperimentConfig& config) {
  auto start = std::chrono::steady_clock::now();
  MarkovChain chain = load_chain(config.chain_file);

  // The whole lemma suite assumes strong aperiodicity; reject early with a
  // diagnostic naming the failed check.
  auto [aperiodic, cert] = strong_aperiodicity_exact(chain);
  if (!aperiodic) {
    raise(errc::not_strongly_aperiodic,
          "verify requires strong aperiodicity (aperiodicity check: " + cert.summary +
              "); the local-limit, potential-kernel and fourth-moment bounds assume it");
  }
  double drift = mean_drift(chain);
  if (std::abs(drift) > kDriftTol) {
    raise(errc::not_centered, "verify requires a centered chain, drift = " + std::to_string(drift));
  }

  OutDir dir(config.out_dir);
  json summary;
  bool all_pass = true;

  // Local limit bound: sqrt(n) sup_x P(S_n = x) stays bounded.
  {
    LltScanResult scan = llt_scan(chain, config.llt_n_max);
    CsvWriter csv(dir.file("llt.csv"), {"n", "sup_scaled_prob"});
    std::vector<double> xs, ys;
    for (const auto& e : scan.entries) {
      csv.write_row({std::to_string(e.n), fmt_double(e.sup_scaled)});
      if (e.n >= config.llt_n_max / 4) {
        xs.push_back(static_cast<double>(e.n));
        ys.push_back(e.sup_scaled);
      }
    }
    double slope = regression_slope(xs, ys);
    bool pass = std::abs(slope) < 1e-4;
    summary["llt"] = {{"c_emp", scan.c_emp},
                      {"trend_slope", slope},
                      {"window", {config.llt_n_max / 4, config.llt_n_max}},
                      {"pass", pass}};
    all_pass = all_pass && pass;
  }

  // Potential kernel: partial sums grow at most linearly in |x - y|.
  {
    std::vector<KernelQuery> queries;
    for (long long y = 1; y <= config.kernel_span; ++y) {
      for (int s = 0; s < chain.size(); ++s) queries.push_back({0, y, s});
    }
    auto results = potential_kernel_sums(chain, queries, config.kernel_big_n);
    CsvWriter csv(dir.file("kernel.csv"), {"x", "y", "partial_sum", "ratio"});
    double c_emp = 0.0, early_max = 0.0, late_max = 0.0, worst_tail = 0.0;
    for (long long y = 1; y <= config.kernel_span; ++y) {
      double total = 0.0;
      for (int s = 0; s < chain.size(); ++s) {
        const auto& r = results[static_cast<size_t>((y - 1) * chain.size() + s)];
        total += r.partial_sum;
        worst_tail = std::max(worst_tail, r.max_late_term);
      }
      double ratio = total / static_cast<double>(y);
      csv.write_row({"0", std::to_string(y), fmt_double(total), fmt_double(ratio)});
      c_emp = std::max(c_emp, ratio);
      if (y <= config.kernel_span / 2) early_max = std::max(early_max, ratio);
      else late_max = std::max(late_max, ratio);
    }
    // Boundedness: the large-|x-y| ratios must not exceed the small-|x-y|
    // ratios by more than 10%.
    bool pass = late_max <= 1.1 * early_max;
    summary["kernel"] = {{"c_emp", c_emp},
                         {"early_max", early_max},
                         {"late_max", late_max},
                         {"max_late_term", worst_tail},
                         {"pass", pass}};
    all_pass = all_pass && pass;
  }

  // Fourth moment: exact enumeration against Monte Carlo, then the n|x-y|^2
  // bound at Monte Carlo scales.
  {
    CsvWriter csv(dir.file("moment4.csv"), {"n", "x", "y", "exact_or_mc", "value", "ratio"});
    bool pass = true;
    for (long long n : {2LL, 4LL, std::min(config.m4_exact_n, 12LL)}) {
      for (long long d : {1LL, 2LL, 4LL}) {
        double exact = fourth_moment_exact(chain, n, 0, d);
        McEstimate mc = fourth_moment_mc(chain, n, 0, d, config.m4_paths, config.seed,
                                         config.workers);
        double denom = static_cast<double>(n) * static_cast<double>(d * d);
        csv.write_row({std::to_string(n), "0", std::to_string(d), "exact", fmt_double(exact),
                       fmt_double(exact / denom)});
        csv.write_row({std::to_string(n), "0", std::to_string(d), "mc", fmt_double(mc.estimate),
                       fmt_double(mc.estimate / denom)});
        if (std::abs(mc.estimate - exact) > 3.0 * std::max(mc.stderr_, 1e-12)) pass = false;
      }
    }
    double c_emp = 0.0;
    std::vector<double> per_n_max;
    for (long long n : config.m4_mc_n) {
      double local = 0.0;
      std::vector<long long> ds = {1, 3,
                                   static_cast<long long>(std::sqrt(static_cast<double>(n)))};
      for (long long d : ds) {
        McEstimate mc =
            fourth_moment_mc(chain, n, 0, d, config.m4_paths, config.seed, config.workers);
        double ratio = mc.estimate / (static_cast<double>(n) * static_cast<double>(d * d));
        csv.write_row({std::to_string(n), "0", std::to_string(d), "mc", fmt_double(mc.estimate),
                       fmt_double(ratio)});
        c_emp = std::max(c_emp, ratio);
        local = std::max(local, ratio);
      }
      per_n_max.push_back(local);
    }
    // The empirical constant must not grow with n.
    for (size_t i = 0; i + 1 < per_n_max.size(); ++i) {
      if (per_n_max[i + 1] > 1.5 * per_n_max[i] + 1e-9) pass = false;
    }
    summary["moment4"] = {{"c_emp", c_emp}, {"pass", pass}};
    all_pass = all_pass && pass;
  }

  summary["pass"] = all_pass;
  dir.write_json("verify.json", summary);
  write_manifest(dir, config, seconds_since(start));
  return all_pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// converge

int run_converge(const ExperimentConfig& config) {
  auto start = std::chrono::steady_clock::now();
  MarkovChain chain = load_chain(config.chain_file);
  OutDir dir(config.out_dir);

  ConvergenceReport report =
      convergence_report(chain, config.n_list, config.eval_points, config.paths, config.seed,
                         config.workers, config.brownian_mesh, config.eps_band);

  {
    CsvWriter csv(dir.file("ks.csv"),
                  {"n", "t", "x", "paths", "ks_vs_brownian", "ks_vs_half_normal", "out_of_range"});
    for (const auto& r : report.rows) {
      csv.write_row({std::to_string(r.n), fmt_double(r.t), fmt_double(r.x),
                     std::to_string(r.paths), fmt_double(r.ks_vs_brownian),
                     fmt_double(r.ks_vs_half_normal), r.out_of_range ? "1" : "0"});
    }
  }
  {
    CsvWriter csv(dir.file("tails.csv"), {"n", "a", "prob"});
    for (const auto& t : report.tails) {
      csv.write_row({std::to_string(t.n), fmt_double(t.a), fmt_double(t.prob)});
    }
  }

  // Soft verdict on the headline sequence at (t,x) = (1,0), when present.
  json j;
  j["sigma"] = report.sigma;
  j["m"] = report.m;
  j["brownian_mesh"] = report.brownian_mesh;
  j["eps_band"] = report.eps_band;
  bool pass = true;
  std::vector<double> headline;
  for (const auto& r : report.rows) {
    if (r.t == 1.0 && r.x == 0.0 && r.ks_vs_half_normal >= 0.0) {
      headline.push_back(r.ks_vs_half_normal);
    }
  }
  if (!headline.empty()) {
    double se = 0.26 / std::sqrt(static_cast<double>(config.paths));
    for (size_t i = 0; i + 1 < headline.size(); ++i) {
      if (headline[i + 1] > headline[i] + 2.0 * se) pass = false;
    }
    if (headline.back() >= 0.05) pass = false;
    j["headline_ks"] = headline;
  }
  j["pass"] = pass;
  dir.write_json("converge.json", j);
  write_manifest(dir, config, seconds_since(start));
  return pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// report

int run_report(const ExperimentConfig& config) {
  auto start = std::chrono::steady_clock::now();
  if (config.inputs.empty()) raise(errc::config_invalid, "report: no input files");
  OutDir dir(config.out_dir);
  json merged;
  merged["runs"] = json::array();
  for (const auto& path : config.inputs) {
    json j = json::parse(read_file(path), nullptr, true, true);
    merged["runs"].push_back({{"source", path}, {"content", j}});
  }
  dir.write_json("merged.json", merged);

  std::ofstream text((dir.root / "report.txt").string());
  text << "mclt merged report (" << config.inputs.size() << " runs)\n";
  for (const auto& run : merged["runs"]) {
    text << "\n== " << run["source"].get<std::string>() << "\n";
    const json& c = run["content"];
    for (auto it = c.begin(); it != c.end(); ++it) {
      text << "  " << it.key() << ": " << it.value().dump() << "\n";
    }
  }
  dir.artifacts.push_back("report.txt");
  write_manifest(dir, config, seconds_since(start));
  return 0;
}

}  // namespace

ExperimentConfig parse_config_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    raise(errc::config_invalid, std::string("config is not valid JSON: ") + e.what());
  }
  if (doc.contains("config") && doc["config"].is_object()) {
    doc = doc["config"];  // manifest replay
  }
  ExperimentConfig c;
  try {
    if (doc.contains("command")) c.command = doc["command"].get<std::string>();
    if (doc.contains("chain")) c.chain_file = doc["chain"].get<std::string>();
    if (doc.contains("seed")) {
      c.seed = doc["seed"].get<std::uint64_t>();
      c.seed_set = true;
    }
    if (doc.contains("out")) c.out_dir = doc["out"].get<std::string>();
    if (doc.contains("workers")) c.workers = doc["workers"].get<int>();
    if (doc.contains("delta")) c.delta = doc["delta"].get<double>();
    if (doc.contains("grid_step")) c.grid_step = doc["grid_step"].get<double>();
    if (doc.contains("margin")) c.margin = doc["margin"].get<double>();
    if (doc.contains("curve_step")) c.curve_step = doc["curve_step"].get<double>();
    if (doc.contains("n")) c.n = doc["n"].get<long long>();
    if (doc.contains("paths")) c.paths = doc["paths"].get<long long>();
    if (doc.contains("full")) c.full = doc["full"].get<bool>();
    if (doc.contains("llt_n_max")) c.llt_n_max = doc["llt_n_max"].get<long long>();
    if (doc.contains("kernel_N")) c.kernel_big_n = doc["kernel_N"].get<long long>();
    if (doc.contains("kernel_span")) c.kernel_span = doc["kernel_span"].get<long long>();
    if (doc.contains("m4_exact_n")) c.m4_exact_n = doc["m4_exact_n"].get<long long>();
    if (doc.contains("m4_mc_n")) c.m4_mc_n = doc["m4_mc_n"].get<std::vector<long long>>();
    if (doc.contains("m4_paths")) c.m4_paths = doc["m4_paths"].get<long long>();
    if (doc.contains("n_list")) c.n_list = doc["n_list"].get<std::vector<long long>>();
    if (doc.contains("eval_points")) {
      c.eval_points.clear();
      for (const auto& p : doc["eval_points"]) {
        c.eval_points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      }
    }
    if (doc.contains("brownian_mesh")) c.brownian_mesh = doc["brownian_mesh"].get<long long>();
    if (doc.contains("eps_band")) c.eps_band = doc["eps_band"].get<double>();
    if (doc.contains("inputs")) c.inputs = doc["inputs"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    raise(errc::config_invalid, std::string("config schema error: ") + e.what());
  }
  return c;
}

std::string config_to_json_text(const ExperimentConfig& c) {
  json doc;
  doc["command"] = c.command;
  doc["chain"] = c.chain_file;
  doc["seed"] = c.seed;
  doc["out"] = c.out_dir;
  doc["workers"] = c.workers;
  doc["delta"] = c.delta;
  doc["grid_step"] = c.grid_step;
  doc["margin"] = c.margin;
  doc["curve_step"] = c.curve_step;
  doc["n"] = c.n;
  doc["paths"] = c.paths;
  doc["full"] = c.full;
  doc["llt_n_max"] = c.llt_n_max;
  doc["kernel_N"] = c.kernel_big_n;
  doc["kernel_span"] = c.kernel_span;
  doc["m4_exact_n"] = c.m4_exact_n;
  doc["m4_mc_n"] = c.m4_mc_n;
  doc["m4_paths"] = c.m4_paths;
  doc["n_list"] = c.n_list;
  json pts = json::array();
  for (const auto& p : c.eval_points) pts.push_back({p.first, p.second});
  doc["eval_points"] = pts;
  doc["brownian_mesh"] = c.brownian_mesh;
  doc["eps_band"] = c.eps_band;
  doc["inputs"] = c.inputs;
  return doc.dump(2);
}

void apply_overrides(ExperimentConfig& config,
                     const std::map<std::string, std::string>& overrides) {
  auto to_ll = [](const std::string& s) { return std::stoll(s); };
  auto to_d = [](const std::string& s) { return std::stod(s); };
  for (const auto& [key, value] : overrides) {
    if (key == "chain") config.chain_file = value;
    else if (key == "seed") { config.seed = std::stoull(value); config.seed_set = true; }
    else if (key == "out") config.out_dir = value;
    else if (key == "workers") config.workers = static_cast<int>(to_ll(value));
    else if (key == "delta") config.delta = to_d(value);
    else if (key == "grid_step") config.grid_step = to_d(value);
    else if (key == "margin") config.margin = to_d(value);
    else if (key == "curve_step") config.curve_step = to_d(value);
    else if (key == "n") config.n = to_ll(value);
    else if (key == "paths") config.paths = to_ll(value);
    else if (key == "full") config.full = value == "1" || value == "true";
    else if (key == "llt_n_max") config.llt_n_max = to_ll(value);
    else if (key == "kernel_N") config.kernel_big_n = to_ll(value);
    else if (key == "kernel_span") config.kernel_span = to_ll(value);
    else if (key == "m4_exact_n") config.m4_exact_n = to_ll(value);
    else if (key == "m4_paths") config.m4_paths = to_ll(value);
    else if (key == "brownian_mesh") config.brownian_mesh = to_ll(value);
    else if (key == "eps_band") config.eps_band = to_d(value);
    else if (key == "n_list" || key == "m4_mc_n") {
      std::vector<long long> vals;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) vals.push_back(to_ll(item));
      if (key == "n_list") config.n_list = vals;
      else config.m4_mc_n = vals;
    } else if (key == "eval_points") {
      // "t:x,t:x"
      config.eval_points.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto pos = item.find(':');
        if (pos == std::string::npos) raise(errc::config_invalid, "eval_points wants t:x pairs");
        config.eval_points.push_back({to_d(item.substr(0, pos)), to_d(item.substr(pos + 1))});
      }
    } else if (key == "inputs") {
      config.inputs.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) config.inputs.push_back(item);
    } else {
      raise(errc::config_invalid, "unknown option: " + key);
    }
  }
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = fnv1a(config_to_json_text(config));
  if (!config.chain_file.empty() && fs::exists(config.chain_file)) {
    h = fnv1a(read_file(config.chain_file), h);
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void validate_config(const ExperimentConfig& c) {
  static const std::vector<std::string> commands = {"analyze", "simulate", "verify", "converge",
                                                    "report"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
    raise(errc::config_invalid, "unknown command: '" + c.command + "'");
  }
  if (!c.seed_set) raise(errc::config_invalid, "seed is mandatory (use --seed or config)");
  if (c.out_dir.empty()) raise(errc::config_invalid, "output directory is mandatory");
  if (c.command != "report") {
    if (c.chain_file.empty()) raise(errc::config_invalid, "chain file is mandatory");
    if (!fs::exists(c.chain_file)) {
      raise(errc::config_invalid, "chain file does not exist: " + c.chain_file);
    }
  }
  if (c.command == "converge") {
    if (c.n_list.empty() || c.eval_points.empty()) {
      raise(errc::config_invalid, "converge needs nonempty n_list and eval_points");
    }
  }
  if (c.command == "report" && c.inputs.empty()) {
    raise(errc::config_invalid, "report needs input files");
  }
}

}  // namespace

int run_pipeline(const ExperimentConfig& config) {
  try {
    validate_config(config);
    if (config.command == "analyze") return run_analyze(config);
    if (config.command == "simulate") return run_simulate(config);
    if (config.command == "verify") return run_verify(config);
    if (config.command == "converge") return run_converge(config);
    return run_report(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << " (command: " << config.command << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mclt
