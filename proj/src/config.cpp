#include "accmm/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "accmm/errors.hpp"
#include "accmm/trace.hpp"

namespace accmm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: bad real for " + key + ": '" + v + "'");
  }
}

long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: bad integer for " + key + ": '" + v + "'");
  }
}

std::vector<std::uint64_t> to_seed_list(const std::string& key, const std::string& v) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    seeds.push_back(static_cast<std::uint64_t>(to_int(key, cell)));
  }
  if (seeds.empty()) throw config_error("config: empty seed list for " + key);
  return seeds;
}

}  // namespace

void RunConfig::validate() const {
  if (problem != "quadratic_mini" && problem != "quadratic_saddle" && problem != "poisoning") {
    throw config_error("config: unknown problem '" + problem + "'");
  }
  if (algorithm.empty()) throw config_error("config: algorithm is required");
  static const char* kAlgos[] = {"acc_zom", "acc_zomda", "acc_semi_zomda",
                                 "acc_mda", "zo_sgd",    "sgda"};
  if (std::find_if(std::begin(kAlgos), std::end(kAlgos),
                   [&](const char* a) { return algorithm == a; }) == std::end(kAlgos)) {
    throw config_error("config: unknown algorithm '" + algorithm + "'");
  }
  const bool mini_problem = (problem == "quadratic_mini");
  const bool mini_algo = (algorithm == "acc_zom");
  const bool minimax_algo =
      (algorithm == "acc_zomda" || algorithm == "acc_semi_zomda" || algorithm == "acc_mda" ||
       algorithm == "sgda");
  if (mini_algo && !mini_problem) {
    throw config_error("config: " + algorithm + " needs a mini problem");
  }
  if (minimax_algo && mini_problem) {
    throw config_error("config: " + algorithm + " needs a minimax problem");
  }
  if (problem == "poisoning") {
    if (n < 2 || d < 1) throw config_error("config: poisoning needs n >= 2, d >= 1");
    if (!(epsilon > 0.0) || !(lambda_reg > 0.0)) {
      throw config_error("config: poisoning radii must be positive");
    }
    if (!(corruption_rate > 0.0 && corruption_rate < 1.0)) {
      throw config_error("config: corruption_rate must lie in (0, 1)");
    }
  }
  if (metric != "auto" && metric != "g" && metric != "h" && metric != "gap" &&
      metric != "grad_g" && metric != "none") {
    throw config_error("config: unknown metric '" + metric + "'");
  }
  if (metric_every < 1) throw config_error("config: metric_every must be >= 1");
  if (seeds.empty()) throw config_error("config: at least one seed required");
  if (output_dir.empty()) throw config_error("config: output_dir must not be empty");
  auto check_set = [](const std::string& name, const std::string& v) {
    if (v != "auto" && v != "none" && v != "linf" && v != "l2") {
      throw config_error("config: unknown set kind for " + name + ": '" + v + "'");
    }
  };
  check_set("set_x", set_x);
  check_set("set_y", set_y);
  if (init_y != "auto" && init_y != "ystar" && init_y != "zero") {
    throw config_error("config: unknown init.y '" + init_y + "'");
  }
}

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config: line " + std::to_string(lineno) + " has no '='");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config: empty key at line " + std::to_string(lineno));
    if (kv.count(key) != 0) throw config_error("config: duplicate key '" + key + "'");
    kv[key] = val;
  }

  RunConfig cfg;
  auto take = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) return "";
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("problem"); !v.empty()) cfg.problem = v;
  if (auto v = take("problem.n"); !v.empty()) cfg.n = static_cast<int>(to_int("problem.n", v));
  if (auto v = take("problem.d"); !v.empty()) cfg.d = static_cast<int>(to_int("problem.d", v));
  if (auto v = take("problem.epsilon"); !v.empty()) cfg.epsilon = to_real("problem.epsilon", v);
  if (auto v = take("problem.lambda_reg"); !v.empty()) {
    cfg.lambda_reg = to_real("problem.lambda_reg", v);
  }
  if (auto v = take("problem.corruption_rate"); !v.empty()) {
    cfg.corruption_rate = to_real("problem.corruption_rate", v);
  }
  if (auto v = take("problem.data"); !v.empty()) cfg.data_csv = v;
  if (auto v = take("problem.dim"); !v.empty()) cfg.dim = static_cast<int>(to_int("problem.dim", v));
  if (auto v = take("problem.dim_x"); !v.empty()) {
    cfg.dim_x = static_cast<int>(to_int("problem.dim_x", v));
  }
  if (auto v = take("problem.dim_y"); !v.empty()) {
    cfg.dim_y = static_cast<int>(to_int("problem.dim_y", v));
  }
  if (auto v = take("problem.tau"); !v.empty()) cfg.tau = to_real("problem.tau", v);
  if (auto v = take("problem.sigma"); !v.empty()) cfg.sigma = to_real("problem.sigma", v);
  if (auto v = take("problem.curvature"); !v.empty()) {
    cfg.curvature = to_real("problem.curvature", v);
  }
  if (auto v = take("problem.seed"); !v.empty()) {
    cfg.problem_seed = static_cast<std::uint64_t>(to_int("problem.seed", v));
  }

  if (auto v = take("set_x.kind"); !v.empty()) cfg.set_x = v;
  if (auto v = take("set_y.kind"); !v.empty()) cfg.set_y = v;
  if (auto v = take("set_x.radius"); !v.empty()) cfg.set_x_radius = to_real("set_x.radius", v);
  if (auto v = take("set_y.radius"); !v.empty()) cfg.set_y_radius = to_real("set_y.radius", v);

  if (auto v = take("algorithm"); !v.empty()) cfg.algorithm = v;

  const bool poisoning = (cfg.problem == "poisoning");
  cfg.hp.gamma = poisoning ? 0.2 : 0.1;
  cfg.hp.lambda = poisoning ? 0.08 : 0.1;
  cfg.hp.b = poisoning ? 10 : 1;
  cfg.hp.k = 1.0;
  cfg.hp.m = 3.0;
  cfg.hp.c = 3.0;
  cfg.hp.c1 = 3.0;
  cfg.hp.c2 = 3.0;

  if (auto v = take("hp.gamma"); !v.empty()) {
    cfg.hp.gamma = to_real("hp.gamma", v);
    cfg.hp_set_gamma = true;
  }
  if (auto v = take("hp.lambda"); !v.empty()) {
    cfg.hp.lambda = to_real("hp.lambda", v);
    cfg.hp_set_lambda = true;
  }
  if (auto v = take("hp.k"); !v.empty()) cfg.hp.k = to_real("hp.k", v);
  if (auto v = take("hp.m"); !v.empty()) cfg.hp.m = to_real("hp.m", v);
  if (auto v = take("hp.c"); !v.empty()) cfg.hp.c = to_real("hp.c", v);
  if (auto v = take("hp.c1"); !v.empty()) cfg.hp.c1 = to_real("hp.c1", v);
  if (auto v = take("hp.c2"); !v.empty()) cfg.hp.c2 = to_real("hp.c2", v);
  if (auto v = take("hp.b"); !v.empty()) {
    cfg.hp.b = static_cast<int>(to_int("hp.b", v));
    cfg.hp_set_b = true;
  }
  if (auto v = take("hp.T"); !v.empty()) cfg.hp.T = static_cast<int>(to_int("hp.T", v));
  if (auto v = take("hp.mu"); !v.empty()) cfg.hp.smoothing.mu = to_real("hp.mu", v);
  if (auto v = take("hp.mu1"); !v.empty()) cfg.hp.smoothing.mu1 = to_real("hp.mu1", v);
  if (auto v = take("hp.mu2"); !v.empty()) cfg.hp.smoothing.mu2 = to_real("hp.mu2", v);

  if (auto v = take("seeds"); !v.empty()) cfg.seeds = to_seed_list("seeds", v);
  if (auto v = take("metric_every"); !v.empty()) {
    cfg.metric_every = static_cast<int>(to_int("metric_every", v));
  }
  if (auto v = take("metric"); !v.empty()) cfg.metric = v;
  if (auto v = take("output_dir"); !v.empty()) cfg.output_dir = v;
  if (auto v = take("init.x_scale"); !v.empty()) cfg.init_x_scale = to_real("init.x_scale", v);
  if (auto v = take("init.y"); !v.empty()) cfg.init_y = v;
  if (auto v = take("gap.gamma"); !v.empty()) cfg.gap_gamma = to_real("gap.gamma", v);
  if (auto v = take("gap.lambda"); !v.empty()) cfg.gap_lambda = to_real("gap.lambda", v);

  if (!kv.empty()) throw config_error("config: unknown key '" + kv.begin()->first + "'");
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string render_config(const RunConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["problem"] = cfg.problem;
  if (cfg.problem == "poisoning") {
    kv["problem.n"] = std::to_string(cfg.n);
    kv["problem.d"] = std::to_string(cfg.d);
    kv["problem.epsilon"] = format_real(cfg.epsilon);
    kv["problem.lambda_reg"] = format_real(cfg.lambda_reg);
    kv["problem.corruption_rate"] = format_real(cfg.corruption_rate);
    if (!cfg.data_csv.empty()) kv["problem.data"] = cfg.data_csv;
  } else if (cfg.problem == "quadratic_mini") {
    kv["problem.dim"] = std::to_string(cfg.dim);
    kv["problem.sigma"] = format_real(cfg.sigma);
    kv["problem.curvature"] = format_real(cfg.curvature);
  } else {
    kv["problem.dim_x"] = std::to_string(cfg.dim_x);
    kv["problem.dim_y"] = std::to_string(cfg.dim_y);
    kv["problem.tau"] = format_real(cfg.tau);
    kv["problem.sigma"] = format_real(cfg.sigma);
    kv["problem.curvature"] = format_real(cfg.curvature);
  }
  kv["problem.seed"] = std::to_string(cfg.problem_seed);
  kv["set_x.kind"] = cfg.set_x;
  kv["set_y.kind"] = cfg.set_y;
  if (cfg.set_x_radius > 0.0) kv["set_x.radius"] = format_real(cfg.set_x_radius);
  if (cfg.set_y_radius > 0.0) kv["set_y.radius"] = format_real(cfg.set_y_radius);
  kv["algorithm"] = cfg.algorithm;
  kv["hp.gamma"] = format_real(cfg.hp.gamma);
  kv["hp.lambda"] = format_real(cfg.hp.lambda);
  kv["hp.k"] = format_real(cfg.hp.k);
  kv["hp.m"] = format_real(cfg.hp.m);
  kv["hp.c"] = format_real(cfg.hp.c);
  kv["hp.c1"] = format_real(cfg.hp.c1);
  kv["hp.c2"] = format_real(cfg.hp.c2);
  kv["hp.b"] = std::to_string(cfg.hp.b);
  kv["hp.T"] = std::to_string(cfg.hp.T);
  if (cfg.hp.smoothing.mu) kv["hp.mu"] = format_real(*cfg.hp.smoothing.mu);
  if (cfg.hp.smoothing.mu1) kv["hp.mu1"] = format_real(*cfg.hp.smoothing.mu1);
  if (cfg.hp.smoothing.mu2) kv["hp.mu2"] = format_real(*cfg.hp.smoothing.mu2);
  std::string seeds;
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    if (i > 0) seeds += ",";
    seeds += std::to_string(cfg.seeds[i]);
  }
  kv["seeds"] = seeds;
  kv["metric_every"] = std::to_string(cfg.metric_every);
  kv["metric"] = cfg.metric;
  kv["output_dir"] = cfg.output_dir;
  kv["init.x_scale"] = format_real(cfg.init_x_scale);
  kv["init.y"] = cfg.init_y;
  if (cfg.gap_gamma > 0.0) kv["gap.gamma"] = format_real(cfg.gap_gamma);
  if (cfg.gap_lambda > 0.0) kv["gap.lambda"] = format_real(cfg.gap_lambda);

  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

}  // namespace accmm
