#include "accmm/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "accmm/metrics.hpp"
#include "accmm/optimizers.hpp"
#include "accmm/poisoning.hpp"
#include "accmm/quadratic.hpp"
#include "accmm/trace.hpp"

namespace accmm {

namespace fs = std::filesystem;

namespace {

struct Problem {
  std::unique_ptr<MiniOracle> mini;
  std::unique_ptr<MinimaxOracle> minimax;
  ConstraintSet set_x = ConstraintSet::unconstrained(1);
  ConstraintSet set_y = ConstraintSet::unconstrained(1);
  Vec x_init;
  Vec y_init;
  TheoryConstants constants;
  std::optional<double> lf_estimated;  // set when L_f was probed, not exact
};

ConstraintSet make_set(const std::string& kind, double radius, int dim, const char* which) {
  if (kind == "none") return ConstraintSet::unconstrained(dim);
  if (kind == "linf") {
    if (!(radius > 0.0)) throw config_error(std::string("config: ") + which + ".radius required");
    return ConstraintSet::linf_ball(dim, radius);
  }
  if (kind == "l2") {
    if (!(radius > 0.0)) throw config_error(std::string("config: ") + which + ".radius required");
    return ConstraintSet::l2_ball(dim, radius);
  }
  throw config_error(std::string("config: bad set kind for ") + which);
}

Problem build_problem(const RunConfig& cfg) {
  Problem prob;
  if (cfg.problem == "quadratic_mini") {
    auto oracle = std::make_unique<QuadraticMini>(cfg.dim, cfg.problem_seed, cfg.sigma,
                                                  cfg.curvature);
    prob.constants.lipschitz = oracle->smoothness();
    prob.constants.d = cfg.dim;
    prob.set_x = cfg.set_x == "auto" ? ConstraintSet::unconstrained(cfg.dim)
                                     : make_set(cfg.set_x, cfg.set_x_radius, cfg.dim, "set_x");
    prob.x_init = constant(static_cast<std::size_t>(cfg.dim), cfg.init_x_scale);
    prob.mini = std::move(oracle);
    return prob;
  }
  if (cfg.problem == "quadratic_saddle") {
    auto oracle = std::make_unique<QuadraticSaddle>(cfg.dim_x, cfg.dim_y, cfg.problem_seed,
                                                    cfg.tau, cfg.sigma, cfg.curvature);
    prob.constants.lipschitz_lf = oracle->smoothness_lf();
    prob.constants.tau = oracle->strong_concavity_tau();
    prob.constants.d1 = cfg.dim_x;
    prob.constants.d2 = cfg.dim_y;
    prob.set_x = cfg.set_x == "auto" ? ConstraintSet::unconstrained(cfg.dim_x)
                                     : make_set(cfg.set_x, cfg.set_x_radius, cfg.dim_x, "set_x");
    prob.set_y = cfg.set_y == "auto" ? ConstraintSet::unconstrained(cfg.dim_y)
                                     : make_set(cfg.set_y, cfg.set_y_radius, cfg.dim_y, "set_y");
    prob.x_init = constant(static_cast<std::size_t>(cfg.dim_x), cfg.init_x_scale);
    if (cfg.init_y == "zero") {
      prob.y_init = zeros(static_cast<std::size_t>(cfg.dim_y));
    } else {
      prob.y_init = prob.set_y.project(oracle->y_star(prob.x_init));
    }
    prob.minimax = std::move(oracle);
    return prob;
  }

  // poisoning
  PoisonDataset ds;
  if (!cfg.data_csv.empty()) {
    ds = load_poisoning_csv(cfg.data_csv);
  } else {
    RngStream rng(cfg.problem_seed, "data-gen");
    ds = gen_poisoning_data(cfg.n, cfg.d, rng, cfg.corruption_rate);
  }
  const int d = ds.d;
  auto oracle = std::make_unique<PoisoningOracle>(std::move(ds));
  prob.constants.d1 = d;
  prob.constants.d2 = d;
  prob.set_x = cfg.set_x == "auto" ? ConstraintSet::linf_ball(d, cfg.epsilon)
                                   : make_set(cfg.set_x, cfg.set_x_radius, d, "set_x");
  prob.set_y = cfg.set_y == "auto" ? ConstraintSet::l2_ball(d, std::sqrt(cfg.lambda_reg))
                                   : make_set(cfg.set_y, cfg.set_y_radius, d, "set_y");
  prob.x_init = zeros(static_cast<std::size_t>(d));
  prob.y_init = zeros(static_cast<std::size_t>(d));

  // tau is not verifiable for this objective; L_f is probed and reported as
  // an estimate only.
  RngStream probe_rng(cfg.problem_seed, "lf-probe");
  prob.lf_estimated = estimate_lf(*oracle, prob.set_x, prob.set_y, 1000, probe_rng);
  prob.constants.lipschitz_lf = prob.lf_estimated;
  prob.minimax = std::move(oracle);
  return prob;
}

std::string metric_kind(const RunConfig& cfg, const Problem& prob) {
  if (cfg.metric != "auto") return cfg.metric;
  if (prob.mini) return "g";
  if (cfg.problem == "poisoning") return "gap";
  return prob.set_x.is_unconstrained() ? "grad_g" : "h";
}

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::optional<double> final_metric;
  std::optional<double> best_metric;
  std::uint64_t fq = 0;
  std::uint64_t gq = 0;
  std::uint64_t cancellation_warnings = 0;
};

SeedOutcome summarize(std::uint64_t seed, const std::vector<TraceRow>& trace,
                      const QueryCounter& counter) {
  SeedOutcome out;
  out.seed = seed;
  for (const TraceRow& r : trace) {
    if (r.metric.has_value()) {
      out.final_metric = r.metric;
      if (!out.best_metric || *r.metric < *out.best_metric) out.best_metric = r.metric;
    }
  }
  out.fq = counter.function_queries;
  out.gq = counter.gradient_queries;
  out.cancellation_warnings = counter.cancellation_warnings;
  return out;
}

void write_summary(const std::string& path, const std::vector<SeedOutcome>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open " + path);
  out << "seed,final_metric,best_metric,fq,gq\n";
  for (const SeedOutcome& r : rows) {
    out << r.seed << ",";
    if (r.final_metric) out << format_real(*r.final_metric);
    out << ",";
    if (r.best_metric) out << format_real(*r.best_metric);
    out << "," << r.fq << "," << r.gq << "\n";
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open " + path);
  out << text;
}

RunConfig resolve_smoothing(const RunConfig& cfg, const Problem& prob) {
  RunConfig r = cfg;
  if (prob.mini) {
    if (!r.hp.smoothing.mu) {
      r.hp.smoothing.mu = default_mu(prob.mini->dim(), r.hp.m, r.hp.T);
    }
  } else {
    if (!r.hp.smoothing.mu1) {
      r.hp.smoothing.mu1 = default_mu1(prob.minimax->dim_x(), r.hp.m, r.hp.T);
    }
    if (!r.hp.smoothing.mu2) {
      r.hp.smoothing.mu2 =
          default_mu2(prob.minimax->dim_x(), prob.minimax->dim_y(), r.hp.m, r.hp.T);
    }
  }
  if (r.gap_gamma <= 0.0) r.gap_gamma = r.hp.gamma;
  if (r.gap_lambda <= 0.0) r.gap_lambda = r.hp.lambda;
  return r;
}

}  // namespace

std::string resolve_output_dir(const std::string& output_dir) {
  fs::path p(output_dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("ACCMM_OUT_ROOT"); root != nullptr && *root != '\0') {
      p = fs::path(root) / p;
    }
  }
  return p.string();
}

TheoryReport check_config(const RunConfig& cfg) {
  const Problem prob = build_problem(cfg);
  const RunConfig r = resolve_smoothing(cfg, prob);
  TheoryReport rep =
      check_theory_conditions(r.hp, prob.constants, algorithm_from_name(r.algorithm));
  if (prob.lf_estimated.has_value()) {
    rep.notes.push_back("L_f = " + format_real(*prob.lf_estimated) +
                        " estimated by gradient probing (1000 pairs); not exact");
  }
  if (cfg.problem == "poisoning") {
    rep.notes.push_back("tau not verifiable for this problem; tau rows are UNKNOWN");
  }
  return rep;
}

int run_experiment(const RunConfig& cfg_in, std::ostream& diag) {
  try {
    const Problem prob = build_problem(cfg_in);
    const RunConfig cfg = resolve_smoothing(cfg_in, prob);
    const std::string kind = metric_kind(cfg, prob);
    const Algorithm algo = algorithm_from_name(cfg.algorithm);

    const std::string outdir = resolve_output_dir(cfg.output_dir);
    fs::create_directories(outdir);

    write_text((fs::path(outdir) / "resolved_config.txt").string(), render_config(cfg));

    TheoryReport rep = check_theory_conditions(cfg.hp, prob.constants, algo);
    if (prob.lf_estimated.has_value()) {
      rep.notes.push_back("L_f = " + format_real(*prob.lf_estimated) +
                          " estimated by gradient probing (1000 pairs); not exact");
    }
    if (cfg.problem == "poisoning") {
      rep.notes.push_back("tau not verifiable for this problem; tau rows are UNKNOWN");
    }
    write_text((fs::path(outdir) / "theory_check.txt").string(), rep.to_text());

    MetricConfig mcfg;
    mcfg.gap_gamma = cfg.gap_gamma;
    mcfg.gap_lambda = cfg.gap_lambda;

    double lf_for_h = 1.0;
    if (kind == "h") {
      if (prob.minimax && prob.minimax->smoothness_lf().has_value()) {
        lf_for_h = *prob.minimax->smoothness_lf();
      } else if (prob.lf_estimated.has_value()) {
        lf_for_h = *prob.lf_estimated;
      }
    }

    RunOptions opts;
    opts.metric_every = cfg.metric_every;
    if (prob.mini) {
      if (kind == "g" && prob.mini->has_true_grad()) {
        const MiniOracle* oracle = prob.mini.get();
        const ConstraintSet set = prob.set_x;
        const double gamma = cfg.hp.gamma;
        opts.mini_metric = [oracle, set, gamma](const MiniMetricCtx& ctx) {
          return metric_g(set, ctx.x, ctx.v, oracle->true_grad(ctx.x), gamma);
        };
      }
    } else {
      const MinimaxOracle* oracle = prob.minimax.get();
      const ConstraintSet sx = prob.set_x;
      const ConstraintSet sy = prob.set_y;
      const double gamma = cfg.hp.gamma;
      if (kind == "h") {
        opts.minimax_metric = [oracle, sx, sy, gamma, lf_for_h, mcfg](const MinimaxMetricCtx& ctx) {
          return metric_h(*oracle, sx, sy, ctx.x, ctx.y, ctx.v, gamma, lf_for_h, mcfg);
        };
      } else if (kind == "grad_g") {
        opts.minimax_metric = [oracle, sy, mcfg](const MinimaxMetricCtx& ctx) {
          return grad_g_norm(*oracle, ctx.x, sy, mcfg, &ctx.y);
        };
      } else if (kind == "gap") {
        opts.minimax_metric = [oracle, sx, sy, mcfg](const MinimaxMetricCtx& ctx) {
          return stationary_gap(*oracle, ctx.x, ctx.y, sx, sy, mcfg.gap_gamma, mcfg.gap_lambda);
        };
      }
    }

    std::vector<SeedOutcome> summary;
    for (std::uint64_t seed : cfg.seeds) {
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<TraceRow> trace;
      QueryCounter counter;
      switch (algo) {
        case Algorithm::AccZom: {
          auto res = acc_zom_run(*prob.mini, prob.set_x, cfg.hp, prob.x_init, seed, opts);
          trace = std::move(res.trace);
          counter = res.counter;
          break;
        }
        case Algorithm::ZoSgd: {
          if (prob.mini) {
            auto res = zo_sgd_run(*prob.mini, prob.set_x, cfg.hp, prob.x_init, seed, opts);
            trace = std::move(res.trace);
            counter = res.counter;
          } else {
            auto res = zo_sgda_run(*prob.minimax, prob.set_x, prob.set_y, cfg.hp, prob.x_init,
                                   prob.y_init, seed, opts);
            trace = std::move(res.trace);
            counter = res.counter;
          }
          break;
        }
        case Algorithm::AccZomda: {
          auto res = acc_zomda_run(*prob.minimax, prob.set_x, prob.set_y, cfg.hp, prob.x_init,
                                   prob.y_init, seed, opts);
          trace = std::move(res.trace);
          counter = res.counter;
          break;
        }
        case Algorithm::AccSemiZomda: {
          auto res = acc_semi_zomda_run(*prob.minimax, prob.set_x, prob.set_y, cfg.hp,
                                        prob.x_init, prob.y_init, seed, opts);
          trace = std::move(res.trace);
          counter = res.counter;
          break;
        }
        case Algorithm::AccMda: {
          auto res = acc_mda_run(*prob.minimax, prob.set_x, prob.set_y, cfg.hp, prob.x_init,
                                 prob.y_init, seed, opts);
          trace = std::move(res.trace);
          counter = res.counter;
          break;
        }
        case Algorithm::Sgda: {
          auto res = sgda_run(*prob.minimax, prob.set_x, prob.set_y, cfg.hp, prob.x_init,
                              prob.y_init, seed, opts);
          trace = std::move(res.trace);
          counter = res.counter;
          break;
        }
      }
      const auto t1 = std::chrono::steady_clock::now();
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

      const std::string trace_path =
          (fs::path(outdir) / (cfg.algorithm + "_seed" + std::to_string(seed) + ".csv")).string();
      write_trace_csv(trace_path, trace);
      summary.push_back(summarize(seed, trace, counter));
      diag << "seed " << seed << ": " << trace.size() << " iterations, fq="
           << counter.function_queries << ", gq=" << counter.gradient_queries << ", wall="
           << ms << " ms";
      if (counter.cancellation_warnings > 0) {
        diag << ", cancellation warnings=" << counter.cancellation_warnings;
      }
      diag << "\n";
    }
    write_summary((fs::path(outdir) / "summary.csv").string(), summary);
    return kExitOk;
  } catch (const config_error& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const contract_error& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const evaluation_error& e) {
    diag << "evaluation error: " << e.what() << "\n";
    return kExitEvaluation;
  }
}

int run_experiment(const std::string& config_path, std::ostream& diag) {
  try {
    const RunConfig cfg = parse_config_file(config_path);
    return run_experiment(cfg, diag);
  } catch (const config_error& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int aggregate_seeds(const std::string& trace_dir, std::ostream& diag) {
  try {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(trace_dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string name = entry.path().filename().string();
      if (name.find("_seed") != std::string::npos && name.size() > 4 &&
          name.substr(name.size() - 4) == ".csv") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw config_error("aggregate: no *_seed*.csv traces in " + trace_dir);

    // (fq, metric) checkpoints per trace.
    std::vector<std::vector<std::pair<std::uint64_t, double>>> curves;
    std::vector<std::uint64_t> grid;
    for (const std::string& f : files) {
      std::vector<std::pair<std::uint64_t, double>> curve;
      for (const TraceRow& r : parse_trace_csv(f)) {
        if (r.metric.has_value()) {
          curve.emplace_back(r.fq, *r.metric);
          grid.push_back(r.fq);
        }
      }
      if (!curve.empty()) curves.push_back(std::move(curve));
    }
    if (curves.empty()) throw config_error("aggregate: traces contain no metric checkpoints");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::ofstream out(fs::path(trace_dir) / "aggregate.csv", std::ios::binary);
    if (!out) throw config_error("aggregate: cannot write aggregate.csv");
    out << "fq,metric_mean,metric_stderr,n_seeds\n";
    for (const std::uint64_t q : grid) {
      std::vector<double> vals;
      for (const auto& curve : curves) {
        // step interpolation: last checkpoint at or before q
        const double* last = nullptr;
        for (const auto& [fq, m] : curve) {
          if (fq <= q) last = &m;
          else break;
        }
        if (last != nullptr) vals.push_back(*last);
      }
      if (vals.empty()) continue;
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      double se = 0.0;
      if (vals.size() > 1) {
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size() - 1);
        se = std::sqrt(var / static_cast<double>(vals.size()));
      }
      out << q << "," << format_real(mean) << "," << format_real(se) << "," << vals.size()
          << "\n";
    }
    diag << "aggregated " << curves.size() << " traces over " << grid.size()
         << " query checkpoints\n";
    return kExitOk;
  } catch (const config_error& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int gen_data(const RunConfig& cfg, std::ostream& diag) {
  try {
    if (cfg.problem != "poisoning") {
      throw config_error("gen-data: only the poisoning problem has a dataset");
    }
    RngStream rng(cfg.problem_seed, "data-gen");
    const PoisonDataset ds = gen_poisoning_data(cfg.n, cfg.d, rng, cfg.corruption_rate);
    const std::string outdir = resolve_output_dir(cfg.output_dir);
    fs::create_directories(outdir);
    const std::string path = (fs::path(outdir) / "dataset.csv").string();
    save_poisoning_csv(ds, path);
    diag << "wrote " << path << " (" << ds.n << " samples, " << ds.poisoned_ids.size()
         << " poisoned)\n";
    return kExitOk;
  } catch (const config_error& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const contract_error& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace accmm
