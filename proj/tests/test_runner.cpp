#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "accmm/poisoning.hpp"
#include "accmm/runner.hpp"
#include "accmm/trace.hpp"
#include "doctest.h"

using namespace accmm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config: strict parsing") {
  CHECK_THROWS_AS(parse_config_text("problem = poisoning\nwhatever = 3\nalgorithm = acc_zomda\n"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text("problem = poisoning\nproblem = poisoning\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("problem poisoning\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("problem = nosuch\nalgorithm = acc_zom\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("problem = poisoning\nalgorithm = acc_zom\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("problem = quadratic_mini\nalgorithm = sgda\n"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text("problem = poisoning\nalgorithm = acc_zomda\nhp.T = x\n"),
                  config_error);
}

TEST_CASE("config: poisoning defaults reproduce the published settings") {
  const RunConfig cfg = parse_config_text("problem = poisoning\nalgorithm = acc_zomda\n");
  CHECK(cfg.epsilon == 2.0);
  CHECK(cfg.lambda_reg == 0.001);
  CHECK(cfg.corruption_rate == 0.15);
  CHECK(cfg.hp.gamma == 0.2);
  CHECK(cfg.hp.lambda == 0.08);
  CHECK(cfg.hp.k == 1.0);
  CHECK(cfg.hp.m == 3.0);
  CHECK(cfg.hp.c1 == 3.0);
  CHECK(cfg.hp.c2 == 3.0);
  CHECK(cfg.hp.b == 10);
  CHECK(cfg.n == 1000);
  CHECK(cfg.d == 100);
}

TEST_CASE("config: comments, values, and the render echo") {
  const RunConfig cfg = parse_config_text(
      "# comment line\n"
      "problem = quadratic_saddle   # trailing comment\n"
      "problem.dim_x = 4\n"
      "problem.dim_y = 3\n"
      "algorithm = acc_mda\n"
      "hp.gamma = 0.05\n"
      "hp.T = 42\n"
      "seeds = 5, 6\n"
      "output_dir = out/e1\n");
  CHECK(cfg.dim_x == 4);
  CHECK(cfg.dim_y == 3);
  CHECK(cfg.hp.gamma == 0.05);
  CHECK(cfg.hp.T == 42);
  REQUIRE(cfg.seeds.size() == 2);
  CHECK(cfg.seeds[0] == 5);
  CHECK(cfg.seeds[1] == 6);

  // the echo parses back to the same configuration
  const std::string echo = render_config(cfg);
  const RunConfig back = parse_config_text(echo);
  CHECK(render_config(back) == echo);
  CHECK(back.hp.T == 42);
  CHECK(back.algorithm == "acc_mda");
}

TEST_CASE("run_experiment: T=1 acc_zom trace has one row with fq=6") {
  const fs::path dir = fresh_dir("accmm_run_t1");
  RunConfig cfg = parse_config_text(
      "problem = quadratic_mini\n"
      "problem.dim = 2\n"
      "algorithm = acc_zom\n"
      "hp.T = 1\n"
      "hp.m = 27\n"
      "seeds = 7\n");
  cfg.output_dir = (dir / "t1").string();
  std::ostringstream diag;
  REQUIRE(run_experiment(cfg, diag) == kExitOk);
  const auto rows = parse_trace_csv((fs::path(cfg.output_dir) / "acc_zom_seed7.csv").string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].iter == 1);
  CHECK(rows[0].fq == 6);
  CHECK(rows[0].gq == 0);
  fs::remove_all(dir);
}

TEST_CASE("run_experiment: reruns are byte-identical and artifacts complete") {
  const fs::path dir = fresh_dir("accmm_run_repro");
  RunConfig cfg = parse_config_text(
      "problem = poisoning\n"
      "problem.n = 40\n"
      "problem.d = 4\n"
      "algorithm = acc_zomda\n"
      "hp.T = 25\n"
      "seeds = 7\n"
      "metric_every = 5\n");
  cfg.output_dir = (dir / "run").string();
  std::ostringstream diag;
  REQUIRE(run_experiment(cfg, diag) == kExitOk);

  const fs::path out(cfg.output_dir);
  for (const char* f :
       {"acc_zomda_seed7.csv", "summary.csv", "theory_check.txt", "resolved_config.txt"}) {
    CHECK(fs::exists(out / f));
  }
  const std::string first_trace = slurp(out / "acc_zomda_seed7.csv");
  const std::string first_summary = slurp(out / "summary.csv");
  CHECK(first_trace.substr(0, std::string(kTraceHeader).size()) == kTraceHeader);

  // the resolved echo round-trips and pins the smoothing radii
  const RunConfig echoed = parse_config_text(slurp(out / "resolved_config.txt"));
  CHECK(echoed.hp.smoothing.mu1.has_value());
  CHECK(echoed.hp.smoothing.mu2.has_value());

  fs::remove_all(out);
  REQUIRE(run_experiment(cfg, diag) == kExitOk);
  CHECK(slurp(out / "acc_zomda_seed7.csv") == first_trace);
  CHECK(slurp(out / "summary.csv") == first_summary);
  fs::remove_all(dir);
}

TEST_CASE("run_experiment: trace CSV round-trips through the parser") {
  const fs::path dir = fresh_dir("accmm_run_roundtrip");
  RunConfig cfg = parse_config_text(
      "problem = quadratic_saddle\n"
      "algorithm = acc_mda\n"
      "hp.T = 12\n"
      "hp.m = 27\n"
      "seeds = 3\n"
      "set_y.kind = l2\n"
      "set_y.radius = 2\n");
  cfg.output_dir = (dir / "run").string();
  std::ostringstream diag;
  REQUIRE(run_experiment(cfg, diag) == kExitOk);
  const fs::path trace = fs::path(cfg.output_dir) / "acc_mda_seed3.csv";
  const auto rows = parse_trace_csv(trace.string());
  REQUIRE(rows.size() == 12);
  // strictly increasing iterations, non-decreasing query counts
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].iter == rows[i - 1].iter + 1);
    CHECK(rows[i].gq >= rows[i - 1].gq);
    CHECK(rows[i].fq >= rows[i - 1].fq);
  }
  // writing the parsed rows reproduces the file byte for byte
  CHECK(trace_to_csv(rows) == slurp(trace));
  fs::remove_all(dir);
}

TEST_CASE("run_experiment: bad config path exits 2") {
  std::ostringstream diag;
  CHECK(run_experiment(std::string("/nonexistent/accmm.cfg"), diag) == kExitConfig);
  RunConfig cfg;  // problem/algorithm missing
  CHECK(run_experiment(cfg, diag) == kExitConfig);
}

TEST_CASE("run_experiment: oracle failure exits 3 with iteration context") {
  // dataset import with a feature that overflows exp() into NaN territory is
  // hard to fabricate; instead drive the evaluation error through a config
  // whose init is pushed outside the finite range by a huge curvature
  const fs::path dir = fresh_dir("accmm_run_eval");
  RunConfig cfg = parse_config_text(
      "problem = quadratic_mini\n"
      "problem.dim = 2\n"
      "problem.curvature = 1e300\n"
      "algorithm = acc_zom\n"
      "hp.gamma = 1e300\n"
      "hp.T = 50\n"
      "hp.m = 27\n"
      "metric = none\n"
      "seeds = 1\n");
  cfg.output_dir = (dir / "run").string();
  std::ostringstream diag;
  CHECK(run_experiment(cfg, diag) == kExitEvaluation);
  CHECK(diag.str().find("iteration") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("aggregate_seeds: single-seed and two-constant-trace arithmetic") {
  const fs::path dir = fresh_dir("accmm_agg");
  // two synthetic traces with constant metrics 1 and 3 on the same grid
  std::vector<TraceRow> t1, t2;
  for (int i = 1; i <= 3; ++i) {
    TraceRow r;
    r.iter = i;
    r.fq = static_cast<std::uint64_t>(10 * i);
    r.eta = 0.5;
    r.metric = 1.0;
    t1.push_back(r);
    r.metric = 3.0;
    t2.push_back(r);
  }
  write_trace_csv((dir / "algo_seed1.csv").string(), t1);
  std::ostringstream diag;
  REQUIRE(aggregate_seeds(dir.string(), diag) == kExitOk);
  {
    const std::string agg = slurp(dir / "aggregate.csv");
    CHECK(agg.find("fq,metric_mean,metric_stderr,n_seeds") == 0);
    CHECK(agg.find("10,1,0,1") != std::string::npos);  // single seed: stderr 0
  }

  write_trace_csv((dir / "algo_seed2.csv").string(), t2);
  REQUIRE(aggregate_seeds(dir.string(), diag) == kExitOk);
  {
    const std::string agg = slurp(dir / "aggregate.csv");
    CHECK(agg.find("10,2,1,2") != std::string::npos);  // mean 2, stderr 1
    CHECK(agg.find("30,2,1,2") != std::string::npos);
  }

  // schema mismatch is a config error
  std::ofstream bad(dir / "broken_seed3.csv");
  bad << "iter,fq,other\n1,2,3\n";
  bad.close();
  CHECK(aggregate_seeds(dir.string(), diag) == kExitConfig);
  fs::remove_all(dir);
}

TEST_CASE("gen-data export and import agree") {
  const fs::path dir = fresh_dir("accmm_gendata");
  RunConfig cfg = parse_config_text(
      "problem = poisoning\n"
      "problem.n = 30\n"
      "problem.d = 3\n"
      "problem.seed = 99\n"
      "algorithm = acc_zomda\n"
      "hp.T = 5\n"
      "seeds = 1\n");
  cfg.output_dir = dir.string();
  std::ostringstream diag;
  REQUIRE(gen_data(cfg, diag) == kExitOk);
  const fs::path csv = dir / "dataset.csv";
  REQUIRE(fs::exists(csv));

  // a run importing the exported dataset equals a run generating it
  RunConfig gen_cfg = cfg;
  gen_cfg.hp.T = 10;
  gen_cfg.output_dir = (dir / "gen").string();
  RunConfig import_cfg = gen_cfg;
  import_cfg.data_csv = csv.string();
  import_cfg.output_dir = (dir / "imp").string();
  REQUIRE(run_experiment(gen_cfg, diag) == kExitOk);
  REQUIRE(run_experiment(import_cfg, diag) == kExitOk);
  CHECK(slurp(dir / "gen" / "acc_zomda_seed1.csv") == slurp(dir / "imp" / "acc_zomda_seed1.csv"));
  fs::remove_all(dir);
}

TEST_CASE("output root override applies to relative paths") {
  CHECK(resolve_output_dir("/abs/path") == "/abs/path");
  setenv("ACCMM_OUT_ROOT", "/tmp/accmm_root_test", 1);
  CHECK(resolve_output_dir("rel") == "/tmp/accmm_root_test/rel");
  CHECK(resolve_output_dir("/abs/path") == "/abs/path");
  unsetenv("ACCMM_OUT_ROOT");
  CHECK(resolve_output_dir("rel") == "rel");
}
