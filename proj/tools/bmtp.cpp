// Command-line front end: prove a single goal, benchmark a conjecture
// suite, or compare benchmark CSVs.
//
// Exit codes for `prove`: 0 proved, 1 failed/cutoff/timeout, 2 disproved,
// 3 usage or parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bmtp/bmtp.hpp"

namespace {

#ifndef BMTP_THEORIES_DIR
#define BMTP_THEORIES_DIR "theories"
#endif

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bmtp::Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CommonOpts {
  std::string preset = "BMF";
  std::string gen;
  std::string order;
  bool eq_criterion = false;
  bool no_eq_criterion = false;
  long long max_depth = -1;
  long long cex_checks = -1;
  long long cex_depth = -1;
  long long fuel = -1;
  long long timeout_s = -1;
  std::string seed_text;

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset,
                    "configuration preset: BM, BME, BMR, BMG, BMG', BMF")
        ->capture_default_str();
    cmd->add_option("--gen", gen,
                    "generalization algorithm: bm, aderhold, aderhold-noeq, "
                    "bm+apart, aderhold+apart");
    cmd->add_option("--order", order,
                    "comma-separated heuristic order (taut,cnf,setify,subst,"
                    "simp,equal,gen,irrel)");
    cmd->add_flag("--eq-criterion", eq_criterion,
                  "enable the equation criterion for proposals");
    cmd->add_flag("--no-eq-criterion", no_eq_criterion,
                  "disable the equation criterion");
    cmd->add_option("--max-depth", max_depth,
                    "variable-depth cutoff (0 disables)");
    cmd->add_option("--cex-checks", cex_checks,
                    "random instantiations per counterexample call");
    cmd->add_option("--cex-depth", cex_depth,
                    "maximum depth of random ground examples");
    cmd->add_option("--fuel", fuel, "rewrite step budget per normal form");
    cmd->add_option("--timeout", timeout_s,
                    "wall-clock timeout in seconds (0 disables)");
    cmd->add_option("--seed", seed_text,
                    "64-bit RNG seed (falls back to the BM_SEED env var)");
  }

  bmtp::Config build() const {
    bmtp::Config cfg = bmtp::preset_config(preset);
    if (!gen.empty()) {
      auto algo = bmtp::gen_algo_from_token(gen);
      if (!algo) throw bmtp::Error("unknown generalization algorithm: " + gen);
      cfg.gen_algo = *algo;
    }
    if (!order.empty()) {
      std::vector<std::string> tokens;
      std::stringstream ss(order);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) tokens.push_back(tok);
      }
      cfg.heuristic_order = tokens;
    }
    if (eq_criterion) cfg.eq_criterion = true;
    if (no_eq_criterion) cfg.eq_criterion = false;
    if (max_depth >= 0) cfg.max_depth = static_cast<std::size_t>(max_depth);
    if (cex_checks >= 0) cfg.cex_checks = static_cast<std::size_t>(cex_checks);
    if (cex_depth >= 0) cfg.cex_depth = static_cast<std::size_t>(cex_depth);
    if (fuel >= 0) cfg.fuel = static_cast<std::uint64_t>(fuel);
    if (timeout_s >= 0)
      cfg.timeout_ms = static_cast<std::uint64_t>(timeout_s) * 1000;
    if (!seed_text.empty()) {
      cfg.seed = std::strtoull(seed_text.c_str(), nullptr, 0);
    } else if (const char* env = std::getenv("BM_SEED")) {
      cfg.seed = std::strtoull(env, nullptr, 0);
    }
    return cfg;
  }
};

int run_prove(const std::string& theory_path, const std::string& goal_text,
              const CommonOpts& opts, const std::string& trace_mode,
              const std::string& trace_jsonl_path) {
  bmtp::Config cfg = opts.build();
  if (trace_mode == "silent")
    cfg.trace_level = bmtp::TraceLevel::silent;
  else if (trace_mode == "tree")
    cfg.trace_level = bmtp::TraceLevel::tree;
  else if (trace_mode == "normal")
    cfg.trace_level = bmtp::TraceLevel::normal;
  else
    throw bmtp::Error("unknown trace level: " + trace_mode);
  if (!trace_jsonl_path.empty() &&
      cfg.trace_level == bmtp::TraceLevel::silent)
    cfg.trace_level = bmtp::TraceLevel::normal;  // events must be recorded

  bmtp::ParsedTheory pt = bmtp::parse_theory(read_file(theory_path));
  bmtp::Term goal =
      bmtp::parse_term(goal_text, pt.theory, {}, bmtp::kBoolSort);

  bmtp::Prover prover(pt.theory, cfg);
  bmtp::ProofResult res = prover.prove(goal);

  if (trace_mode != "silent")
    std::cout << bmtp::render_trace(res.trace, cfg.trace_level);
  if (!trace_jsonl_path.empty()) {
    std::ofstream out(trace_jsonl_path, std::ios::binary);
    if (!out)
      throw bmtp::Error("cannot write trace file: " + trace_jsonl_path);
    out << bmtp::render_trace_jsonl(res.trace);
  }
  std::cerr << "result=" << bmtp::status_name(res.status)
            << " steps=" << res.metrics.steps
            << " inductions=" << res.metrics.inductions
            << " generalizations=" << res.metrics.generalizations
            << " overgeneralizations=" << res.metrics.overgeneralizations
            << " time_ms=" << static_cast<long long>(res.metrics.wall_time_ms)
            << "\n";
  switch (res.status) {
    case bmtp::ProofResult::Status::Proved: return 0;
    case bmtp::ProofResult::Status::Disproved: return 2;
    default: return 1;
  }
}

int run_bench(const std::string& theory_path, const std::string& suite_path,
              const CommonOpts& opts, const std::string& out_path,
              std::size_t jobs) {
  bmtp::Config cfg = opts.build();
  bmtp::ParsedTheory base = bmtp::parse_theory(read_file(theory_path));
  bmtp::ParsedTheory suite =
      bmtp::parse_theory(read_file(suite_path), base.theory);
  if (suite.conjectures.empty())
    std::cerr << "warning: suite has no conjectures\n";

  bmtp::BenchReport report =
      bmtp::run_suite(suite.theory, suite.conjectures, cfg, jobs);
  std::string csv = bmtp::bench_csv(report);
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw bmtp::Error("cannot write: " + out_path);
    out << csv;
  }
  std::cerr << "proved " << report.proved() << "/" << report.rows.size()
            << " (" << static_cast<int>(report.success_rate() + 0.5)
            << "%)\n";
  return 0;
}

int run_compare(const std::vector<std::string>& files) {
  std::vector<std::pair<std::string, std::vector<bmtp::CsvRow>>> runs;
  for (const std::string& f : files) {
    std::string label = f;
    std::size_t slash = label.find_last_of("/\\");
    if (slash != std::string::npos) label = label.substr(slash + 1);
    runs.push_back({label, bmtp::parse_bench_csv(read_file(f))});
  }
  std::cout << bmtp::compare_runs(runs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boyer-Moore-style inductive theorem prover"};
  app.require_subcommand(1);

  // prove
  auto* prove_cmd = app.add_subcommand("prove", "prove a single goal");
  std::string theory_path = std::string(BMTP_THEORIES_DIR) + "/peano.bmt";
  std::string goal_text;
  std::string trace_mode = "normal";
  std::string trace_jsonl_path;
  CommonOpts prove_opts;
  prove_cmd->add_option("--theory", theory_path, "theory file (.bmt)")
      ->capture_default_str();
  prove_cmd->add_option("--goal", goal_text, "goal term")->required();
  prove_cmd->add_option("--trace", trace_mode, "trace level: tree|normal|silent")
      ->capture_default_str();
  prove_cmd->add_option("--trace-jsonl", trace_jsonl_path,
                        "also write one structured trace event per line");
  prove_opts.attach(prove_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a conjecture suite");
  std::string bench_theory;
  std::string suite_path;
  std::string out_path;
  std::size_t jobs = 1;
  CommonOpts bench_opts;
  bench_cmd->add_option("--theory", bench_theory, "theory file (.bmt)")
      ->required();
  bench_cmd->add_option("--suite", suite_path, "suite file with conjectures")
      ->required();
  bench_cmd->add_option("--out", out_path, "output CSV path ('-' = stdout)");
  bench_cmd->add_option("--jobs", jobs, "parallel worker count")
      ->capture_default_str();
  bench_opts.attach(bench_cmd);

  // compare
  auto* compare_cmd =
      app.add_subcommand("compare", "diff statuses across result CSVs");
  std::vector<std::string> csv_files;
  compare_cmd->add_option("files", csv_files, "two or more result CSVs")
      ->required()
      ->expected(2, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*prove_cmd)
      return run_prove(theory_path, goal_text, prove_opts, trace_mode,
                       trace_jsonl_path);
    if (*bench_cmd)
      return run_bench(bench_theory, suite_path, bench_opts, out_path, jobs);
    if (*compare_cmd) return run_compare(csv_files);
  } catch (const bmtp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
