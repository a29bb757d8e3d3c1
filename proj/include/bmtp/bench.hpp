#pragma once

// Benchmark harness: runs every conjecture of a suite through the prover
// (optionally on a worker pool), collects per-conjecture metrics, and writes
// them as CSV. A small CSV reader and a status-diff report support comparing
// runs across configurations.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bmtp/engine.hpp"

namespace bmtp {

struct BenchRow {
  std::string name;
  Term goal;
  ProofResult::Status status = ProofResult::Status::Failed;
  std::string reason;
  Metrics metrics;
  struct GenRecord {
    Clause input;
    Clause output;
    Bindings recovery;
  };
  std::vector<GenRecord> gens;  // all generalizations applied during the run
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::size_t proved() const {
    std::size_t n = 0;
    for (const BenchRow& r : rows)
      if (r.status == ProofResult::Status::Proved) ++n;
    return n;
  }
  double success_rate() const {
    return rows.empty() ? 0.0
                        : 100.0 * static_cast<double>(proved()) /
                              static_cast<double>(rows.size());
  }
};

// Runs all conjectures with the given configuration. Traces are kept silent;
// generalization applications are still recorded for the recovery checks.
// Results come back in suite order regardless of the worker count.
inline BenchReport run_suite(
    const Theory& th,
    const std::vector<std::pair<std::string, Term>>& conjectures,
    const Config& base_cfg, std::size_t jobs = 1) {
  for (std::size_t i = 0; i < conjectures.size(); ++i)
    for (std::size_t j = i + 1; j < conjectures.size(); ++j)
      if (conjectures[i].first == conjectures[j].first)
        throw Error("duplicate conjecture name: " + conjectures[i].first);

  Config cfg = base_cfg;
  cfg.trace_level = TraceLevel::silent;

  BenchReport report;
  report.rows.resize(conjectures.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= conjectures.size()) return;
      BenchRow row;
      row.name = conjectures[i].first;
      row.goal = conjectures[i].second;
      try {
        Prover prover(th, cfg);
        ProofResult res = prover.prove(row.goal);
        row.status = res.status;
        row.reason = res.reason;
        row.metrics = res.metrics;
        for (const TraceEvent& e : res.trace.events)
          if (e.kind == TraceEvent::Kind::Applied && !e.recovery.empty() &&
              !e.outputs.empty())
            row.gens.push_back({e.clause, e.outputs[0], e.recovery});
      } catch (const Error& err) {
        row.status = ProofResult::Status::Failed;
        row.reason = std::string("error: ") + err.what();
      }
      report.rows[i] = std::move(row);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return report;
}

// ---------------------------------------------------------------------------
// CSV.

namespace bench_detail {

inline std::string csv_quote(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace bench_detail

inline const char* kBenchCsvHeader =
    "name,result,time_ms,steps,inductions,generalizations,"
    "overgeneralizations,failure_reason";

inline std::string bench_csv(const BenchReport& report) {
  std::ostringstream os;
  os << kBenchCsvHeader << "\n";
  for (const BenchRow& r : report.rows) {
    os << bench_detail::csv_quote(r.name) << "," << status_name(r.status)
       << "," << static_cast<std::uint64_t>(std::llround(r.metrics.wall_time_ms))
       << "," << r.metrics.steps << "," << r.metrics.inductions << ","
       << r.metrics.generalizations << "," << r.metrics.overgeneralizations
       << "," << bench_detail::csv_quote(r.reason) << "\n";
  }
  os << "success_rate," << report.proved() << "/" << report.rows.size() << ",";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", report.success_rate());
  os << buf << "\n";
  return os.str();
}

struct CsvRow {
  std::string name;
  std::string result;
  std::uint64_t time_ms = 0;
  std::size_t steps = 0;
  std::size_t inductions = 0;
  std::size_t generalizations = 0;
  std::size_t overgeneralizations = 0;
  std::string failure_reason;
};

inline std::vector<CsvRow> parse_bench_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == kBenchCsvHeader) continue;
      throw Error("unrecognized CSV header: " + line);
    }
    std::vector<std::string> f = bench_detail::split_csv_line(line);
    if (!f.empty() && f[0] == "success_rate") continue;
    if (f.size() != 8)
      throw Error("malformed CSV row (8 fields expected): " + line);
    CsvRow r;
    r.name = f[0];
    r.result = f[1];
    r.time_ms = std::strtoull(f[2].c_str(), nullptr, 10);
    r.steps = std::strtoull(f[3].c_str(), nullptr, 10);
    r.inductions = std::strtoull(f[4].c_str(), nullptr, 10);
    r.generalizations = std::strtoull(f[5].c_str(), nullptr, 10);
    r.overgeneralizations = std::strtoull(f[6].c_str(), nullptr, 10);
    r.failure_reason = f[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

// Status-difference report across two or more labelled CSV runs. Rows are
// aligned by conjecture name (order taken from the first run); only rows
// whose result differs somewhere are listed. Identical runs produce an
// empty report.
inline std::string compare_runs(
    const std::vector<std::pair<std::string, std::vector<CsvRow>>>& runs) {
  if (runs.size() < 2) throw Error("compare needs at least two result files");
  std::ostringstream os;
  std::vector<std::string> names;
  for (const CsvRow& r : runs[0].second) names.push_back(r.name);
  for (std::size_t k = 1; k < runs.size(); ++k)
    for (const CsvRow& r : runs[k].second) {
      bool seen = false;
      for (const std::string& n : names)
        if (n == r.name) seen = true;
      if (!seen) names.push_back(r.name);
    }
  auto lookup = [](const std::vector<CsvRow>& rows,
                   const std::string& name) -> const CsvRow* {
    for (const CsvRow& r : rows)
      if (r.name == name) return &r;
    return nullptr;
  };
  std::size_t flips = 0;
  for (const std::string& name : names) {
    std::string first_result;
    bool differs = false, missing = false;
    for (const auto& [label, rows] : runs) {
      const CsvRow* r = lookup(rows, name);
      if (!r) {
        missing = true;
        continue;
      }
      if (first_result.empty())
        first_result = r->result;
      else if (r->result != first_result)
        differs = true;
    }
    if (!differs && !missing) continue;
    ++flips;
    os << name << ":";
    for (const auto& [label, rows] : runs) {
      const CsvRow* r = lookup(rows, name);
      os << "  " << label << "=" << (r ? r->result : "(absent)");
    }
    os << "\n";
  }
  if (flips > 0) os << flips << " difference" << (flips == 1 ? "" : "s")
                    << "\n";
  return os.str();
}

}  // namespace bmtp
