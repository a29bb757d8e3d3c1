#pragma once

// The waterfall orchestrator. A goal clause is poured over the configured
// sequence of heuristics; proved clauses evaporate, replaced clauses are
// poured again, and survivors pool for structural induction. Induction
// outputs are poured over fresh waterfalls, recursively, until everything is
// proved or the attempt aborts (disproof, depth cutoff, dead end, timeout).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bmtp/disprove.hpp"
#include "bmtp/generalize.hpp"
#include "bmtp/heuristics.hpp"
#include "bmtp/rewrite.hpp"
#include "bmtp/syntax.hpp"
#include "bmtp/term.hpp"
#include "bmtp/theory.hpp"

namespace bmtp {

// ---------------------------------------------------------------------------
// Configuration and presets.

enum class TraceLevel { silent, normal, tree };

inline std::vector<std::string> full_heuristic_order() {
  return {"taut", "cnf", "setify", "subst", "simp", "equal", "gen", "irrel"};
}

// The original six-heuristic line-up: no tautology prover, no setify.
inline std::vector<std::string> basic_heuristic_order() {
  return {"cnf", "subst", "simp", "equal", "gen", "irrel"};
}

struct Config {
  std::vector<std::string> heuristic_order = full_heuristic_order();
  Engine simplify_engine = Engine::full;
  GenAlgo gen_algo = GenAlgo::bm_apart;
  bool eq_criterion = false;
  bool warehouse = true;          // skip-map loop filter
  std::size_t max_depth = 12;     // deepest variable occurrence; 0 disables
  std::size_t cex_checks = 5;
  std::size_t cex_depth = 8;
  std::uint64_t seed = 0;
  std::uint64_t fuel = kDefaultFuel;
  std::uint64_t timeout_ms = 120000;  // 0 disables
  TraceLevel trace_level = TraceLevel::silent;
  std::string preset = "BMF";
};

inline const std::vector<std::string>& known_presets() {
  static const std::vector<std::string> ps = {"BM",   "BME",  "BMR",
                                              "BMG",  "BMG'", "BMF"};
  return ps;
}

// Expands a preset name into a Config. "BMGp" is accepted as a
// shell-friendly alias for "BMG'".
inline Config preset_config(const std::string& name) {
  Config c;
  c.preset = name;
  if (name == "BM") {
    c.heuristic_order = basic_heuristic_order();
    c.simplify_engine = Engine::bm;
    c.gen_algo = GenAlgo::bm;
    c.warehouse = false;
    c.max_depth = 0;
  } else if (name == "BME") {
    c.simplify_engine = Engine::bm;
    c.gen_algo = GenAlgo::bm;
  } else if (name == "BMR") {
    c.gen_algo = GenAlgo::bm;
  } else if (name == "BMG") {
    c.gen_algo = GenAlgo::aderhold_apart;
    c.eq_criterion = true;
  } else if (name == "BMG'" || name == "BMGp") {
    c.preset = "BMG'";
    c.gen_algo = GenAlgo::aderhold_apart;
    c.eq_criterion = false;
  } else if (name == "BMF") {
    c.gen_algo = GenAlgo::bm_apart;
  } else {
    throw Error("unknown preset: " + name +
                " (expected BM, BME, BMR, BMG, BMG' or BMF)");
  }
  return c;
}

inline bool is_heuristic_token(const std::string& s) {
  for (const std::string& t : full_heuristic_order())
    if (t == s) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Metrics and trace.

struct Metrics {
  std::size_t steps = 0;  // waterfall calls plus inductions
  std::size_t inductions = 0;
  std::size_t generalizations = 0;
  std::size_t overgeneralizations = 0;  // counterexample vetoes
  double wall_time_ms = 0.0;
};

struct TraceEvent {
  enum class Kind {
    Poured,
    Applied,
    Proven,
    InductionOn,
    LoopSkipped,
    GenVetoed,
    DepthCutoff,
    Disproved,
    Failed,
    Done
  };
  Kind kind = Kind::Poured;
  std::size_t waterfall_id = 0;
  std::size_t depth = 0;   // induction nesting level
  std::size_t chain = 0;   // re-pour distance within one waterfall
  std::string heuristic;   // token, for Applied/LoopSkipped
  std::string display;     // renderer label for the heuristic
  std::string outcome;     // proved | replaced | disproved
  Clause clause;
  std::vector<Clause> outputs;  // Replaced results
  std::string var;              // induction variable
  Bindings recovery;            // fresh variable -> abstracted term
  std::string note;
};

struct ProofTrace {
  std::vector<TraceEvent> events;
};

struct ProofResult {
  enum class Status { Proved, Disproved, Failed, DepthCutoff, Timeout };
  Status status = Status::Failed;
  std::string reason;
  Metrics metrics;
  ProofTrace trace;
  Term goal;
};

inline const char* status_name(ProofResult::Status s) {
  switch (s) {
    case ProofResult::Status::Proved: return "proved";
    case ProofResult::Status::Disproved: return "disproved";
    case ProofResult::Status::Failed: return "failed";
    case ProofResult::Status::DepthCutoff: return "cutoff";
    case ProofResult::Status::Timeout: return "timeout";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Structural induction.

struct InductionScheme {
  std::string var;
  std::vector<Clause> bases;
  std::vector<Clause> steps;
};

namespace engine_detail {

inline Term bottom_term(const Theory& th, const std::string& name) {
  const SymbolInfo* si = th.symbol(name);
  return Term::app(name, si ? si->result : "", {});
}

}  // namespace engine_detail

// Chooses the induction variable (prefer variables at recursive argument
// positions, then by occurrence count, then leftmost) and instantiates the
// shell's structural scheme. Base cases come before step cases.
inline std::optional<InductionScheme> induct(const Clause& c,
                                             const Theory& th) {
  std::vector<VarInfo> vars = free_vars(c);
  const VarInfo* best = nullptr;
  std::size_t best_rec = 0;
  for (const VarInfo& v : vars) {
    if (!th.is_shell_sort(v.sort)) continue;
    std::size_t rec = th.rec_position_occurrences(c, v.name);
    if (!best || (rec > 0 && best_rec == 0) ||
        ((rec > 0) == (best_rec > 0) && rec > best_rec)) {
      best = &v;
      best_rec = rec;
    }
  }
  if (!best) return std::nullopt;

  const Shell* sh = th.shell(best->sort);
  InductionScheme scheme;
  scheme.var = best->name;
  Term goal_term = clause_term(c);

  for (const std::string& b : sh->bottoms) {
    Bindings bind{{best->name, engine_detail::bottom_term(th, b)}};
    scheme.bases.push_back(
        Clause({apply_bindings(goal_term, bind)}, false, "induction-base"));
  }
  std::vector<VarInfo> taken = vars;
  for (const Constructor& con : sh->constructors) {
    TermList args;
    std::vector<Term> rec_args;
    for (const Sort& p : con.params) {
      std::string name = fresh_name(sort_base_name(p), taken);
      taken.push_back({name, p});
      Term v = Term::var(name, p);
      args.push_back(v);
      if (p == sh->name) rec_args.push_back(v);
    }
    Term applied = Term::app(con.name, sh->name, std::move(args));
    Term concl = apply_bindings(goal_term, {{best->name, applied}});
    if (rec_args.empty()) {
      scheme.bases.push_back(Clause({concl}, false, "induction-base"));
      continue;
    }
    Term hyp = apply_bindings(goal_term, {{best->name, rec_args[0]}});
    for (std::size_t i = 1; i < rec_args.size(); ++i)
      hyp = mk_and(hyp,
                   apply_bindings(goal_term, {{best->name, rec_args[i]}}));
    scheme.steps.push_back(
        Clause({mk_imp(hyp, concl)}, true, "induction-step"));
  }
  return scheme;
}

// ---------------------------------------------------------------------------
// The prover.

class Prover {
 public:
  Prover(const Theory& th, Config cfg) : th_(th), cfg_(std::move(cfg)) {
    for (const std::string& h : cfg_.heuristic_order)
      if (!is_heuristic_token(h))
        throw Error("unknown heuristic in order: " + h);
    dp_.theory = &th_;
    dp_.checks_per_call = cfg_.cex_checks;
    dp_.max_example_depth = cfg_.cex_depth;
    dp_.seed = cfg_.seed;
    dp_.fuel = cfg_.fuel;
  }

  ProofResult prove(const Term& goal) {
    if (!goal.valid() || goal.sort() != kBoolSort)
      throw Error("goal must be a boolean term");
    th_.check_term(goal);
    return prove(Clause({goal}));
  }

  ProofResult prove(const Clause& goal) {
    ProofResult res;
    res.goal = clause_term(goal);
    metrics_ = Metrics{};
    trace_.events.clear();
    trace_truncated_ = false;
    genmem_.keys.clear();
    next_waterfall_id_ = 0;
    auto start = std::chrono::steady_clock::now();
    deadline_ = start + std::chrono::milliseconds(
                            cfg_.timeout_ms ? cfg_.timeout_ms : UINT64_C(1));
    has_deadline_ = cfg_.timeout_ms != 0;
    try {
      prove_rec(goal, {}, 0);
      res.status = ProofResult::Status::Proved;
    } catch (const AbortSignal& sig) {
      res.status = sig.status;
      res.reason = sig.reason;
    }
    auto end = std::chrono::steady_clock::now();
    metrics_.wall_time_ms =
        std::chrono::duration<double, std::milli>(end - start).count();
    res.metrics = metrics_;
    TraceEvent done;
    done.kind = TraceEvent::Kind::Done;
    done.clause = goal;
    done.outcome = status_name(res.status);
    done.note = res.reason;
    record(std::move(done));
    res.trace = trace_;
    return res;
  }

  const Config& config() const { return cfg_; }

 private:
  struct AbortSignal {
    ProofResult::Status status;
    std::string reason;
  };

  struct Warehouse {
    // clause fingerprint -> heuristics already applied in this waterfall
    std::map<std::string, std::set<std::string>> applied;
  };

  void check_deadline() {
    if (has_deadline_ && std::chrono::steady_clock::now() >= deadline_)
      throw AbortSignal{ProofResult::Status::Timeout, "wall-clock timeout"};
  }

  // In silent mode only generalization applications are kept (their recovery
  // maps feed the instantiation-recovery checks); long-running attempts are
  // also protected against unbounded trace growth.
  void record(TraceEvent ev) {
    bool essential = ev.kind == TraceEvent::Kind::Done ||
                     (ev.kind == TraceEvent::Kind::Applied &&
                      !ev.recovery.empty());
    if (cfg_.trace_level == TraceLevel::silent && !essential) return;
    if (trace_.events.size() >= kTraceEventCap) {
      if (!trace_truncated_) {
        trace_truncated_ = true;
        TraceEvent note;
        note.kind = TraceEvent::Kind::Failed;
        note.note = "trace truncated";
        trace_.events.push_back(note);
      }
      if (!essential) return;
    }
    trace_.events.push_back(std::move(ev));
  }

  std::string display_name(const std::string& token,
                           std::size_t n_outputs) const {
    if (token == "taut") return "Tautology Heuristic";
    if (token == "cnf") {
      std::ostringstream os;
      os << "Clausal Form Heuristic (" << n_outputs << " clause"
         << (n_outputs == 1 ? "" : "s") << ")";
      return os.str();
    }
    if (token == "setify") return "Setify Heuristic";
    if (token == "subst") return "Substitution Heuristic";
    if (token == "simp")
      return cfg_.simplify_engine == Engine::full ? "HL Simplify Heuristic"
                                                  : "Simplify Heuristic";
    if (token == "equal") return "Equality Heuristic";
    if (token == "gen") return "Generalization Heuristic";
    if (token == "irrel") return "Irrelevance Heuristic";
    return token;
  }

  HeuristicOutcome apply_heuristic(const std::string& token, const Clause& c) {
    pending_recovery_.clear();
    if (token == "taut") return tautology(c);
    if (token == "cnf") return clausal_form(c);
    if (token == "setify") return setify_heuristic(c);
    if (token == "subst") return substitution(c);
    if (token == "simp")
      return simplify_heuristic(c, th_, cfg_.simplify_engine, cfg_.fuel);
    if (token == "equal") return equality(c, th_);
    if (token == "irrel") return irrelevance(c, th_);
    if (token == "gen") {
      GenOutcome g = run_generalize(c, th_, cfg_.gen_algo, cfg_.eq_criterion,
                                    genmem_, dp_);
      metrics_.overgeneralizations += g.vetoes;
      if (g.vetoes) {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::GenVetoed;
        ev.clause = c;
        ev.note = std::to_string(g.vetoes);
        record(std::move(ev));
      }
      if (!g.clause) return HeuristicOutcome::failed();
      ++metrics_.generalizations;
      pending_recovery_ = g.recovery;
      return HeuristicOutcome::replaced({*g.clause});
    }
    throw Error("unknown heuristic: " + token);
  }

  // Pours every clause of `work` (in order) over one waterfall instance and
  // returns the pool of survivors. Replaced clauses are re-poured over the
  // same instance, sharing its warehouse.
  std::vector<Clause> waterfall_run(std::vector<Clause> work,
                                    std::size_t depth) {
    Warehouse wh;
    std::size_t wf_id = next_waterfall_id_++;
    std::vector<Clause> pool;
    // (clause, re-pour distance), processed depth-first
    std::vector<std::pair<Clause, std::size_t>> stack;
    for (std::size_t i = work.size(); i > 0; --i) stack.push_back({work[i - 1], 0});
    while (!stack.empty()) {
      auto [c, chain] = stack.back();
      stack.pop_back();
      check_deadline();
      if (cfg_.max_depth && max_var_depth(c) > cfg_.max_depth) {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::DepthCutoff;
        ev.waterfall_id = wf_id;
        ev.depth = depth;
        ev.clause = c;
        record(std::move(ev));
        throw AbortSignal{ProofResult::Status::DepthCutoff,
                          "variable depth exceeds " +
                              std::to_string(cfg_.max_depth)};
      }
      ++metrics_.steps;
      {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::Poured;
        ev.waterfall_id = wf_id;
        ev.depth = depth;
        ev.chain = chain;
        ev.clause = c;
        record(std::move(ev));
      }
      std::string key = alpha_key(c);
      bool settled = false;
      for (const std::string& token : cfg_.heuristic_order) {
        if (cfg_.warehouse && wh.applied.count(key) &&
            wh.applied[key].count(token)) {
          TraceEvent ev;
          ev.kind = TraceEvent::Kind::LoopSkipped;
          ev.waterfall_id = wf_id;
          ev.depth = depth;
          ev.chain = chain;
          ev.heuristic = token;
          ev.display = display_name(token, 0);
          ev.clause = c;
          record(std::move(ev));
          continue;
        }
        HeuristicOutcome out = apply_heuristic(token, c);
        if (out.kind == HeuristicOutcome::Kind::Failed) continue;

        TraceEvent ev;
        ev.kind = TraceEvent::Kind::Applied;
        ev.waterfall_id = wf_id;
        ev.depth = depth;
        ev.chain = chain;
        ev.heuristic = token;
        ev.display = display_name(token, out.clauses.size());
        ev.clause = c;
        ev.outputs = out.clauses;
        ev.recovery = pending_recovery_;
        ev.note = out.note;

        if (out.kind == HeuristicOutcome::Kind::Proved) {
          ev.outcome = "proved";
          record(std::move(ev));
          TraceEvent pr;
          pr.kind = TraceEvent::Kind::Proven;
          pr.waterfall_id = wf_id;
          pr.depth = depth;
          pr.chain = chain;
          pr.clause = c;
          record(std::move(pr));
          settled = true;
          break;
        }
        if (out.kind == HeuristicOutcome::Kind::Disproved) {
          ev.outcome = "disproved";
          record(std::move(ev));
          TraceEvent dis;
          dis.kind = TraceEvent::Kind::Disproved;
          dis.waterfall_id = wf_id;
          dis.depth = depth;
          dis.clause = c;
          dis.note = out.note;
          record(std::move(dis));
          throw AbortSignal{ProofResult::Status::Disproved, out.note};
        }
        // Replaced: remember the application, re-pour the outputs.
        ev.outcome = "replaced";
        record(std::move(ev));
        if (cfg_.warehouse) wh.applied[key].insert(token);
        for (std::size_t i = out.clauses.size(); i > 0; --i)
          stack.push_back({out.clauses[i - 1], chain + 1});
        settled = true;
        break;
      }
      if (!settled) pool.push_back(c);
    }
    return pool;
  }

  void prove_rec(const Clause& c, std::set<std::string> branch,
                 std::size_t depth) {
    if (depth > kMaxInductionNesting)
      throw AbortSignal{ProofResult::Status::Failed,
                        "induction nesting limit reached"};
    std::vector<Clause> pool = waterfall_run({c}, depth);
    for (const Clause& p : pool) {
      check_deadline();
      std::string key = alpha_key(p);
      if (branch.count(key)) {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::Failed;
        ev.depth = depth;
        ev.clause = p;
        ev.note = "induction already applied to this clause in this branch";
        record(std::move(ev));
        throw AbortSignal{ProofResult::Status::Failed,
                          "repeated induction in the same branch"};
      }
      std::optional<InductionScheme> scheme = induct(p, th_);
      if (!scheme) {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::Failed;
        ev.depth = depth;
        ev.clause = p;
        ev.note = "no variable admits structural induction";
        record(std::move(ev));
        throw AbortSignal{ProofResult::Status::Failed,
                          "no induction possible"};
      }
      ++metrics_.inductions;
      ++metrics_.steps;
      {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::InductionOn;
        ev.depth = depth;
        ev.clause = p;
        ev.var = scheme->var;
        record(std::move(ev));
      }
      std::set<std::string> branch2 = branch;
      branch2.insert(key);
      for (const Clause& b : scheme->bases) prove_rec(b, branch2, depth + 1);
      for (const Clause& s : scheme->steps) prove_rec(s, branch2, depth + 1);
    }
  }

  static constexpr std::size_t kMaxInductionNesting = 5000;
  static constexpr std::size_t kTraceEventCap = 1000000;

  const Theory& th_;
  Config cfg_;
  Disprover dp_;
  GenMemory genmem_;
  Metrics metrics_;
  ProofTrace trace_;
  Bindings pending_recovery_;
  std::chrono::steady_clock::time_point deadline_;
  bool has_deadline_ = false;
  bool trace_truncated_ = false;
  std::size_t next_waterfall_id_ = 0;
};

inline ProofResult prove(const Term& goal, const Theory& th,
                         const Config& cfg) {
  return Prover(th, cfg).prove(goal);
}

// ---------------------------------------------------------------------------
// Trace rendering.

namespace engine_detail {

inline bool visible_in_normal(const TraceEvent& e) {
  using K = TraceEvent::Kind;
  switch (e.kind) {
    case K::Applied:
    case K::Proven:
    case K::InductionOn:
    case K::DepthCutoff:
    case K::Disproved:
    case K::Failed:
    case K::Done:
      return true;
    default:
      return false;
  }
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

}  // namespace engine_detail

// Human-readable rendering. Normal level mirrors the classic layout: poured
// clauses one space in, "-> <Heuristic>" lines for successful applications,
// "Proven:|- ..." lines, "Doing induction on:" announcements, and a final
// status line. Tree level shows every event indented by induction depth and
// re-pour distance, including loop skips and silent pours.
inline std::string render_trace(const ProofTrace& t, TraceLevel level) {
  using K = TraceEvent::Kind;
  if (level == TraceLevel::silent) return "";
  std::ostringstream os;
  const auto& ev = t.events;
  bool first_line = true;
  auto blank_before_section = [&]() {
    if (!first_line) os << "\n";
  };

  if (level == TraceLevel::tree) {
    for (const TraceEvent& e : ev) {
      std::string indent(2 * e.depth + e.chain, ' ');
      switch (e.kind) {
        case K::Poured:
          os << indent << "+ " << print_clause(e.clause) << "\n";
          break;
        case K::Applied:
          os << indent << "  -> " << e.display << " [" << e.outcome << "]\n";
          break;
        case K::Proven:
          os << indent << "  Proven:|- " << print_clause(e.clause) << "\n";
          break;
        case K::InductionOn:
          os << indent << "Doing induction on:" << print_clause(e.clause)
             << "  (variable " << e.var << ")\n";
          break;
        case K::LoopSkipped:
          os << indent << "  (loop filter skips " << e.display << ")\n";
          break;
        case K::GenVetoed:
          os << indent << "  (counterexample veto x" << e.note << ")\n";
          break;
        case K::DepthCutoff:
          os << indent << "Depth cutoff:" << print_clause(e.clause) << "\n";
          break;
        case K::Disproved:
          os << indent << "Disproved: " << e.note << "\n";
          break;
        case K::Failed:
          os << indent << "Failed: " << e.note << "\n";
          break;
        case K::Done:
          if (e.outcome == std::string("proved"))
            os << "Theorem:|- " << print_clause(e.clause) << "\n";
          else
            os << "Result: " << e.outcome
               << (e.note.empty() ? "" : " (" + e.note + ")") << "\n";
          break;
      }
    }
    return os.str();
  }

  // Normal level. A poured clause is shown only when something visible
  // happens to it before the next pour.
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const TraceEvent& e = ev[i];
    switch (e.kind) {
      case K::Poured: {
        bool show = false;
        for (std::size_t j = i + 1; j < ev.size(); ++j) {
          if (ev[j].kind == K::Poured || ev[j].kind == K::InductionOn ||
              ev[j].kind == K::Done)
            break;
          if (engine_detail::visible_in_normal(ev[j])) {
            show = true;
            break;
          }
        }
        if (!show) break;
        if (e.chain == 0) blank_before_section();
        os << " " << print_clause(e.clause) << "\n";
        first_line = false;
        break;
      }
      case K::Applied:
        if (e.outcome == "proved" || e.outcome == "replaced" ||
            e.outcome == "disproved") {
          os << "-> " << e.display << "\n";
          first_line = false;
        }
        break;
      case K::Proven:
        os << "Proven:|- " << print_clause(e.clause) << "\n";
        first_line = false;
        break;
      case K::InductionOn:
        blank_before_section();
        os << "Doing induction on:" << print_clause(e.clause) << "\n";
        first_line = false;
        break;
      case K::DepthCutoff:
        blank_before_section();
        os << "Depth cutoff:" << print_clause(e.clause) << "\n";
        first_line = false;
        break;
      case K::Disproved:
        os << "Disproved: " << e.note << "\n";
        first_line = false;
        break;
      case K::Failed:
        blank_before_section();
        os << " " << print_clause(e.clause) << "\n";
        os << "Failed: " << e.note << "\n";
        first_line = false;
        break;
      case K::Done:
        blank_before_section();
        if (e.outcome == std::string("proved"))
          os << "Theorem:|- " << print_clause(e.clause) << "\n";
        else
          os << "Result: " << e.outcome
             << (e.note.empty() ? "" : " (" + e.note + ")") << "\n";
        first_line = false;
        break;
      default:
        break;
    }
  }
  return os.str();
}

// One structured record per line; schema documented in the README.
inline std::string render_trace_jsonl(const ProofTrace& t) {
  using K = TraceEvent::Kind;
  using engine_detail::json_escape;
  std::ostringstream os;
  for (const TraceEvent& e : t.events) {
    os << "{";
    auto field = [&](const char* k, const std::string& v, bool comma = true) {
      if (comma) os << ",";
      os << "\"" << k << "\":\"" << json_escape(v) << "\"";
    };
    auto num = [&](const char* k, std::size_t v) {
      os << ",\"" << k << "\":" << v;
    };
    switch (e.kind) {
      case K::Poured: field("event", "poured", false); break;
      case K::Applied: field("event", "applied", false); break;
      case K::Proven: field("event", "proven", false); break;
      case K::InductionOn: field("event", "induction", false); break;
      case K::LoopSkipped: field("event", "loop_skipped", false); break;
      case K::GenVetoed: field("event", "gen_vetoed", false); break;
      case K::DepthCutoff: field("event", "depth_cutoff", false); break;
      case K::Disproved: field("event", "disproved", false); break;
      case K::Failed: field("event", "failed", false); break;
      case K::Done: field("event", "done", false); break;
    }
    num("waterfall", e.waterfall_id);
    num("depth", e.depth);
    num("chain", e.chain);
    if (e.clause.literals.size() > 0) field("clause", print_clause(e.clause));
    if (!e.heuristic.empty()) field("heuristic", e.heuristic);
    if (!e.display.empty()) field("label", e.display);
    if (!e.outcome.empty()) field("outcome", e.outcome);
    if (!e.var.empty()) field("var", e.var);
    if (!e.note.empty()) field("note", e.note);
    if (!e.outputs.empty()) {
      os << ",\"outputs\":[";
      for (std::size_t i = 0; i < e.outputs.size(); ++i) {
        if (i) os << ",";
        os << "\"" << json_escape(print_clause(e.outputs[i])) << "\"";
      }
      os << "]";
    }
    if (!e.recovery.empty()) {
      os << ",\"recovery\":{";
      bool first = true;
      for (const auto& [k, v] : e.recovery) {
        if (!first) os << ",";
        first = false;
        os << "\"" << json_escape(k) << "\":\"" << json_escape(print_term(v))
           << "\"";
      }
      os << "}";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace bmtp
