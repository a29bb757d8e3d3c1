// Tests for the proof engine: preset expansion, structural induction,
// the waterfall loop with its loop filter and depth cutoff, metrics,
// and the trace renderers.
#include "oracle.hpp"
#include "test_support.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace bmtp;

namespace {

std::size_t count_kind(const ProofTrace& t, TraceEvent::Kind k) {
  std::size_t n = 0;
  for (const TraceEvent& e : t.events)
    if (e.kind == k) ++n;
  return n;
}

const Theory& pingpong_theory() {
  static const Theory th = parse_theory(R"(
shell num { bottom 0; con SUC(num) accessors (PRE); }
define F1(num): num { F1(0) = 0; F1(SUC(x)) = 0; }
define G1(num): num { G1(0) = 0; G1(SUC(x)) = 0; }
define P1(num): bool { P1(0) <=> T; P1(SUC(x)) <=> T; }
)").theory;
  return th;
}

const Theory& triv_theory() {
  static const Theory th = parse_theory(R"(
shell num { bottom 0; con SUC(num) accessors (PRE); }
define TRIV(num): bool { TRIV(0) <=> T; TRIV(SUC(x)) <=> TRIV(x); }
)").theory;
  return th;
}

}  // namespace

// ---------------------------------------------------------------------------
// Presets.

TEST_CASE("preset expansion matches the documented configurations") {
  Config bm = preset_config("BM");
  CHECK(bm.heuristic_order == basic_heuristic_order());
  CHECK(bm.simplify_engine == Engine::bm);
  CHECK(bm.gen_algo == GenAlgo::bm);
  CHECK_FALSE(bm.eq_criterion);
  CHECK_FALSE(bm.warehouse);
  CHECK(bm.max_depth == 0);
  CHECK(bm.preset == "BM");

  Config bme = preset_config("BME");
  CHECK(bme.heuristic_order == full_heuristic_order());
  CHECK(bme.simplify_engine == Engine::bm);
  CHECK(bme.gen_algo == GenAlgo::bm);
  CHECK(bme.warehouse);
  CHECK(bme.max_depth == 12);

  Config bmr = preset_config("BMR");
  CHECK(bmr.simplify_engine == Engine::full);
  CHECK(bmr.gen_algo == GenAlgo::bm);

  Config bmg = preset_config("BMG");
  CHECK(bmg.gen_algo == GenAlgo::aderhold_apart);
  CHECK(bmg.eq_criterion);

  Config bmgp = preset_config("BMG'");
  CHECK(bmgp.gen_algo == GenAlgo::aderhold_apart);
  CHECK_FALSE(bmgp.eq_criterion);

  Config bmf = preset_config("BMF");
  CHECK(bmf.gen_algo == GenAlgo::bm_apart);
  CHECK(bmf.heuristic_order == Config{}.heuristic_order);
  CHECK(bmf.simplify_engine == Config{}.simplify_engine);
}

TEST_CASE("preset alias and unknown preset handling") {
  Config alias = preset_config("BMGp");
  CHECK(alias.preset == "BMG'");
  CHECK(alias.gen_algo == GenAlgo::aderhold_apart);
  CHECK_FALSE(alias.eq_criterion);
  CHECK_THROWS_AS(preset_config("XYZ"), Error);
  CHECK(known_presets().size() == 6);
}

// ---------------------------------------------------------------------------
// Structural induction.

TEST_CASE("structural induction on the classic goal") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"SUC(m) = m + SUC(0)"});
  auto s = induct(c, th);
  REQUIRE(s.has_value());
  CHECK(s->var == "m");
  REQUIRE(s->bases.size() == 1);
  REQUIRE(s->steps.size() == 1);
  CHECK(print_clause(s->bases[0]) == "SUC(0) = 0 + SUC(0)");
  CHECK(s->bases[0].origin == "induction-base");
  CHECK_FALSE(s->bases[0].from_induction_step);
  CHECK(print_clause(s->steps[0]) ==
        "SUC(n) = n + SUC(0) ==> SUC(SUC(n)) = SUC(n) + SUC(0)");
  CHECK(s->steps[0].from_induction_step);
  CHECK(s->steps[0].origin == "induction-step");
}

TEST_CASE("structural induction on lists introduces fresh step variables") {
  const Theory& th = ts::lists();
  Clause c = ts::cl(th, {"REVERSE(REVERSE(l)) = l"}, false, {{"l", "list"}});
  auto s = induct(c, th);
  REQUIRE(s.has_value());
  CHECK(s->var == "l");
  REQUIRE(s->bases.size() == 1);
  CHECK(print_clause(s->bases[0]) == "REVERSE(REVERSE(NIL)) = NIL");
  REQUIRE(s->steps.size() == 1);
  CHECK(print_clause(s->steps[0]) ==
        "REVERSE(REVERSE(l')) = l' ==> REVERSE(REVERSE(CONS(n, l'))) = CONS(n, l')");
}

TEST_CASE("induction prefers variables at recursive argument positions") {
  const Theory& th = ts::peano();
  // m appears only at a non-recursive spot; n drives the recursion of EVEN.
  auto s = induct(ts::cl(th, {"m = 0", "EVEN(n)"}), th);
  REQUIRE(s.has_value());
  CHECK(s->var == "n");
  // Ties go to the variable seen first.
  auto t = induct(ts::cl(th, {"m + n = n + m"}), th);
  REQUIRE(t.has_value());
  CHECK(t->var == "m");
}

TEST_CASE("induction on a boolean variable enumerates the truth values") {
  const Theory& th = ts::peano();
  auto s = induct(ts::cl(th, {"p <=> T"}, false, {{"p", kBoolSort}}), th);
  REQUIRE(s.has_value());
  CHECK(s->var == "p");
  REQUIRE(s->bases.size() == 2);
  CHECK(print_clause(s->bases[0]) == "T <=> T");
  CHECK(print_clause(s->bases[1]) == "F <=> T");
  CHECK(s->steps.empty());
}

TEST_CASE("ground clauses admit no induction") {
  const Theory& th = ts::peano();
  CHECK_FALSE(induct(ts::cl(th, {"SUC(0) = 0 + SUC(0)"}), th).has_value());
}

// ---------------------------------------------------------------------------
// End-to-end proofs and metrics.

TEST_CASE("a ground goal is settled in a single pour") {
  const Theory& th = ts::peano();
  ProofResult r = prove(ts::t(th, "SUC(0) = 0 + SUC(0)"), th, Config{});
  CHECK(r.status == ProofResult::Status::Proved);
  CHECK(r.metrics.steps == 1);
  CHECK(r.metrics.inductions == 0);
}

TEST_CASE("the classic goal is proved with one induction") {
  const Theory& th = ts::peano();
  Config cfg;
  cfg.trace_level = TraceLevel::normal;
  ProofResult r = prove(ts::t(th, "SUC(m) = m + SUC(0)"), th, cfg);
  CHECK(r.status == ProofResult::Status::Proved);
  CHECK(r.metrics.steps == 6);
  CHECK(r.metrics.inductions == 1);
  CHECK(r.metrics.generalizations == 0);
  CHECK(r.metrics.wall_time_ms >= 0.0);

  CHECK(render_trace(r.trace, TraceLevel::silent) == "");
  CHECK(render_trace(r.trace, TraceLevel::normal) ==
        "Doing induction on:SUC(m) = m + SUC(0)\n"
        "\n"
        " SUC(0) = 0 + SUC(0)\n"
        "-> HL Simplify Heuristic\n"
        "Proven:|- SUC(0) = 0 + SUC(0)\n"
        "\n"
        " SUC(n) = n + SUC(0) ==> SUC(SUC(n)) = SUC(n) + SUC(0)\n"
        "-> Clausal Form Heuristic (1 clause)\n"
        " ~(SUC(n) = n + SUC(0)) \\/ SUC(SUC(n)) = SUC(n) + SUC(0)\n"
        "-> HL Simplify Heuristic\n"
        " ~(SUC(n) = n + SUC(0)) \\/ SUC(n) = n + SUC(0)\n"
        "-> Tautology Heuristic\n"
        "Proven:|- ~(SUC(n) = n + SUC(0)) \\/ SUC(n) = n + SUC(0)\n"
        "\n"
        "Theorem:|- SUC(m) = m + SUC(0)\n");
}

TEST_CASE("commutativity of addition under the basic preset") {
  const Theory& th = ts::peano();
  Config cfg = preset_config("BM");
  cfg.trace_level = TraceLevel::tree;
  ProofResult r = prove(ts::t(th, "m + n = n + m"), th, cfg);
  CHECK(r.status == ProofResult::Status::Proved);
  CHECK(r.metrics.steps == 16);
  CHECK(r.metrics.inductions == 3);
  CHECK(r.metrics.generalizations == 0);
  // The step census agrees with the counters.
  CHECK(count_kind(r.trace, TraceEvent::Kind::Poured) +
            count_kind(r.trace, TraceEvent::Kind::InductionOn) ==
        r.metrics.steps);
  CHECK(count_kind(r.trace, TraceEvent::Kind::InductionOn) ==
        r.metrics.inductions);
}

TEST_CASE("commutativity of multiplication under the basic preset") {
  const Theory& th = ts::peano();
  Config cfg = preset_config("BM");
  ProofResult a = prove(ts::t(th, "m * n = n * m"), th, cfg);
  CHECK(a.status == ProofResult::Status::Proved);
  CHECK(a.metrics.steps == 41);
  CHECK(a.metrics.inductions == 7);
  CHECK(a.metrics.generalizations == 1);
  CHECK(a.metrics.overgeneralizations == 0);

  // Identical configurations replay identically (wall time aside).
  cfg.trace_level = TraceLevel::tree;
  ProofResult b = prove(ts::t(th, "m * n = n * m"), th, cfg);
  ProofResult c = prove(ts::t(th, "m * n = n * m"), th, cfg);
  CHECK(render_trace_jsonl(b.trace) == render_trace_jsonl(c.trace));
  CHECK(b.metrics.steps == c.metrics.steps);
  CHECK(b.metrics.inductions == c.metrics.inductions);
  CHECK(b.metrics.generalizations == c.metrics.generalizations);
  CHECK(b.metrics.overgeneralizations == c.metrics.overgeneralizations);
}

TEST_CASE("silent traces keep only generalizations and the final record") {
  const Theory& th = ts::peano();
  ProofResult r = prove(ts::t(th, "m * n = n * m"), th, preset_config("BM"));
  REQUIRE(r.trace.events.size() == 2);
  const TraceEvent& g = r.trace.events[0];
  CHECK(g.kind == TraceEvent::Kind::Applied);
  CHECK(g.heuristic == "gen");
  CHECK_FALSE(g.recovery.empty());
  CHECK(r.trace.events[1].kind == TraceEvent::Kind::Done);

  // The connection the recovery map promises: instantiating the output
  // clause with it yields the clause that was generalized.
  REQUIRE(g.outputs.size() == 1);
  CHECK(print_clause(apply_bindings(g.outputs[0], g.recovery)) ==
        print_clause(g.clause));
}

TEST_CASE("trichotomy needs ranked generalization") {
  const Theory& th = ts::peano();
  Term goal = ts::t(th, "m < n \\/ n < m \\/ m = n");
  ProofResult good = prove(goal, th, preset_config("BMG"));
  CHECK(good.status == ProofResult::Status::Proved);
  CHECK(good.metrics.inductions == 3);
  CHECK(good.metrics.generalizations == 1);
  CHECK(good.metrics.overgeneralizations == 2);

  ProofResult bad = prove(goal, th, preset_config("BMR"));
  CHECK(bad.status == ProofResult::Status::DepthCutoff);
  CHECK(bad.reason == "variable depth exceeds 12");
}

// ---------------------------------------------------------------------------
// Waterfall loop protection.

TEST_CASE("the loop filter ends cross-fertilization ping-pong") {
  const Theory& th = pingpong_theory();
  Config cfg;
  cfg.heuristic_order = {"equal"};
  cfg.trace_level = TraceLevel::tree;
  Clause c = ts::cl(th, {"~(F1(0) = G1(0))", "P1(F1(0))"});

  ProofResult r = Prover(th, cfg).prove(c);
  CHECK(r.status == ProofResult::Status::Failed);
  CHECK(r.reason == "no induction possible");
  CHECK(r.metrics.steps == 3);
  REQUIRE(count_kind(r.trace, TraceEvent::Kind::LoopSkipped) == 1);
  for (const TraceEvent& e : r.trace.events)
    if (e.kind == TraceEvent::Kind::LoopSkipped) CHECK(e.heuristic == "equal");
  CHECK(render_trace(r.trace, TraceLevel::tree).find("loop filter skips") !=
        std::string::npos);

  // Without the filter the same input ping-pongs until the clock runs out.
  Config open = cfg;
  open.warehouse = false;
  open.trace_level = TraceLevel::silent;
  open.timeout_ms = 100;
  ProofResult loop = Prover(th, open).prove(c);
  CHECK(loop.status == ProofResult::Status::Timeout);
  CHECK(loop.reason == "wall-clock timeout");
}

TEST_CASE("repeated induction in one branch aborts the attempt") {
  const Theory& th = triv_theory();
  Config cfg;
  cfg.heuristic_order = {"cnf", "setify", "simp"};
  ProofResult r = prove(ts::t(th, "TRIV(m)"), th, cfg);
  CHECK(r.status == ProofResult::Status::Failed);
  CHECK(r.reason == "repeated induction in the same branch");
}

TEST_CASE("a falsifiable goal is disproved") {
  const Theory& th = ts::peano();
  ProofResult r = prove(ts::t(th, "EVEN(m)"), th, Config{});
  CHECK(r.status == ProofResult::Status::Disproved);
  CHECK_FALSE(r.reason.empty());
}

TEST_CASE("the repeated-induction guard stops a parity goal the basic preset cannot crack") {
  const Theory& th = ts::peano();
  ProofResult r = prove(ts::t(th, "EVEN(m + n) <=> (EVEN(m) <=> EVEN(n))"), th,
                        preset_config("BM"));
  CHECK(r.status == ProofResult::Status::Failed);
  CHECK(r.reason == "repeated induction in the same branch");
}

// ---------------------------------------------------------------------------
// Trace renderers.

TEST_CASE("tree traces expose pours and induction variables") {
  const Theory& th = ts::peano();
  Config cfg;
  cfg.trace_level = TraceLevel::tree;
  ProofResult r = prove(ts::t(th, "SUC(m) = m + SUC(0)"), th, cfg);
  std::string tree = render_trace(r.trace, TraceLevel::tree);
  CHECK(tree.find("+ SUC(m) = m + SUC(0)") != std::string::npos);
  CHECK(tree.find("Doing induction on:SUC(m) = m + SUC(0)  (variable m)") !=
        std::string::npos);
  CHECK(tree.find("Theorem:|- SUC(m) = m + SUC(0)") != std::string::npos);
}

TEST_CASE("structured trace lines parse as JSON records") {
  const Theory& th = ts::peano();
  Config cfg;
  cfg.trace_level = TraceLevel::tree;
  ProofResult r = prove(ts::t(th, "SUC(m) = m + SUC(0)"), th, cfg);
  std::istringstream in(render_trace_jsonl(r.trace));

  std::set<std::string> seen;
  bool induction_var_ok = false, outputs_seen = false, done_ok = false;
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    nlohmann::json j = nlohmann::json::parse(line);  // throws on bad records
    REQUIRE(j.contains("event"));
    seen.insert(j["event"].get<std::string>());
    CHECK(j["waterfall"].is_number());
    CHECK(j["depth"].is_number());
    CHECK(j["chain"].is_number());
    if (j["event"] == "induction" && j.value("var", "") == "m")
      induction_var_ok = true;
    if (j["event"] == "applied") {
      CHECK(j.contains("label"));
      CHECK(j.contains("outcome"));
      if (j.contains("outputs") && j["outputs"].is_array()) outputs_seen = true;
    }
    if (j["event"] == "done" && j.value("outcome", "") == "proved")
      done_ok = true;
  }
  CHECK(lines == r.trace.events.size());
  for (const char* must : {"poured", "applied", "proven", "induction", "done"})
    CHECK(seen.count(must) == 1);
  CHECK(induction_var_ok);
  CHECK(outputs_seen);
  CHECK(done_ok);
}

// ---------------------------------------------------------------------------
// Validation.

TEST_CASE("goal and configuration validation") {
  const Theory& th = ts::peano();
  CHECK_THROWS_AS(prove(ts::t(th, "m + n"), th, Config{}), Error);

  Config bad;
  bad.heuristic_order = {"simp", "frobnicate"};
  CHECK_THROWS_AS(Prover(th, bad), Error);

  // The clause entry point accepts multi-literal goals directly.
  ProofResult r = Prover(th, Config{}).prove(ts::cl(th, {"m = 0", "~(m = 0)"}));
  CHECK(r.status == ProofResult::Status::Proved);
  CHECK(r.metrics.steps == 1);
}
