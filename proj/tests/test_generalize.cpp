// Tests for generalization: common-subterm abstraction (classic and
// proposal-ranked variants), generalizing variables apart, and the
// counterexample veto wiring.
#include "oracle.hpp"
#include "test_support.hpp"

#include <string>
#include <vector>

using namespace bmtp;

namespace {

Disprover dp(const Theory& th, std::uint64_t seed = 0, std::size_t checks = 5) {
  Disprover d;
  d.theory = &th;
  d.seed = seed;
  d.checks_per_call = checks;
  return d;
}

std::vector<std::string> cand_strings(const Clause& c, const Theory& th) {
  std::vector<std::string> out;
  for (const Term& t : bm_candidates(c, th)) out.push_back(print_term(t));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Classic common-subterm candidates.

TEST_CASE("candidates: a repeated product on both equation sides") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"(m * n) + n = n + (m * n)"});
  CHECK(cand_strings(c, th) == std::vector<std::string>{"m * n"});
}

TEST_CASE("candidates: single occurrences on one side do not qualify") {
  const Theory& th = ts::peano();
  CHECK(cand_strings(ts::cl(th, {"n + 0 = n"}), th).empty());
  CHECK(cand_strings(ts::cl(th, {"m * n = n"}), th).empty());
}

TEST_CASE("candidates: accessor applications are excluded") {
  const Theory& th = ts::peano();
  CHECK(cand_strings(ts::cl(th, {"PRE(x) + 0 = 0 + PRE(x)"}), th).empty());
}

TEST_CASE("candidates: explicit value templates are excluded") {
  const Theory& th = ts::peano();
  CHECK(cand_strings(ts::cl(th, {"SUC(0) + m = m + SUC(0)"}), th).empty());
}

TEST_CASE("candidates are minimal: no candidate contains another") {
  const Theory& th = ts::peano();
  ts::TermGen gen(th, 59);
  for (int i = 0; i < 100; ++i) {
    Clause c({gen.formula(3)});
    std::vector<Term> cands = bm_candidates(c, th);
    for (const Term& a : cands)
      for (const Term& b : cands)
        if (!(a == b)) CHECK_FALSE(contains_subterm(a, b));
  }
}

// ---------------------------------------------------------------------------
// Classic generalization.

TEST_CASE("classic generalization abstracts the product to a fresh variable") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"(m * n) + n = n + (m * n)"});
  auto r = bm_generalize(c, th);
  REQUIRE(r.has_value());
  CHECK(print_clause(r->first) == "n' + n = n + n'");
  REQUIRE(r->second.count("n'") == 1);
  CHECK(print_term(r->second.at("n'")) == "m * n");
}

TEST_CASE("classic generalization instantiates matching lemmas as hypotheses") {
  Theory th = ts::peano().add_generalization_lemma(ts::t(ts::peano(), "0 <= m * n"));
  Clause c = ts::cl(th, {"(m * n) + n = n + (m * n)"});
  auto r = bm_generalize(c, th);
  REQUIRE(r.has_value());
  CHECK(print_clause(r->first) == "0 <= n' ==> n' + n = n + n'");
}

TEST_CASE("recovery bindings restore the original clause") {
  const Theory& th = ts::peano();
  for (const char* text : {"(m * n) + n = n + (m * n)",
                           "(m + n) - (m + n) = (m + n) * 0",
                           "PRE(SUC(m + n) - m) = (m + n) - m"}) {
    Clause c = ts::cl(th, {text});
    auto r = bm_generalize(c, th);
    REQUIRE(r.has_value());
    CHECK(print_clause(apply_bindings(r->first, r->second)) == print_clause(c));
  }
}

TEST_CASE("classic generalization digs below constructors and accessors") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"PRE(SUC(m + n) - m) = (m + n) - m"});
  auto r = bm_generalize(c, th);
  REQUIRE(r.has_value());
  CHECK(print_clause(r->first) == "PRE(SUC(n') - m) = n' - m");
}

// ---------------------------------------------------------------------------
// Proposal-ranked generalization.

TEST_CASE("proposals: the repeated product is proposed once, twice over") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"((m * n) + n) + SUC(m) = ((m * n) + m) + SUC(n)"});
  std::vector<Proposal> ps = aderhold_proposals(c, th, true);
  REQUIRE(ps.size() == 1);
  CHECK(print_term(ps[0].term) == "m * n");
  CHECK(ps[0].times_proposed == 2);
  CHECK(ps[0].occurrences == 2);
  CHECK(ps[0].induction_ok);
}

TEST_CASE("proposals do not descend into constructor arguments") {
  const Theory& th = ts::peano();
  // The equation sides contain SUC(...), so the sides themselves are not
  // proposed, and nothing below SUC is either.
  Clause c = ts::cl(th, {"SUC((m * n) + n) = SUC((m * n) + m)"});
  CHECK(aderhold_proposals(c, th, true).empty());
}

TEST_CASE("the equation criterion rejects one-sided single occurrences") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"n' * n = 0", "~(n' * n + n = 0)", "n = 0"});

  std::vector<Proposal> with = aderhold_proposals(c, th, true);
  CHECK(with.empty());

  std::vector<Proposal> without = aderhold_proposals(c, th, false);
  REQUIRE(without.size() == 1);
  CHECK(print_term(without[0].term) == "n' * n");
  CHECK(without[0].times_proposed == 2);
}

TEST_CASE("equation_criterion_ok on both-sides and twice-on-one-side shapes") {
  const Theory& th = ts::peano();
  Term prod = ts::t(th, "n' * n");
  using gen_detail::equation_criterion_ok;
  CHECK_FALSE(equation_criterion_ok(ts::cl(th, {"n' * n = 0"}), prod));
  CHECK(equation_criterion_ok(ts::cl(th, {"n' * n + n = n' * n"}), prod));
  CHECK(equation_criterion_ok(ts::cl(th, {"(n' * n) + (n' * n) = 0"}), prod));
  // Literals not mentioning the term do not constrain it.
  CHECK(equation_criterion_ok(ts::cl(th, {"m = 0"}), prod));
}

TEST_CASE("proposal-ranked generalization abstracts and is remembered") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"((m * n) + n) + SUC(m) = ((m * n) + m) + SUC(n)"});
  GenMemory mem;
  std::size_t vetoes = 0;
  auto r = aderhold_generalize(c, th, true, mem, dp(th), vetoes);
  REQUIRE(r.has_value());
  CHECK(print_clause(r->first) == "n' + n + SUC(m) = n' + m + SUC(n)");
  CHECK(print_term(r->second.at("n'")) == "m * n");
  CHECK(vetoes == 0);

  // The accepted proposal is recorded: the same clause family yields nothing.
  auto again = aderhold_generalize(c, th, true, mem, dp(th), vetoes);
  CHECK_FALSE(again.has_value());

  // Alpha-renamed variants hit the same memory entry.
  Clause renamed = ts::cl(th, {"((a * b) + b) + SUC(a) = ((a * b) + a) + SUC(b)"});
  CHECK_FALSE(aderhold_generalize(renamed, th, true, mem, dp(th), vetoes).has_value());
}

TEST_CASE("proposal-ranked generalization skips the accessor example the classic rule accepts") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"PRE(SUC(m + n) - m) = (m + n) - m"});
  GenMemory mem;
  std::size_t vetoes = 0;
  CHECK_FALSE(aderhold_generalize(c, th, true, mem, dp(th), vetoes).has_value());
  CHECK(bm_generalize(c, th).has_value());
}

// ---------------------------------------------------------------------------
// Generalizing variables apart.

TEST_CASE("variables apart: recursive-argument occurrences are renamed") {
  const Theory& th = ts::peano();
  std::size_t vetoes = 0;
  auto r = generalize_apart(ts::cl(th, {"x + (x + x) = (x + x) + x"}), th, dp(th), vetoes);
  REQUIRE(r.has_value());
  CHECK(print_clause(r->first) == "x' + (x + x) = x + x + x'");
  CHECK(print_term(r->second.at("x'")) == "x");
}

TEST_CASE("variables apart: the doubling example needs the deep phase") {
  const Theory& th = ts::lists();
  std::size_t vetoes = 0;
  auto r = generalize_apart(
      ts::cl(th, {"LENGTH(APPEND(x, x)) = LENGTH(x) + LENGTH(x)"}, false, {{"x", "list"}}),
      th, dp(th), vetoes);
  REQUIRE(r.has_value());
  CHECK(print_clause(r->first) == "LENGTH(APPEND(x', x)) = LENGTH(x') + LENGTH(x)");
}

TEST_CASE("variables apart: the successor example becomes single-induction material") {
  const Theory& th = ts::peano();
  std::size_t vetoes = 0;
  auto r = generalize_apart(ts::cl(th, {"SUC(n + n) = n + SUC(n)"}), th, dp(th), vetoes);
  REQUIRE(r.has_value());
  CHECK(print_clause(r->first) == "SUC(n' + n) = n' + SUC(n)");
  CHECK(vetoes == 0);
}

TEST_CASE("variables apart: overgeneralizations are vetoed") {
  const Theory& th = ts::peano();
  std::size_t vetoes = 0;
  auto r = generalize_apart(ts::cl(th, {"n <= n"}), th, dp(th, 0, 25), vetoes);
  CHECK_FALSE(r.has_value());
  CHECK(vetoes >= 1);
}

TEST_CASE("variables apart needs rec and non-rec occurrences of the same function") {
  const Theory& th = ts::peano();
  std::size_t vetoes = 0;
  // Single occurrence at the recursive position only: nothing to split.
  CHECK_FALSE(generalize_apart(ts::cl(th, {"EVEN(n)"}), th, dp(th), vetoes).has_value());
  CHECK(vetoes == 0);
}

TEST_CASE("variables apart results restore the original via recovery") {
  const Theory& th = ts::peano();
  std::size_t vetoes = 0;
  Clause c = ts::cl(th, {"SUC(n + n) = n + SUC(n)"});
  auto r = generalize_apart(c, th, dp(th), vetoes);
  REQUIRE(r.has_value());
  CHECK(print_clause(apply_bindings(r->first, r->second)) == print_clause(c));
}

// ---------------------------------------------------------------------------
// Dispatch.

TEST_CASE("algorithm tokens round-trip") {
  for (GenAlgo a : {GenAlgo::bm, GenAlgo::aderhold, GenAlgo::aderhold_noeq,
                    GenAlgo::bm_apart, GenAlgo::aderhold_apart})
    CHECK(gen_algo_from_token(gen_algo_token(a)) == a);
  CHECK_FALSE(gen_algo_from_token("nonsense").has_value());
}

TEST_CASE("run_generalize accepts a sound classic generalization") {
  const Theory& th = ts::peano();
  GenMemory mem;
  GenOutcome out = run_generalize(ts::cl(th, {"(m * n) + n = n + (m * n)"}), th,
                                  GenAlgo::bm, true, mem, dp(th));
  REQUIRE(out.clause.has_value());
  CHECK(print_clause(*out.clause) == "n' + n = n + n'");
  CHECK(out.vetoes == 0);
}

TEST_CASE("run_generalize vetoes a refutable classic generalization") {
  const Theory& th = ts::peano();
  GenMemory mem;
  // Abstracting m * n here yields n' + n' = n', which random checking refutes.
  GenOutcome out = run_generalize(ts::cl(th, {"(m * n) + (m * n) = m * n"}), th,
                                  GenAlgo::bm, true, mem, dp(th, 0, 25));
  CHECK_FALSE(out.clause.has_value());
  CHECK(out.vetoes == 1);
}

TEST_CASE("composite algorithms fall back to variables apart") {
  const Theory& th = ts::peano();
  GenMemory mem;
  // No common subterm to abstract, but n can be generalized apart.
  Clause c = ts::cl(th, {"SUC(n + n) = n + SUC(n)"});
  GenOutcome plain = run_generalize(c, th, GenAlgo::bm, true, mem, dp(th));
  CHECK_FALSE(plain.clause.has_value());

  GenMemory mem2;
  GenOutcome composite = run_generalize(c, th, GenAlgo::bm_apart, true, mem2, dp(th));
  REQUIRE(composite.clause.has_value());
  CHECK(print_clause(*composite.clause) == "SUC(n' + n) = n' + SUC(n)");
}

TEST_CASE("the no-criterion variant unlocks the equation-criterion example") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"n' * n = 0", "~(n' * n + n = 0)", "n = 0"});
  GenMemory mem;
  GenOutcome strict = run_generalize(c, th, GenAlgo::aderhold, true, mem, dp(th));
  CHECK_FALSE(strict.clause.has_value());

  GenMemory mem2;
  GenOutcome lax = run_generalize(c, th, GenAlgo::aderhold_noeq, true, mem2, dp(th));
  REQUIRE(lax.clause.has_value());
  CHECK(print_clause(*lax.clause) == "n'' = 0 \\/ ~(n'' + n = 0) \\/ n = 0");
}

TEST_CASE("accepted generalizations strengthen the original statement") {
  // Whenever a generalization is accepted, instantiating its recovery must
  // reproduce the input clause; on random valid inputs the output clause also
  // evaluates identically under the recovered instantiation.
  const Theory& th = ts::peano();
  GenMemory mem;
  std::vector<Clause> inputs = {
      ts::cl(th, {"(m * n) + n = n + (m * n)"}),
      ts::cl(th, {"SUC(n + n) = n + SUC(n)"}),
      ts::cl(th, {"((m * n) + n) + SUC(m) = ((m * n) + m) + SUC(n)"}),
  };
  for (const Clause& c : inputs) {
    for (GenAlgo a : {GenAlgo::bm_apart, GenAlgo::aderhold_apart}) {
      GenMemory m2;
      GenOutcome out = run_generalize(c, th, a, true, m2, dp(th));
      if (!out.clause.has_value()) continue;
      CHECK(print_clause(apply_bindings(*out.clause, out.recovery)) == print_clause(c));
    }
  }
  (void)mem;
}
