// Tests for the random-instantiation counterexample checker.
#include "oracle.hpp"
#include "test_support.hpp"

#include <set>
#include <string>
#include <vector>

using namespace bmtp;

namespace {

Disprover dp(const Theory& th, std::uint64_t seed = 0) {
  Disprover d;
  d.theory = &th;
  d.seed = seed;
  return d;
}

// Constructor nesting depth of a ground value.
std::size_t value_depth(const Term& t) {
  std::size_t best = 0;
  for (const Term& a : t.args()) best = std::max(best, value_depth(a) + 1);
  return best;
}

bool is_ground_value(const Theory& th, const Term& t) {
  if (t.is_var() || !th.is_constructor_symbol(t.name())) return false;
  for (const Term& a : t.args())
    if (!is_ground_value(th, a)) return false;
  return true;
}

}  // namespace

TEST_CASE("random ground terms are well-formed constructor values") {
  const Theory& th = ts::lists();
  SplitMix64 rng(99);
  for (int i = 0; i < 300; ++i) {
    Term n = random_ground(th, "num", 8, rng);
    CHECK(is_ground_value(th, n));
    CHECK(numeral_value(n).has_value());
    CHECK(value_depth(n) <= 8);

    Term l = random_ground(th, "list", 6, rng);
    CHECK(is_ground_value(th, l));
    CHECK(value_depth(l) <= 6);
  }
}

TEST_CASE("max depth zero forces bottom objects") {
  const Theory& th = ts::lists();
  SplitMix64 rng(1);
  for (int i = 0; i < 50; ++i) {
    CHECK(print_term(random_ground(th, "num", 0, rng)) == "0");
    CHECK(print_term(random_ground(th, "list", 0, rng)) == "NIL");
  }
}

TEST_CASE("deeper values appear once the depth budget allows them") {
  const Theory& th = ts::peano();
  SplitMix64 rng(2);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i)
    seen.insert(*numeral_value(random_ground(th, "num", 8, rng)));
  CHECK(seen.count(0) == 1);
  CHECK(seen.size() > 3);  // a spread of magnitudes, not just bottoms
}

TEST_CASE("generation for a sort without a shell is an error") {
  const Theory& th = ts::peano();
  SplitMix64 rng(3);
  CHECK_THROWS_AS(random_ground(th, "ghost", 4, rng), Error);
}

TEST_CASE("ground literal evaluation decides closed arithmetic") {
  const Theory& th = ts::peano();
  CHECK(eval_ground_literal(ts::t(th, "2 + 2 = 4"), th, kDefaultFuel) ==
        std::optional<bool>(true));
  CHECK(eval_ground_literal(ts::t(th, "2 + 2 = 5"), th, kDefaultFuel) ==
        std::optional<bool>(false));
  CHECK(eval_ground_literal(ts::t(th, "EVEN(10)"), th, kDefaultFuel) ==
        std::optional<bool>(true));
  CHECK(eval_ground_literal(ts::t(th, "2 EXP 5 < 2 EXP 6"), th, kDefaultFuel) ==
        std::optional<bool>(true));
}

TEST_CASE("stuck accessor applications evaluate to unknown") {
  const Theory& th = ts::lists();
  CHECK_FALSE(eval_ground_literal(ts::t(th, "HD(NIL) = 0"), th, kDefaultFuel).has_value());
  CHECK(eval_ground_clause(ts::cl(th, {"HD(NIL) = 0"}), th, kDefaultFuel) == std::nullopt);
  // A true literal elsewhere decides the clause anyway.
  CHECK(eval_ground_clause(ts::cl(th, {"HD(NIL) = 0", "0 = 0"}), th, kDefaultFuel) ==
        std::optional<bool>(true));
}

TEST_CASE("check survives valid conjectures") {
  const Theory& th = ts::peano();
  CHECK(check(ts::cl(th, {"0 = 0"}), dp(th)).kind == Verdict::Kind::Survived);
  CHECK(check(ts::cl(th, {"m + n = n + m"}), dp(th)).kind == Verdict::Kind::Survived);
  CHECK(check(ts::cl(th, {"m <= m + n"}), dp(th)).kind == Verdict::Kind::Survived);
}

TEST_CASE("check reports Undecided when evaluation cannot settle") {
  const Theory& th = ts::lists();
  CHECK(check(ts::cl(th, {"HD(NIL) = 0"}), dp(th)).kind == Verdict::Kind::Undecided);
}

TEST_CASE("check disproves a falsifiable mixed-variable equation") {
  // One witness class: any assignment with m + n different from n' + m.
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"m + n = n' + m"});
  int disproved = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Verdict v = check(c, dp(th, seed));
    if (v.kind != Verdict::Kind::Disproved) continue;
    ++disproved;
    // The witness genuinely falsifies the clause under the oracle.
    REQUIRE(v.witness.count("m") == 1);
    REQUIRE(v.witness.count("n") == 1);
    REQUIRE(v.witness.count("n'") == 1);
    auto verdict = oracle::eval_clause(th, c, v.witness, 100000);
    REQUIRE(verdict.has_value());
    CHECK_FALSE(*verdict);
  }
  CHECK(disproved >= 8);
}

TEST_CASE("check never fabricates witnesses") {
  // Any Disproved verdict on random clauses must come with an assignment that
  // the independent oracle confirms falsifying.
  const Theory& th = ts::peano();
  ts::TermGen gen(th, 53);
  int confirmed = 0;
  for (int i = 0; i < 150; ++i) {
    Clause c({gen.formula(3)});
    Verdict v = check(c, dp(th, i));
    if (v.kind != Verdict::Kind::Disproved) continue;
    auto verdict = oracle::eval_clause(th, c, v.witness, 200000);
    if (!verdict.has_value()) continue;  // oracle budget too small to confirm
    CHECK_FALSE(*verdict);
    ++confirmed;
  }
  CHECK(confirmed > 20);
}

TEST_CASE("verdicts are deterministic for a fixed seed") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"m + n = n' + m"});
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Verdict a = check(c, dp(th, seed));
    Verdict b = check(c, dp(th, seed));
    CHECK(a.kind == b.kind);
    CHECK(a.witness == b.witness);
  }
}

TEST_CASE("the check stream depends on the clause, not its variable names") {
  const Theory& th = ts::peano();
  // Alpha-equivalent clauses draw identical examples, so verdicts agree.
  Verdict a = check(ts::cl(th, {"m + n = n' + m"}), dp(th, 4));
  Verdict b = check(ts::cl(th, {"a + b = c + a"}), dp(th, 4));
  CHECK(a.kind == b.kind);
}

TEST_CASE("edge-case-only falsifiable clauses may survive or be caught") {
  // Only m = 0 falsifies this; with few checks the flaw often goes unnoticed,
  // which is exactly why vetoes must stay conservative.
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"m * n < m * SUC(n)"});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Verdict v = check(c, dp(th, seed));
    REQUIRE(v.kind != Verdict::Kind::Undecided);
    if (v.kind == Verdict::Kind::Disproved) {
      // Every witness must set m = 0.
      CHECK(print_term(v.witness.at("m")) == "0");
    }
  }
}

TEST_CASE("a generous check budget finds frequent flaws reliably") {
  const Theory& th = ts::peano();
  Clause bad = ts::cl(th, {"n <= n'"});  // flawed whenever n' < n
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Disprover many = dp(th, seed);
    many.checks_per_call = 50;
    CHECK(check(bad, many).kind == Verdict::Kind::Disproved);
  }
}
