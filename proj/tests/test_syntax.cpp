// Tests for the concrete syntax: lexing, parsing, elaboration, and printing.
#include "test_support.hpp"

#include <string>
#include <vector>

using namespace bmtp;

TEST_CASE("parsing a shell declaration registers the datatype") {
  ParsedTheory pt = parse_theory(R"(
shell num {
  bottom 0;
  con SUC(num) accessors (PRE);
}
)");
  CHECK(pt.theory.is_shell_sort("num"));
  CHECK(pt.theory.is_accessor_symbol("PRE"));
  CHECK(pt.conjectures.empty());
  REQUIRE(pt.decls.size() == 1);
  CHECK(pt.decls[0].kind == 's');
}

TEST_CASE("parsing definitions and conjectures") {
  ParsedTheory pt = parse_theory(std::string(ts::peano_text()) + R"(
conjecture "add_comm" m + n = n + m;
conjecture "fig3" SUC(m) = m + SUC(0);
)");
  REQUIRE(pt.conjectures.size() == 2);
  CHECK(pt.conjectures[0].first == "add_comm");
  CHECK(print_term(pt.conjectures[0].second) == "m + n = n + m");
  CHECK(pt.conjectures[1].first == "fig3");
  CHECK(print_term(pt.conjectures[1].second) == "SUC(m) = m + SUC(0)");
}

TEST_CASE("the bundled fixtures parse to the expected declaration mix") {
  ParsedTheory pt = parse_theory(ts::peano_text());
  std::string kinds;
  for (const auto& d : pt.decls) kinds.push_back(d.kind);
  CHECK(kinds == "sffffffffr");  // one shell, eight functions, one rule
}

TEST_CASE("genlemma declarations feed the generalization heuristic") {
  ParsedTheory pt = parse_theory(std::string(ts::peano_text()) +
                                 "\ngenlemma 0 <= m * n;\n");
  REQUIRE(pt.theory.generalization_lemmas().size() == 1);
  CHECK(print_term(pt.theory.generalization_lemmas()[0]) == "0 <= m * n");
}

TEST_CASE("numerals elaborate to constructor chains") {
  const Theory& th = ts::peano();
  CHECK(print_term(ts::t(th, "2")) == "SUC(SUC(0))");
  CHECK(print_term(ts::t(th, "0")) == "0");
  CHECK(print_term(ts::t(th, "SUC(1)")) == "SUC(SUC(0))");
}

TEST_CASE("infix precedence and associativity") {
  const Theory& th = ts::peano();
  CHECK(ts::t(th, "m + n * p") == ts::t(th, "m + (n * p)"));
  CHECK(ts::t(th, "m - n - p") == ts::t(th, "(m - n) - p"));
  CHECK(ts::t(th, "m + n + p") == ts::t(th, "(m + n) + p"));
  CHECK(ts::t(th, "a ==> b ==> c") == ts::t(th, "a ==> (b ==> c)"));
  CHECK(ts::t(th, "a /\\ b \\/ c") == ts::t(th, "(a /\\ b) \\/ c"));
  CHECK(ts::t(th, "a \\/ b <=> c") == ts::t(th, "(a \\/ b) <=> c"));
  CHECK(ts::t(th, "~EVEN(m) <=> ODD(m)") ==
        mk_iff(mk_not(ts::t(th, "EVEN(m)")), ts::t(th, "ODD(m)")));
  CHECK(ts::t(th, "m + n = n + m") ==
        mk_eq(ts::t(th, "m + n"), ts::t(th, "n + m")));
}

TEST_CASE("comparison sugar swaps into the primitive orderings") {
  const Theory& th = ts::peano();
  CHECK(ts::t(th, "a > b") == ts::t(th, "b < a"));
  CHECK(ts::t(th, "a >= b") == ts::t(th, "b <= a"));
}

TEST_CASE("equality between boolean terms becomes an equivalence") {
  const Theory& th = ts::peano();
  Term t = ts::t(th, "EVEN(m) = EVEN(n)");
  CHECK(is_iff(t));
}

TEST_CASE("unknown identifiers become variables with inferred sorts") {
  const Theory& th = ts::lists();
  Term a = ts::t(th, "foo + 0");
  REQUIRE(a.args()[0].is_var());
  CHECK(a.args()[0].sort() == "num");

  // Sorts can flow right-to-left through equations on a second pass.
  Term b = ts::t(th, "xs = REVERSE(ys)");
  CHECK(b.args()[0].sort() == "list");

  // Or be supplied explicitly.
  Term c = ts::t(th, "v", {{"v", "list"}});
  CHECK(c.sort() == "list");

  // An expected sort guides a bare unknown identifier.
  Term d = ts::t(th, "w", {}, "num");
  CHECK(d.sort() == "num");
}

TEST_CASE("parse errors carry line and column positions") {
  const Theory& th = ts::peano();
  try {
    (void)ts::t(th, "SUC(0");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("1:") != std::string::npos);
  }

  try {
    (void)parse_theory("shell num {\n  bottom 0;\n  con SUC(num accessors (PRE);\n}\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("3:") != std::string::npos);
  }
}

TEST_CASE("arity and sort errors are rejected at parse time") {
  const Theory& th = ts::peano();
  CHECK_THROWS_AS(ts::t(th, "SUC(0, 0)"), Error);
  CHECK_THROWS_AS(ts::t(th, "SUC()"), Error);
  CHECK_THROWS_AS(ts::t(th, "EVEN(EVEN(m))"), Error);
}

TEST_CASE("printing inserts only necessary parentheses") {
  const Theory& th = ts::peano();
  auto rt = [&](const std::string& s) { return print_term(ts::t(th, s)); };
  CHECK(rt("m + n + p") == "m + n + p");
  CHECK(rt("m + (n + p)") == "m + (n + p)");
  CHECK(rt("(m + n) * p") == "(m + n) * p");
  CHECK(rt("m + n * p") == "m + n * p");
  // Redundant input parentheses are dropped; the reparsed term is unchanged.
  Term clause_term = ts::t(th, "~(n * 0 = 0) \\/ (n * 0) + 0 = 0");
  CHECK(rt("~(n * 0 = 0) \\/ (n * 0) + 0 = 0") ==
        "~(n * 0 = 0) \\/ n * 0 + 0 = 0");
  CHECK(parse_term(print_term(clause_term), th) == clause_term);
  CHECK(rt("~(a /\\ b)") == "~(a /\\ b)");
  CHECK(rt("~~a") == "~~a");
  CHECK(rt("(a ==> b) ==> c") == "(a ==> b) ==> c");
  CHECK(rt("PRE(SUC(m))") == "PRE(SUC(m))");
  CHECK(rt("EXP(m, 2)") == "m EXP SUC(SUC(0))");
}

TEST_CASE("print_clause joins literals with disjunction") {
  const Theory& th = ts::peano();
  Clause c = ts::cl(th, {"~(m = 0)", "EVEN(m)"});
  CHECK(print_clause(c) == "~(m = 0) \\/ EVEN(m)");
  Clause single = ts::cl(th, {"EVEN(m)"});
  CHECK(print_clause(single) == "EVEN(m)");
}

TEST_CASE("parse then print round-trips random terms") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ts::TermGen gen(ts::lists(), seed ^ 0x5171ceULL);
    for (int i = 0; i < 10; ++i) {
      Term t = gen.formula(4);
      std::map<std::string, Sort> vars;
      for (const VarInfo& v : free_vars(t)) vars[v.name] = v.sort;
      Term back = parse_term(print_term(t), ts::lists(), vars);
      CHECK(back == t);
    }
  }
}

TEST_CASE("print_theory emits re-parsable canonical text") {
  ParsedTheory pt = parse_theory(std::string(ts::lists_text()) +
                                 "\nconjecture \"rev_rev\" REVERSE(REVERSE(x)) = x;\n");
  std::string text1 = print_theory(pt);
  ParsedTheory pt2 = parse_theory(text1);
  CHECK(print_theory(pt2) == text1);  // printing reaches a fixpoint immediately
  REQUIRE(pt2.conjectures.size() == 1);
  CHECK(pt2.conjectures[0].first == "rev_rev");
  CHECK(pt2.conjectures[0].second == pt.conjectures[0].second);
  CHECK(pt2.theory.fns().size() == pt.theory.fns().size());
  CHECK(pt2.theory.rules().size() == pt.theory.rules().size());
}

TEST_CASE("comments and layout are ignored") {
  ParsedTheory pt = parse_theory(R"(
# leading comment
shell num { bottom 0; con SUC(num) accessors (PRE); }  # trailing
conjecture "c" # mid-statement comment
  SUC(m) = SUC(m);
)");
  REQUIRE(pt.conjectures.size() == 1);
  CHECK(print_term(pt.conjectures[0].second) == "SUC(m) = SUC(m)");
}

TEST_CASE("a theory can extend a previously parsed base") {
  ParsedTheory base = parse_theory(ts::peano_text());
  ParsedTheory ext = parse_theory("rewrite ~ODD(n) <=> EVEN(n);", base.theory);
  CHECK(ext.theory.rules().size() == base.theory.rules().size() + 1);
  const RewriteRule& r = ext.theory.rules().back();
  CHECK(print_term(r.lhs) == "~ODD(n)");
  CHECK(print_term(r.rhs) == "EVEN(n)");
}
