#pragma once

// Simplification engines.
//
// Both engines rewrite innermost-first to a normal form using, in order:
// built-in logical reductions (truth-value folding, the collapsing
// conditional, reflexivity, shell distinctness and injectivity), shell
// accessor equations, user rewrite rules (conditional rules fire when the
// instantiated condition rewrites to T; permutative rules fire only downhill
// in a fixed term order), and function definition equations. Definition
// equations self-gate by their constructor patterns, so they unfold exactly
// when the recursive argument is constructor- or bottom-headed.
//
// The engines differ at the clause level: the `bm` engine removes duplicate
// literals and proves clauses containing complementary literals; the `full`
// engine leaves both jobs to the dedicated tautology and setify heuristics.
//
// num_reduce evaluates ground arithmetic over the conventional num symbols in
// one step each; it serves the counterexample evaluator, not the waterfall.

#include <cstdint>
#include <optional>

#include "bmtp/theory.hpp"

namespace bmtp {

struct FuelExhausted : Error {
  FuelExhausted() : Error("rewrite fuel exhausted (suspected rewrite loop)") {}
};

enum class Engine { bm, full };

inline const char* engine_name(Engine e) { return e == Engine::bm ? "bm" : "full"; }

// ---------------------------------------------------------------------------
// Term order gate for permutative rules: fire only if the instantiated
// right-hand side is strictly smaller than the instantiated left-hand side.

inline bool permutative_ok(const RewriteRule& rule, const Bindings& b,
                           const Theory& th) {
  Term l = apply_bindings(rule.lhs, b);
  Term r = apply_bindings(rule.rhs, b);
  return th.term_compare(r, l) < 0;
}

// ---------------------------------------------------------------------------
// Single root-step reductions.

namespace rewrite_detail {

inline std::optional<Term> builtin_fold(const Term& t, const Theory& th) {
  if (is_not(t)) {
    const Term& a = t.args()[0];
    if (is_truth(a)) return falsity();
    if (is_falsity(a)) return truth();
    if (is_not(a)) return a.args()[0];
    return std::nullopt;
  }
  if (is_or(t)) {
    const Term &a = t.args()[0], &b = t.args()[1];
    if (is_truth(a) || is_truth(b)) return truth();
    if (is_falsity(a)) return b;
    if (is_falsity(b)) return a;
    return std::nullopt;
  }
  if (is_and(t)) {
    const Term &a = t.args()[0], &b = t.args()[1];
    if (is_falsity(a) || is_falsity(b)) return falsity();
    if (is_truth(a)) return b;
    if (is_truth(b)) return a;
    return std::nullopt;
  }
  if (is_imp(t)) {
    const Term &a = t.args()[0], &b = t.args()[1];
    if (is_falsity(a) || is_truth(b)) return truth();
    if (is_truth(a)) return b;
    if (is_falsity(b)) return mk_not(a);
    return std::nullopt;
  }
  if (is_iff(t)) {
    const Term &a = t.args()[0], &b = t.args()[1];
    if (a == b) return truth();
    if (is_truth(a)) return b;
    if (is_truth(b)) return a;
    if (is_falsity(a)) return mk_not(b);
    if (is_falsity(b)) return mk_not(a);
    return std::nullopt;
  }
  if (is_ite(t)) {
    const Term &c = t.args()[0], &a = t.args()[1], &b = t.args()[2];
    if (is_truth(c)) return a;
    if (is_falsity(c)) return b;
    if (a == b) return a;  // the collapsing conditional
    return std::nullopt;
  }
  if (is_eq(t)) {
    const Term &a = t.args()[0], &b = t.args()[1];
    if (a == b) return truth();
    bool ca = a.is_app() && th.is_constructor_symbol(a.name());
    bool cb = b.is_app() && th.is_constructor_symbol(b.name());
    if (ca && cb) {
      if (a.name() != b.name()) return falsity();  // distinctness
      // Injectivity: componentwise equality.
      if (a.arity() == 0) return truth();
      Term acc = mk_eq(a.args()[0], b.args()[0]);
      for (std::size_t i = 1; i < a.arity(); ++i)
        acc = mk_and(acc, mk_eq(a.args()[i], b.args()[i]));
      return acc;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace rewrite_detail

// ---------------------------------------------------------------------------
// Exhaustive innermost rewriting. Throws FuelExhausted when the shared step
// budget runs out; every successful root step costs one unit.

class Rewriter {
 public:
  Rewriter(const Theory& th, Engine engine, std::uint64_t fuel)
      : th_(th), engine_(engine), fuel_(fuel) {}

  Term normal_form(const Term& t) {
    if (t.is_var()) return t;
    Term cur = t;
    if (!cur.args().empty()) {
      TermList args;
      args.reserve(cur.arity());
      bool changed = false;
      for (const Term& a : cur.args()) {
        Term n = normal_form(a);
        if (n != a) changed = true;
        args.push_back(std::move(n));
      }
      if (changed) cur = Term::app(cur.name(), cur.sort(), std::move(args));
    }
    std::optional<Term> stepped = root_step(cur);
    if (!stepped) return cur;
    spend();
    return normal_form(*stepped);
  }

  std::uint64_t steps_used() const { return used_; }
  std::uint64_t fuel_left() const { return fuel_; }

 private:
  void spend() {
    if (fuel_ == 0) throw FuelExhausted();
    --fuel_;
    ++used_;
  }

  std::optional<Term> root_step(const Term& t) {
    if (auto r = rewrite_detail::builtin_fold(t, th_)) return r;
    for (const RewriteRule& rule : th_.shell_rules())
      if (auto b = match_pattern(rule.lhs, t))
        return apply_bindings(rule.rhs, *b);
    for (const RewriteRule& rule : th_.rules()) {
      auto b = match_pattern(rule.lhs, t);
      if (!b) continue;
      if (rule.permutative && !permutative_ok(rule, *b, th_)) continue;
      if (rule.condition) {
        Term cond = apply_bindings(*rule.condition, *b);
        if (!is_truth(normal_form(cond))) continue;
      }
      return apply_bindings(rule.rhs, *b);
    }
    if (t.is_app()) {
      if (const FnDef* def = th_.fn(t.name())) {
        for (const DefEq& e : def->equations)
          if (auto b = match_pattern(e.lhs, t))
            return apply_bindings(e.rhs, *b);
      }
    }
    return std::nullopt;
  }

  const Theory& th_;
  Engine engine_;
  std::uint64_t fuel_;
  std::uint64_t used_ = 0;
};

// ---------------------------------------------------------------------------
// Clause-level simplification.

inline constexpr std::uint64_t kDefaultFuel = 10000;

struct SimplifyOutcome {
  enum class Status { Unchanged, Changed, True_, False_ };
  Status status = Status::Unchanged;
  Clause clause;  // meaningful only for Changed
};

inline SimplifyOutcome simplify_clause(const Clause& c, const Theory& th,
                                       Engine engine,
                                       std::uint64_t fuel = kDefaultFuel) {
  Rewriter rw(th, engine, fuel);
  TermList lits;
  bool changed = false;
  for (const Term& lit : c.literals) {
    Term nf = rw.normal_form(lit);
    if (nf != lit) changed = true;
    if (is_truth(nf)) return {SimplifyOutcome::Status::True_, {}};
    if (is_falsity(nf)) {
      changed = true;
      continue;  // a false disjunct vanishes
    }
    lits.push_back(std::move(nf));
  }
  if (lits.empty()) return {SimplifyOutcome::Status::False_, {}};
  if (engine == Engine::bm) {
    // Duplicate-literal removal.
    TermList dedup;
    for (const Term& l : lits) {
      bool seen = false;
      for (const Term& k : dedup)
        if (k == l) {
          seen = true;
          break;
        }
      if (!seen) dedup.push_back(l);
    }
    if (dedup.size() != lits.size()) {
      changed = true;
      lits = std::move(dedup);
    }
    // Complementary literals make the disjunction true.
    for (const Term& l : lits)
      for (const Term& k : lits)
        if (is_not(l) && l.args()[0] == k)
          return {SimplifyOutcome::Status::True_, {}};
  }
  if (!changed) return {SimplifyOutcome::Status::Unchanged, {}};
  return {SimplifyOutcome::Status::Changed,
          Clause(std::move(lits), c.from_induction_step, c.origin)};
}

// Optional-result wrappers: empty result when nothing changed; a proved
// clause comes back as [T], a refuted one as [F].
inline std::optional<Clause> simplify_bm(const Clause& c, const Theory& th,
                                         std::uint64_t fuel = kDefaultFuel) {
  SimplifyOutcome r = simplify_clause(c, th, Engine::bm, fuel);
  switch (r.status) {
    case SimplifyOutcome::Status::Unchanged: return std::nullopt;
    case SimplifyOutcome::Status::True_:
      return Clause({truth()}, c.from_induction_step, c.origin);
    case SimplifyOutcome::Status::False_:
      return Clause({falsity()}, c.from_induction_step, c.origin);
    case SimplifyOutcome::Status::Changed: return r.clause;
  }
  return std::nullopt;
}

inline std::optional<Clause> simplify_full(const Clause& c, const Theory& th,
                                           std::uint64_t fuel = kDefaultFuel) {
  SimplifyOutcome r = simplify_clause(c, th, Engine::full, fuel);
  switch (r.status) {
    case SimplifyOutcome::Status::Unchanged: return std::nullopt;
    case SimplifyOutcome::Status::True_:
      return Clause({truth()}, c.from_induction_step, c.origin);
    case SimplifyOutcome::Status::False_:
      return Clause({falsity()}, c.from_induction_step, c.origin);
    case SimplifyOutcome::Status::Changed: return r.clause;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// One-step ground arithmetic over the conventional num vocabulary.

namespace rewrite_detail {

inline std::optional<std::uint64_t> checked_pow(std::uint64_t base,
                                                std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > (1ull << 32)) return std::nullopt;  // keep terms sane
    r *= base;
  }
  return r;
}

inline Term num_reduce_walk(const Term& t) {
  if (t.is_var() || t.args().empty()) return t;
  TermList args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    Term r = num_reduce_walk(a);
    if (r != a) changed = true;
    args.push_back(std::move(r));
  }
  Term cur = changed ? Term::app(t.name(), t.sort(), std::move(args)) : t;

  auto val = [&](std::size_t i) { return numeral_value(cur.args()[i]); };
  const std::string& f = cur.name();
  if (cur.arity() == 2) {
    auto a = val(0), b = val(1);
    if (a && b) {
      if (f == "PLUS") return make_numeral(*a + *b);
      if (f == "MULT") return make_numeral(*a * *b);
      if (f == "SUB") return make_numeral(*a > *b ? *a - *b : 0);
      if (f == "EXP") {
        if (auto p = checked_pow(*a, *b)) return make_numeral(*p);
        return cur;
      }
      if (f == "LE") return *a <= *b ? truth() : falsity();
      if (f == "LT") return *a < *b ? truth() : falsity();
      if (f == kEq && cur.args()[0].sort() == kNumSort)
        return *a == *b ? truth() : falsity();
    }
  }
  if (cur.arity() == 1 && f == "PRE") {
    if (auto a = val(0)) return make_numeral(*a > 0 ? *a - 1 : 0);
  }
  return cur;
}

}  // namespace rewrite_detail

// Empty result when no arithmetic subterm reduced.
inline std::optional<Term> num_reduce(const Term& t) {
  Term r = rewrite_detail::num_reduce_walk(t);
  if (r == t) return std::nullopt;
  return r;
}

}  // namespace bmtp
