#pragma once

// Waterfall heuristics. Every heuristic consumes one clause and reports one
// of four outcomes: the clause is proved, replaced by new clauses (which are
// poured over the waterfall again), disproved (aborting the whole attempt),
// or untouched (the next heuristic gets its turn).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmtp/rewrite.hpp"
#include "bmtp/theory.hpp"

namespace bmtp {

struct HeuristicOutcome {
  enum class Kind { Proved, Replaced, Disproved, Failed };
  Kind kind = Kind::Failed;
  std::vector<Clause> clauses;  // for Replaced
  std::string note;             // human-readable detail for traces

  static HeuristicOutcome proved() { return {Kind::Proved, {}, ""}; }
  static HeuristicOutcome failed(std::string note = "") {
    return {Kind::Failed, {}, std::move(note)};
  }
  static HeuristicOutcome disproved(std::string note) {
    return {Kind::Disproved, {}, std::move(note)};
  }
  static HeuristicOutcome replaced(std::vector<Clause> cs) {
    return {Kind::Replaced, std::move(cs), ""};
  }
};

namespace heur_detail {

inline bool is_connective(const Term& t) {
  return is_not(t) || is_or(t) || is_and(t) || is_imp(t) || is_iff(t);
}

// Rewrites reflexive equalities and equivalences to T, everywhere.
inline Term fold_reflexive(const Term& t) {
  if ((is_eq(t) || is_iff(t)) && t.args()[0] == t.args()[1]) return truth();
  if (t.is_var() || t.args().empty()) return t;
  TermList args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    Term r = fold_reflexive(a);
    if (r != a) changed = true;
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  Term rebuilt = Term::app(t.name(), t.sort(), std::move(args));
  if ((is_eq(rebuilt) || is_iff(rebuilt)) && rebuilt.args()[0] == rebuilt.args()[1])
    return truth();
  return rebuilt;
}

inline void collect_atoms(const Term& t, std::vector<Term>& atoms) {
  if (is_truth(t) || is_falsity(t)) return;
  if (is_connective(t)) {
    for (const Term& a : t.args()) collect_atoms(a, atoms);
    return;
  }
  for (const Term& a : atoms)
    if (a == t) return;
  atoms.push_back(t);
}

inline bool eval_prop(const Term& t, const std::vector<Term>& atoms,
                      unsigned mask) {
  if (is_truth(t)) return true;
  if (is_falsity(t)) return false;
  if (is_not(t)) return !eval_prop(t.args()[0], atoms, mask);
  if (is_or(t))
    return eval_prop(t.args()[0], atoms, mask) ||
           eval_prop(t.args()[1], atoms, mask);
  if (is_and(t))
    return eval_prop(t.args()[0], atoms, mask) &&
           eval_prop(t.args()[1], atoms, mask);
  if (is_imp(t))
    return !eval_prop(t.args()[0], atoms, mask) ||
           eval_prop(t.args()[1], atoms, mask);
  if (is_iff(t))
    return eval_prop(t.args()[0], atoms, mask) ==
           eval_prop(t.args()[1], atoms, mask);
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] == t) return (mask >> i) & 1u;
  throw Error("internal: unregistered atom in truth table");
}

}  // namespace heur_detail

// ---------------------------------------------------------------------------
// Tautology: propositional validity over opaque atoms. Proved or Failed only.

inline constexpr std::size_t kMaxTautologyAtoms = 20;

inline HeuristicOutcome tautology(const Clause& c) {
  using namespace heur_detail;
  Term formula = fold_reflexive(clause_term(c));
  std::vector<Term> atoms;
  collect_atoms(formula, atoms);
  if (atoms.size() > kMaxTautologyAtoms)
    return HeuristicOutcome::failed("too many distinct atoms");
  unsigned count = 1u << atoms.size();
  for (unsigned mask = 0; mask < count; ++mask)
    if (!eval_prop(formula, atoms, mask)) return HeuristicOutcome::failed();
  return HeuristicOutcome::proved();
}

// ---------------------------------------------------------------------------
// Clausal form: negation normal form, then distribute \/ over /\ .
// No literal deduplication here; that is the setify heuristic's job.

namespace heur_detail {

inline Term nnf(const Term& t, bool negate);

inline Term nnf_pos(const Term& t) { return nnf(t, false); }
inline Term nnf_neg(const Term& t) { return nnf(t, true); }

inline Term nnf(const Term& t, bool negate) {
  if (is_not(t)) return nnf(t.args()[0], !negate);
  if (is_or(t)) {
    Term a = t.args()[0], b = t.args()[1];
    return negate ? mk_and(nnf_neg(a), nnf_neg(b))
                  : mk_or(nnf_pos(a), nnf_pos(b));
  }
  if (is_and(t)) {
    Term a = t.args()[0], b = t.args()[1];
    return negate ? mk_or(nnf_neg(a), nnf_neg(b))
                  : mk_and(nnf_pos(a), nnf_pos(b));
  }
  if (is_imp(t)) {
    Term a = t.args()[0], b = t.args()[1];
    return negate ? mk_and(nnf_pos(a), nnf_neg(b))
                  : mk_or(nnf_neg(a), nnf_pos(b));
  }
  if (is_iff(t)) {
    Term a = t.args()[0], b = t.args()[1];
    if (negate)  // exactly one side holds
      return mk_and(mk_or(nnf_pos(a), nnf_pos(b)),
                    mk_or(nnf_neg(a), nnf_neg(b)));
    return mk_and(mk_or(nnf_neg(a), nnf_pos(b)),
                  mk_or(nnf_neg(b), nnf_pos(a)));
  }
  // Atom (equalities, conditionals, truth values, applications).
  return negate ? mk_not(t) : t;
}

inline std::vector<TermList> cnf_of(const Term& t) {
  if (is_and(t)) {
    std::vector<TermList> a = cnf_of(t.args()[0]);
    std::vector<TermList> b = cnf_of(t.args()[1]);
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  if (is_or(t)) {
    std::vector<TermList> a = cnf_of(t.args()[0]);
    std::vector<TermList> b = cnf_of(t.args()[1]);
    std::vector<TermList> out;
    out.reserve(a.size() * b.size());
    for (const TermList& ca : a)
      for (const TermList& cb : b) {
        TermList merged = ca;
        merged.insert(merged.end(), cb.begin(), cb.end());
        out.push_back(std::move(merged));
      }
    return out;
  }
  return {{t}};
}

inline bool literal_is_cnf(const Term& l) {
  const Term& atom = is_not(l) ? l.args()[0] : l;
  return !is_connective(atom);
}

}  // namespace heur_detail

inline HeuristicOutcome clausal_form(const Clause& c) {
  using namespace heur_detail;
  bool already = true;
  for (const Term& l : c.literals)
    if (!literal_is_cnf(l)) {
      already = false;
      break;
    }
  if (already) return HeuristicOutcome::failed();
  std::vector<TermList> pieces;
  for (const Term& l : c.literals) {
    // The clause is a disjunction, so the literal CNFs are OR-combined.
    std::vector<TermList> lc = cnf_of(nnf_pos(l));
    if (pieces.empty()) {
      pieces = std::move(lc);
      continue;
    }
    std::vector<TermList> out;
    out.reserve(pieces.size() * lc.size());
    for (const TermList& a : pieces)
      for (const TermList& b : lc) {
        TermList merged = a;
        merged.insert(merged.end(), b.begin(), b.end());
        out.push_back(std::move(merged));
      }
    pieces = std::move(out);
  }
  std::vector<Clause> clauses;
  clauses.reserve(pieces.size());
  for (TermList& lits : pieces)
    clauses.emplace_back(std::move(lits), c.from_induction_step, "cnf");
  return HeuristicOutcome::replaced(std::move(clauses));
}

// ---------------------------------------------------------------------------
// Setify: drop duplicate literals.

inline HeuristicOutcome setify_heuristic(const Clause& c) {
  std::optional<Clause> r = clause_setify(c);
  if (!r) return HeuristicOutcome::failed();
  r->origin = "setify";
  return HeuristicOutcome::replaced({std::move(*r)});
}

// ---------------------------------------------------------------------------
// Substitution: eliminate the first negated equality between a variable and a
// term not containing it; the variable is substituted everywhere.

inline HeuristicOutcome substitution(const Clause& c) {
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    const Term& lit = c.literals[i];
    if (!is_not(lit) || !is_eq(lit.args()[0])) continue;
    const Term& a = lit.args()[0].args()[0];
    const Term& b = lit.args()[0].args()[1];
    const Term* x = nullptr;
    const Term* t = nullptr;
    if (a.is_var() && !occurs_var(b, a.name())) {
      x = &a;
      t = &b;
    } else if (b.is_var() && !occurs_var(a, b.name())) {
      x = &b;
      t = &a;
    } else {
      continue;
    }
    Bindings bind{{x->name(), *t}};
    TermList lits;
    for (std::size_t j = 0; j < c.literals.size(); ++j) {
      if (j == i) continue;  // the used literal becomes F and is dropped
      lits.push_back(apply_bindings(c.literals[j], bind));
    }
    if (lits.empty()) lits.push_back(falsity());
    return HeuristicOutcome::replaced(
        {Clause(std::move(lits), c.from_induction_step, "subst")});
  }
  return HeuristicOutcome::failed();
}

// ---------------------------------------------------------------------------
// Simplification wrapper around the rewrite engines.

inline HeuristicOutcome simplify_heuristic(const Clause& c, const Theory& th,
                                           Engine engine,
                                           std::uint64_t fuel = kDefaultFuel) {
  SimplifyOutcome r;
  try {
    r = simplify_clause(c, th, engine, fuel);
  } catch (const FuelExhausted&) {
    return HeuristicOutcome::failed("rewrite fuel exhausted");
  }
  switch (r.status) {
    case SimplifyOutcome::Status::True_: return HeuristicOutcome::proved();
    case SimplifyOutcome::Status::False_:
      return HeuristicOutcome::disproved("simplified to F");
    case SimplifyOutcome::Status::Unchanged: return HeuristicOutcome::failed();
    case SimplifyOutcome::Status::Changed: {
      r.clause.origin = "simp";
      return HeuristicOutcome::replaced({std::move(r.clause)});
    }
  }
  return HeuristicOutcome::failed();
}

// ---------------------------------------------------------------------------
// Cross-fertilization: use a negated equality whose non-template side occurs
// in the remaining literals; that side is replaced by the other side there.
// Clauses descending from an induction step drop the used literal; others
// keep it.

inline HeuristicOutcome equality(const Clause& c, const Theory& th) {
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    const Term& lit = c.literals[i];
    if (!is_not(lit) || !is_eq(lit.args()[0])) continue;
    const Term& s = lit.args()[0].args()[0];
    const Term& t = lit.args()[0].args()[1];
    bool s_tmpl = th.is_explicit_value_template(s);
    bool t_tmpl = th.is_explicit_value_template(t);
    if (s_tmpl && t_tmpl) continue;

    auto occurs_elsewhere = [&](const Term& side) {
      for (std::size_t j = 0; j < c.literals.size(); ++j)
        if (j != i && contains_subterm(c.literals[j], side)) return true;
      return false;
    };

    // Cross-fertilization rewrites only part of a target equation: one side
    // (the right one when possible) receives the substitution. Rewriting both
    // sides would re-grow the term the hypothesis relates on the side that
    // already matches it, burying the connection instead of using it.
    auto fertilize = [](const Term& lit, const Term& from, const Term& to) {
      if (is_eq(lit)) {
        const Term& p = lit.args()[0];
        const Term& q = lit.args()[1];
        if (contains_subterm(q, from))
          return mk_eq(p, replace_subterm(q, from, to));
        return mk_eq(replace_subterm(p, from, to), q);
      }
      return replace_subterm(lit, from, to);
    };

    // Preferred direction: replace the non-template side by the other side;
    // when both qualify, replace the left by the right.
    std::vector<std::pair<const Term*, const Term*>> directions;
    if (!s_tmpl) directions.push_back({&s, &t});
    if (!t_tmpl) directions.push_back({&t, &s});
    for (auto [from, to] : directions) {
      if (!occurs_elsewhere(*from)) continue;
      TermList lits;
      for (std::size_t j = 0; j < c.literals.size(); ++j) {
        if (j == i) {
          if (!c.from_induction_step) lits.push_back(c.literals[j]);
          continue;
        }
        lits.push_back(fertilize(c.literals[j], *from, *to));
      }
      if (lits.empty()) lits.push_back(falsity());
      return HeuristicOutcome::replaced(
          {Clause(std::move(lits), c.from_induction_step, "equal")});
    }
  }
  return HeuristicOutcome::failed();
}

// ---------------------------------------------------------------------------
// Irrelevance: split the clause into variable-connected partitions, drop the
// ones deemed falsifiable, refute the clause if every partition is.

namespace heur_detail {

inline bool contains_defined_fn(const Term& t, const Theory& th) {
  if (t.is_app()) {
    if (th.is_defined_fn(t.name())) return true;
    for (const Term& a : t.args())
      if (contains_defined_fn(a, th)) return true;
  }
  return false;
}

// A bare defined-function application to pairwise distinct variables asserts
// nothing the definitions can settle; deemed falsifiable. Negated
// applications do not qualify: refusing a predicate on arbitrary arguments is
// a real claim, and treating it as noise would refute valid goals such as
// irreflexivity or asymmetry statements.
inline bool bare_defined_app_on_distinct_vars(const Term& lit, const Theory& th) {
  const Term& atom = lit;
  if (!atom.is_app() || !th.is_defined_fn(atom.name())) return false;
  std::vector<std::string> names;
  for (const Term& a : atom.args()) {
    if (!a.is_var()) return false;
    for (const std::string& n : names)
      if (n == a.name()) return false;
    names.push_back(a.name());
  }
  return true;
}

}  // namespace heur_detail

inline HeuristicOutcome irrelevance(const Clause& c, const Theory& th) {
  using namespace heur_detail;
  std::size_t n = c.literals.size();
  // Union-find over literal indices, joined on shared variables.
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<VarInfo>> vars(n);
  for (std::size_t i = 0; i < n; ++i) collect_free_vars(c.literals[i], vars[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (const VarInfo& v : vars[i])
        if (std::find(vars[j].begin(), vars[j].end(), v) != vars[j].end()) {
          parent[find(i)] = find(j);
          break;
        }
  std::map<std::size_t, std::vector<std::size_t>> parts;
  for (std::size_t i = 0; i < n; ++i) parts[find(i)].push_back(i);

  std::vector<bool> drop(n, false);
  std::size_t falsifiable = 0;
  for (const auto& [root, members] : parts) {
    bool no_defined = true;
    for (std::size_t i : members)
      if (contains_defined_fn(c.literals[i], th)) no_defined = false;
    bool bare = members.size() == 1 &&
                bare_defined_app_on_distinct_vars(c.literals[members[0]], th);
    if (no_defined || bare) {
      ++falsifiable;
      for (std::size_t i : members) drop[i] = true;
    }
  }
  if (falsifiable == 0) return HeuristicOutcome::failed();
  if (falsifiable == parts.size())
    return HeuristicOutcome::disproved("every partition is falsifiable");
  TermList lits;
  for (std::size_t i = 0; i < n; ++i)
    if (!drop[i]) lits.push_back(c.literals[i]);
  return HeuristicOutcome::replaced(
      {Clause(std::move(lits), c.from_induction_step, "irrel")});
}

}  // namespace bmtp
