#pragma once

// Generalization algorithms.
//
//  * bm_generalize: abstract every minimal common subterm simultaneously,
//    optionally restricting the fresh variables with registered lemmas.
//  * aderhold_generalize: collect proposals from recursive argument positions
//    and equation sides, score them, abstract only the best proposal, and
//    remember it so the same clause family is never generalized twice the
//    same way.
//  * generalize_apart: rename some occurrences of a variable (at recursive
//    argument positions) to a fresh variable.
//
// Every produced clause is screened by the counterexample checker; rejected
// clauses count as over-generalizations and the next option is tried.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bmtp/disprove.hpp"
#include "bmtp/theory.hpp"

namespace bmtp {

struct GenMemory {
  std::set<std::string> keys;  // clause-family fingerprint + term fingerprint
};

namespace gen_detail {

// Common subterms worth abstracting: applications of non-boolean sort that
// are not explicit value templates and not accessor applications.
inline bool generalizable_bm(const Term& t, const Theory& th) {
  return t.is_app() && t.sort() != kBoolSort &&
         !th.is_explicit_value_template(t) && !th.is_accessor_symbol(t.name());
}

inline bool contains_proper_constructor(const Term& t, const Theory& th) {
  if (t.is_app() && t.arity() > 0 && th.is_constructor_symbol(t.name()) &&
      !th.is_bottom_symbol(t.name()))
    return true;
  for (const Term& a : t.args())
    if (contains_proper_constructor(a, th)) return true;
  return false;
}

// The stricter notion: additionally free of (non-bottom) constructors.
inline bool generalizable_ad(const Term& t, const Theory& th) {
  return generalizable_bm(t, th) && !contains_proper_constructor(t, th);
}

struct Occurrence {
  Term term;
  std::size_t count = 0;
  bool both_sides = false;
  std::size_t first_pos = 0;
};

inline Clause abstract_in_clause(const Clause& c, const Term& from,
                                 const Term& fresh, const char* origin) {
  TermList lits;
  lits.reserve(c.literals.size());
  for (const Term& l : c.literals)
    lits.push_back(replace_subterm(l, from, fresh));
  return Clause(std::move(lits), c.from_induction_step, origin);
}

}  // namespace gen_detail

// ---------------------------------------------------------------------------
// Boyer-Moore common subterms.

inline std::vector<Term> bm_candidates(const Clause& c, const Theory& th) {
  using gen_detail::Occurrence;
  std::vector<Occurrence> occ;
  std::size_t pos = 0;
  for (const Term& lit : c.literals) {
    for_each_subterm(lit, [&](const Term& s, std::size_t) {
      ++pos;
      if (!gen_detail::generalizable_bm(s, th)) return;
      for (Occurrence& o : occ)
        if (o.term == s) {
          ++o.count;
          return;
        }
      occ.push_back({s, 1, false, pos});
    });
  }
  for (const Term& lit : c.literals) {
    const Term& atom = is_not(lit) ? lit.args()[0] : lit;
    if (!is_eq(atom)) continue;
    const Term &a = atom.args()[0], &b = atom.args()[1];
    for (Occurrence& o : occ)
      if (contains_subterm(a, o.term) && contains_subterm(b, o.term))
        o.both_sides = true;
  }
  std::vector<Term> cands;
  for (const Occurrence& o : occ)
    if (o.count >= 2 || o.both_sides) cands.push_back(o.term);
  // Keep only minimal candidates: drop any that contains another candidate.
  std::vector<Term> minimal;
  for (const Term& t : cands) {
    bool contains_other = false;
    for (const Term& u : cands)
      if (!(t == u) && contains_subterm(t, u)) {
        contains_other = true;
        break;
      }
    if (!contains_other) minimal.push_back(t);
  }
  return minimal;
}

// Abstracts all minimal candidates at once. The recovery map sends each fresh
// variable back to the term it replaced.
inline std::optional<std::pair<Clause, Bindings>> bm_generalize(
    const Clause& c, const Theory& th) {
  std::vector<Term> cands = bm_candidates(c, th);
  if (cands.empty()) return std::nullopt;

  std::vector<VarInfo> taken = free_vars(c);
  std::vector<std::pair<Term, Term>> subst;  // candidate -> fresh var
  Bindings recovery;
  for (const Term& t : cands) {
    std::string name = fresh_name(sort_base_name(t.sort()), taken);
    taken.push_back({name, t.sort()});
    Term v = Term::var(name, t.sort());
    subst.push_back({t, v});
    recovery[name] = t;
  }

  // Registered lemmas matching a candidate become implication hypotheses.
  TermList hyps;
  for (const Term& lemma : th.generalization_lemmas()) {
    std::vector<VarInfo> lemma_vars = free_vars(lemma);
    for (const auto& [cand, fresh] : subst) {
      bool added = false;
      for_each_subterm(lemma, [&](const Term& p, std::size_t) {
        if (added || p.is_var()) return;
        auto b = match_pattern(p, cand);
        if (!b || b->size() != lemma_vars.size()) return;  // must cover lemma
        Term inst = apply_bindings(lemma, *b);
        for (const Term& h : hyps)
          if (h == inst) return;
        hyps.push_back(inst);
        added = true;
      });
    }
  }

  Clause out = c;
  out.origin = "gen";
  for (const auto& [cand, fresh] : subst)
    out = gen_detail::abstract_in_clause(out, cand, fresh, "gen");
  if (!hyps.empty()) {
    Term hyp = hyps[0];
    for (std::size_t i = 1; i < hyps.size(); ++i) hyp = mk_and(hyp, hyps[i]);
    Term body = clause_term(out);
    for (const auto& [cand, fresh] : subst)
      hyp = replace_subterm(hyp, cand, fresh);
    out = Clause({mk_imp(hyp, body)}, c.from_induction_step, "gen");
  }
  return std::make_pair(out, recovery);
}

// ---------------------------------------------------------------------------
// Aderhold common subterms.

struct Proposal {
  Term term;
  std::size_t times_proposed = 0;
  std::size_t occurrences = 0;
  bool induction_ok = false;
  std::size_t first_pos = 0;
};

namespace gen_detail {

inline void propose(std::vector<Proposal>& out, const Term& t,
                    std::size_t& pos) {
  for (Proposal& p : out)
    if (p.term == t) {
      ++p.times_proposed;
      return;
    }
  Proposal p;
  p.term = t;
  p.times_proposed = 1;
  p.first_pos = pos;
  out.push_back(std::move(p));
}

inline void collect_proposals(const Term& t, const Theory& th,
                              std::vector<Proposal>& out, std::size_t& pos) {
  ++pos;
  if (t.is_var()) return;
  if (is_eq(t)) {
    for (const Term& side : t.args())
      if (generalizable_ad(side, th)) propose(out, side, pos);
    for (const Term& side : t.args()) collect_proposals(side, th, out, pos);
    return;
  }
  if (is_not(t) || is_or(t) || is_and(t) || is_imp(t) || is_iff(t) ||
      is_ite(t)) {
    for (const Term& a : t.args()) collect_proposals(a, th, out, pos);
    return;
  }
  if (const FnDef* d = th.fn(t.name())) {
    if (d->rec_arg && *d->rec_arg < t.arity()) {
      const Term& ra = t.args()[*d->rec_arg];
      if (generalizable_ad(ra, th)) propose(out, ra, pos);
    }
    for (const Term& a : t.args()) collect_proposals(a, th, out, pos);
    return;
  }
  // Constructor and accessor applications are not investigated further.
}

// Every equation literal containing the term must host it on both sides or
// at least twice on one side.
inline bool equation_criterion_ok(const Clause& c, const Term& t) {
  for (const Term& lit : c.literals) {
    const Term& atom = is_not(lit) ? lit.args()[0] : lit;
    if (!is_eq(atom)) continue;
    std::size_t na = count_occurrences(atom.args()[0], t);
    std::size_t nb = count_occurrences(atom.args()[1], t);
    if (na + nb == 0) continue;
    if (!((na >= 1 && nb >= 1) || na >= 2 || nb >= 2)) return false;
  }
  return true;
}

}  // namespace gen_detail

inline std::vector<Proposal> aderhold_proposals(const Clause& c,
                                                const Theory& th,
                                                bool eq_criterion) {
  std::vector<Proposal> all;
  std::size_t pos = 0;
  for (const Term& lit : c.literals)
    gen_detail::collect_proposals(lit, th, all, pos);

  std::vector<Proposal> suitable;
  for (Proposal& p : all) {
    p.occurrences = count_occurrences(c, p.term);
    if (p.occurrences < 2) continue;
    if (eq_criterion && !gen_detail::equation_criterion_ok(c, p.term)) continue;
    // Would structural induction work on the fresh variable afterwards?
    Term probe = Term::var("@probe", p.term.sort());
    Clause abstracted = gen_detail::abstract_in_clause(c, p.term, probe, "gen");
    p.induction_ok = th.induction_test(abstracted, "@probe");
    suitable.push_back(p);
  }
  std::stable_sort(suitable.begin(), suitable.end(),
                   [](const Proposal& a, const Proposal& b) {
                     if (a.induction_ok != b.induction_ok) return a.induction_ok;
                     if (a.times_proposed != b.times_proposed)
                       return a.times_proposed > b.times_proposed;
                     if (a.occurrences != b.occurrences)
                       return a.occurrences > b.occurrences;
                     if (a.term.size() != b.term.size())
                       return a.term.size() < b.term.size();
                     return a.first_pos < b.first_pos;
                   });
  return suitable;
}

// Applies the single best proposal that survives the counterexample checker
// and has not been used on this clause family before.
inline std::optional<std::pair<Clause, Bindings>> aderhold_generalize(
    const Clause& c, const Theory& th, bool eq_criterion, GenMemory& mem,
    const Disprover& dp, std::size_t& vetoes) {
  std::string family = family_key(c);
  for (const Proposal& p : aderhold_proposals(c, th, eq_criterion)) {
    std::string key = family + "\x01" + alpha_key(p.term);
    if (mem.keys.count(key)) continue;
    std::vector<VarInfo> taken = free_vars(c);
    std::string name = fresh_name(sort_base_name(p.term.sort()), taken);
    Term fresh = Term::var(name, p.term.sort());
    Clause out = gen_detail::abstract_in_clause(c, p.term, fresh, "gen");
    if (bmtp::check(out, dp).kind == Verdict::Kind::Survived) {
      mem.keys.insert(key);
      Bindings recovery{{name, p.term}};
      return std::make_pair(out, recovery);
    }
    ++vetoes;  // rejected or undecided: the safe option is to refuse
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generalizing variables apart.

namespace gen_detail {

struct ApartPair {
  std::string fn;
  std::string var;
  Sort sort;
  std::size_t rec_arg;
};

// Renames v at the recursive-immediate argument of maximal f-applications
// (those not nested inside another f-application).
inline Term apart_phase1(const Term& t, const ApartPair& p, const Term& fresh,
                         bool in_f, bool nonrec_positions) {
  if (t.is_var()) return t;
  bool is_f = t.is_app() && t.name() == p.fn;
  bool maximal = is_f && !in_f;
  TermList args;
  args.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const Term& a = t.args()[i];
    bool rename_here =
        maximal && a.is_var() && a.name() == p.var &&
        (nonrec_positions ? i != p.rec_arg : i == p.rec_arg);
    if (rename_here) {
      args.push_back(fresh);
      continue;
    }
    args.push_back(
        apart_phase1(a, p, fresh, in_f || is_f, nonrec_positions));
  }
  return Term::app(t.name(), t.sort(), std::move(args));
}

// Full descent: follow only the recursive argument of defined functions,
// every argument elsewhere; rename v wherever it is reached.
inline Term apart_phase2(const Term& t, const ApartPair& p, const Term& fresh,
                         const Theory& th) {
  if (t.is_var())
    return (t.name() == p.var) ? fresh : t;
  if (t.args().empty()) return t;
  const FnDef* d = th.fn(t.name());
  TermList args;
  args.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const Term& a = t.args()[i];
    if (d && d->rec_arg && i != *d->rec_arg) {
      args.push_back(a);
      continue;
    }
    args.push_back(apart_phase2(a, p, fresh, th));
  }
  return Term::app(t.name(), t.sort(), std::move(args));
}

inline std::size_t count_var(const Term& t, const std::string& name) {
  std::size_t n = 0;
  for_each_subterm(t, [&](const Term& s, std::size_t) {
    if (s.is_var() && s.name() == name) ++n;
  });
  return n;
}

// A region (equation side) counts as generalized apart successfully when it
// became the fresh variable outright or kept some original occurrences while
// losing others.
inline bool side_ok(const Term& orig, const Term& renamed,
                    const std::string& v, const std::string& fresh) {
  if (count_var(orig, v) == 0) return true;
  if (renamed.is_var() && renamed.name() == fresh) return true;
  return count_var(renamed, fresh) >= 1 && count_var(renamed, v) >= 1;
}

// Maximal applications of fn (not nested inside another fn application),
// walked in lockstep over the original and renamed literal. Renaming never
// changes the tree shape, so the two terms stay congruent.
inline void maximal_fn_apps(
    const Term& a, const Term& b, const std::string& fn, bool in_fn,
    std::vector<std::pair<const Term*, const Term*>>& out) {
  bool is_fn = a.is_app() && a.name() == fn;
  if (is_fn && !in_fn) out.push_back({&a, &b});
  for (std::size_t i = 0; i < a.arity(); ++i)
    maximal_fn_apps(a.args()[i], b.args()[i], fn, in_fn || is_fn, out);
}

inline bool apart_useful(const Clause& orig, const Clause& renamed,
                         const std::string& fn, const std::string& v,
                         const std::string& fresh) {
  std::size_t total_fresh = 0, total_orig = 0;
  for (const Term& l : renamed.literals) {
    total_fresh += count_var(l, fresh);
    total_orig += count_var(l, v);
  }
  if (total_fresh == 0 || total_orig == 0) return false;
  // Each application of the trigger function must keep part of the variable:
  // renaming every occurrence inside one application does not split anything
  // apart there, it merely severs that application from the rest.
  for (std::size_t i = 0; i < orig.literals.size(); ++i) {
    std::vector<std::pair<const Term*, const Term*>> apps;
    maximal_fn_apps(orig.literals[i], renamed.literals[i], fn, false, apps);
    for (const auto& [oa, ra] : apps) {
      if (count_var(*oa, v) == 0) continue;
      if (count_var(*ra, fresh) == 0 || count_var(*ra, v) == 0) return false;
    }
  }
  for (std::size_t i = 0; i < orig.literals.size(); ++i) {
    const Term& la = orig.literals[i];
    const Term& lb = renamed.literals[i];
    const Term& atom_a = is_not(la) ? la.args()[0] : la;
    const Term& atom_b = is_not(lb) ? lb.args()[0] : lb;
    if (!is_eq(atom_a) || !is_eq(atom_b)) continue;
    for (std::size_t k = 0; k < 2; ++k)
      if (!side_ok(atom_a.args()[k], atom_b.args()[k], v, fresh)) return false;
  }
  return true;
}

// Phase-1 driver with the per-region repair: a literal (or equation side)
// that contains v but received no renames gets a second chance at the
// non-recursive immediate positions.
inline Clause apart_phase1_clause(const Clause& c, const ApartPair& p,
                                  const Term& fresh) {
  auto do_region = [&](const Term& region) {
    Term r = apart_phase1(region, p, fresh, false, false);
    if (count_var(r, fresh.name()) == 0 && count_var(region, p.var) > 0)
      r = apart_phase1(region, p, fresh, false, true);
    return r;
  };
  TermList lits;
  for (const Term& lit : c.literals) {
    bool neg = is_not(lit);
    const Term& atom = neg ? lit.args()[0] : lit;
    Term out;
    if (is_eq(atom)) {
      out = mk_eq(do_region(atom.args()[0]), do_region(atom.args()[1]));
    } else {
      out = do_region(atom);
    }
    lits.push_back(neg ? mk_not(out) : out);
  }
  return Clause(std::move(lits), c.from_induction_step, "gen");
}

inline Clause apart_phase2_clause(const Clause& c, const ApartPair& p,
                                  const Term& fresh, const Theory& th) {
  TermList lits;
  for (const Term& lit : c.literals)
    lits.push_back(apart_phase2(lit, p, fresh, th));
  return Clause(std::move(lits), c.from_induction_step, "gen");
}

}  // namespace gen_detail

inline std::optional<std::pair<Clause, Bindings>> generalize_apart(
    const Clause& c, const Theory& th, const Disprover& dp,
    std::size_t& vetoes) {
  using gen_detail::ApartPair;
  // Candidate (function, variable) pairs: v sits at the recursive immediate
  // argument of one application and at a non-recursive immediate argument of
  // an application of the same function.
  std::vector<ApartPair> pairs;
  std::vector<ApartPair> nonrec_seen;
  for (const Term& lit : c.literals) {
    for_each_subterm(lit, [&](const Term& s, std::size_t) {
      if (!s.is_app()) return;
      const FnDef* d = th.fn(s.name());
      if (!d || !d->rec_arg || *d->rec_arg >= s.arity()) return;
      for (std::size_t i = 0; i < s.arity(); ++i) {
        const Term& a = s.args()[i];
        if (!a.is_var()) continue;
        ApartPair p{s.name(), a.name(), a.sort(), *d->rec_arg};
        auto& bucket = (i == *d->rec_arg) ? pairs : nonrec_seen;
        bool dup = false;
        for (const ApartPair& q : bucket)
          if (q.fn == p.fn && q.var == p.var) dup = true;
        if (!dup) bucket.push_back(p);
      }
    });
  }
  auto has_nonrec = [&](const ApartPair& p) {
    for (const ApartPair& q : nonrec_seen)
      if (q.fn == p.fn && q.var == p.var) return true;
    return false;
  };

  std::set<std::string> tried;
  std::string original = alpha_key(c);
  for (const ApartPair& p : pairs) {
    if (!has_nonrec(p)) continue;
    std::vector<VarInfo> taken = free_vars(c);
    std::string name = fresh_name(p.var, taken);
    Term fresh = Term::var(name, p.sort);
    Clause attempts[2] = {
        gen_detail::apart_phase1_clause(c, p, fresh),
        gen_detail::apart_phase2_clause(c, p, fresh, th),
    };
    for (const Clause& cand : attempts) {
      if (!gen_detail::apart_useful(c, cand, p.fn, p.var, name)) continue;
      std::string key = alpha_key(cand);
      if (key == original || !tried.insert(key).second) continue;
      if (bmtp::check(cand, dp).kind == Verdict::Kind::Survived) {
        Bindings recovery{{name, Term::var(p.var, p.sort)}};
        return std::make_pair(cand, recovery);
      }
      ++vetoes;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dispatcher.

enum class GenAlgo { bm, aderhold, aderhold_noeq, bm_apart, aderhold_apart };

inline std::optional<GenAlgo> gen_algo_from_token(const std::string& s) {
  if (s == "bm") return GenAlgo::bm;
  if (s == "aderhold") return GenAlgo::aderhold;
  if (s == "aderhold-noeq") return GenAlgo::aderhold_noeq;
  if (s == "bm+apart") return GenAlgo::bm_apart;
  if (s == "aderhold+apart") return GenAlgo::aderhold_apart;
  return std::nullopt;
}

inline const char* gen_algo_token(GenAlgo a) {
  switch (a) {
    case GenAlgo::bm: return "bm";
    case GenAlgo::aderhold: return "aderhold";
    case GenAlgo::aderhold_noeq: return "aderhold-noeq";
    case GenAlgo::bm_apart: return "bm+apart";
    case GenAlgo::aderhold_apart: return "aderhold+apart";
  }
  return "?";
}

struct GenOutcome {
  std::optional<Clause> clause;
  Bindings recovery;
  std::size_t vetoes = 0;
};

// Runs the configured algorithm; composite tokens fall back to generalizing
// variables apart when the primary algorithm produces nothing acceptable.
inline GenOutcome run_generalize(const Clause& c, const Theory& th,
                                 GenAlgo algo, bool eq_criterion,
                                 GenMemory& mem, const Disprover& dp) {
  GenOutcome out;
  bool primary_bm =
      algo == GenAlgo::bm || algo == GenAlgo::bm_apart;
  bool primary_ad = algo == GenAlgo::aderhold ||
                    algo == GenAlgo::aderhold_noeq ||
                    algo == GenAlgo::aderhold_apart;
  bool with_apart = algo == GenAlgo::bm_apart || algo == GenAlgo::aderhold_apart;
  bool eq_crit = eq_criterion && algo != GenAlgo::aderhold_noeq;

  if (primary_bm) {
    if (auto r = bm_generalize(c, th)) {
      if (bmtp::check(r->first, dp).kind == Verdict::Kind::Survived) {
        out.clause = std::move(r->first);
        out.recovery = std::move(r->second);
        return out;
      }
      ++out.vetoes;
    }
  }
  if (primary_ad) {
    if (auto r = aderhold_generalize(c, th, eq_crit, mem, dp, out.vetoes)) {
      out.clause = std::move(r->first);
      out.recovery = std::move(r->second);
      return out;
    }
  }
  if (with_apart) {
    if (auto r = generalize_apart(c, th, dp, out.vetoes)) {
      out.clause = std::move(r->first);
      out.recovery = std::move(r->second);
      return out;
    }
  }
  return out;
}

}  // namespace bmtp
