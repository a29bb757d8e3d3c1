#pragma once

// Core term language: immutable first-order terms, clauses, matching,
// substitution, structural measures, and canonical fingerprints.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bmtp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Sort = std::string;
inline const Sort kBoolSort = "bool";

class Term;
using TermList = std::vector<Term>;

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}
inline std::uint64_t hash_str(const std::string& s, std::uint64_t h) {
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
  return h;
}
}  // namespace detail

struct TermNode {
  enum class Kind { Var, App };
  Kind kind;
  std::string name;  // variable name, or applied symbol
  Sort sort;         // sort of the whole node
  TermList args;     // empty for variables and constants
  std::uint64_t hash = 0;
  std::uint32_t size = 1;  // node count
};

// Immutable value wrapper; cheap to copy and share across threads.
class Term {
 public:
  Term() = default;  // invalid (null) term, only as an out-of-band marker

  static Term var(std::string name, Sort sort) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermNode::Kind::Var;
    n->name = std::move(name);
    n->sort = std::move(sort);
    n->size = 1;
    std::uint64_t h = detail::hash_str(n->name, 0x9e3779b97f4a7c15ull);
    h = detail::hash_str(n->sort, h ^ 0x711ull);
    n->hash = detail::mix64(h);
    return Term(std::move(n));
  }

  static Term app(std::string symbol, Sort sort, TermList args = {}) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermNode::Kind::App;
    n->name = std::move(symbol);
    n->sort = std::move(sort);
    n->args = std::move(args);
    std::uint32_t sz = 1;
    std::uint64_t h = detail::hash_str(n->name, 0xa0761d64ull);
    h = detail::hash_str(n->sort, h ^ 0x9e37ull);
    for (const Term& a : n->args) {
      h = detail::mix64(h ^ a.hash());
      sz += a.size();
    }
    n->hash = detail::mix64(h ^ n->args.size());
    n->size = sz;
    return Term(std::move(n));
  }

  bool valid() const { return node_ != nullptr; }
  bool is_var() const { return node_->kind == TermNode::Kind::Var; }
  bool is_app() const { return node_->kind == TermNode::Kind::App; }
  const std::string& name() const { return node_->name; }
  const Sort& sort() const { return node_->sort; }
  const TermList& args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  std::uint32_t size() const { return node_->size; }
  std::uint64_t hash() const { return node_->hash; }
  const TermNode* raw() const { return node_.get(); }

  bool operator==(const Term& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (node_->hash != o.node_->hash) return false;
    return structurally_equal(*node_, *o.node_);
  }
  bool operator!=(const Term& o) const { return !(*this == o); }

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  static bool structurally_equal(const TermNode& a, const TermNode& b) {
    if (a.kind != b.kind || a.name != b.name || a.sort != b.sort ||
        a.args.size() != b.args.size())
      return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!(a.args[i] == b.args[i])) return false;
    return true;
  }
  std::shared_ptr<const TermNode> node_;
};

// ---------------------------------------------------------------------------
// Reserved logical symbols.

inline const std::string kTrue = "T";
inline const std::string kFalse = "F";
inline const std::string kNot = "not";
inline const std::string kOr = "or";
inline const std::string kAnd = "and";
inline const std::string kImp = "imp";
inline const std::string kIff = "iff";
inline const std::string kEq = "eq";
inline const std::string kIte = "ite";

inline bool is_reserved_symbol(const std::string& s) {
  return s == kTrue || s == kFalse || s == kNot || s == kOr || s == kAnd ||
         s == kImp || s == kIff || s == kEq || s == kIte;
}

inline Term truth() { return Term::app(kTrue, kBoolSort); }
inline Term falsity() { return Term::app(kFalse, kBoolSort); }

inline bool is_truth(const Term& t) {
  return t.is_app() && t.name() == kTrue && t.arity() == 0;
}
inline bool is_falsity(const Term& t) {
  return t.is_app() && t.name() == kFalse && t.arity() == 0;
}
inline bool is_not(const Term& t) {
  return t.is_app() && t.name() == kNot && t.arity() == 1;
}
inline bool is_or(const Term& t) {
  return t.is_app() && t.name() == kOr && t.arity() == 2;
}
inline bool is_and(const Term& t) {
  return t.is_app() && t.name() == kAnd && t.arity() == 2;
}
inline bool is_imp(const Term& t) {
  return t.is_app() && t.name() == kImp && t.arity() == 2;
}
inline bool is_iff(const Term& t) {
  return t.is_app() && t.name() == kIff && t.arity() == 2;
}
inline bool is_eq(const Term& t) {
  return t.is_app() && t.name() == kEq && t.arity() == 2;
}
inline bool is_ite(const Term& t) {
  return t.is_app() && t.name() == kIte && t.arity() == 3;
}

inline Term mk_not(Term a) { return Term::app(kNot, kBoolSort, {std::move(a)}); }
inline Term mk_or(Term a, Term b) {
  return Term::app(kOr, kBoolSort, {std::move(a), std::move(b)});
}
inline Term mk_and(Term a, Term b) {
  return Term::app(kAnd, kBoolSort, {std::move(a), std::move(b)});
}
inline Term mk_imp(Term a, Term b) {
  return Term::app(kImp, kBoolSort, {std::move(a), std::move(b)});
}
inline Term mk_iff(Term a, Term b) {
  return Term::app(kIff, kBoolSort, {std::move(a), std::move(b)});
}
inline Term mk_eq(Term a, Term b) {
  if (a.sort() != b.sort())
    throw Error("eq requires both sides to share a sort: " + a.sort() +
                " vs " + b.sort());
  return Term::app(kEq, kBoolSort, {std::move(a), std::move(b)});
}
inline Term mk_ite(Term c, Term a, Term b) {
  Sort s = a.sort();
  return Term::app(kIte, std::move(s), {std::move(c), std::move(a), std::move(b)});
}

// Peels a single leading negation: returns (atom, was_negated).
inline std::pair<Term, bool> literal_atom(const Term& lit) {
  if (is_not(lit)) return {lit.args()[0], true};
  return {lit, false};
}

// ---------------------------------------------------------------------------
// Clause: ordered disjunction of boolean literals.

struct Clause {
  TermList literals;
  bool from_induction_step = false;
  std::string origin = "initial";

  Clause() = default;
  explicit Clause(TermList lits, bool step = false, std::string orig = "initial")
      : literals(std::move(lits)), from_induction_step(step), origin(std::move(orig)) {
    if (literals.empty()) throw Error("clause may not be empty; use the F literal");
  }
};

inline Term clause_term(const Clause& c) {
  Term t = c.literals.back();
  for (std::size_t i = c.literals.size() - 1; i-- > 0;)
    t = mk_or(c.literals[i], t);
  return t;
}

// ---------------------------------------------------------------------------
// Traversal helpers.

// Preorder visit of every subterm with its depth (root = 0).
template <typename Fn>
inline void for_each_subterm(const Term& t, Fn&& fn, std::size_t depth = 0) {
  fn(t, depth);
  for (const Term& a : t.args()) for_each_subterm(a, fn, depth + 1);
}

struct VarInfo {
  std::string name;
  Sort sort;
  bool operator==(const VarInfo& o) const {
    return name == o.name && sort == o.sort;
  }
  bool operator<(const VarInfo& o) const {
    return name != o.name ? name < o.name : sort < o.sort;
  }
};

// Variables of t in order of first (leftmost, outermost-first) occurrence.
inline void collect_free_vars(const Term& t, std::vector<VarInfo>& out) {
  for_each_subterm(t, [&](const Term& s, std::size_t) {
    if (s.is_var()) {
      VarInfo v{s.name(), s.sort()};
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  });
}

inline std::vector<VarInfo> free_vars(const Term& t) {
  std::vector<VarInfo> out;
  collect_free_vars(t, out);
  return out;
}

inline std::vector<VarInfo> free_vars(const Clause& c) {
  std::vector<VarInfo> out;
  for (const Term& l : c.literals) collect_free_vars(l, out);
  return out;
}

inline bool occurs_var(const Term& t, const std::string& name) {
  if (t.is_var()) return t.name() == name;
  for (const Term& a : t.args())
    if (occurs_var(a, name)) return true;
  return false;
}

inline bool contains_subterm(const Term& t, const Term& sub) {
  if (t == sub) return true;
  for (const Term& a : t.args())
    if (contains_subterm(a, sub)) return true;
  return false;
}

inline std::size_t count_occurrences(const Term& t, const Term& sub) {
  std::size_t n = (t == sub) ? 1 : 0;
  for (const Term& a : t.args()) n += count_occurrences(a, sub);
  return n;
}

inline std::size_t count_occurrences(const Clause& c, const Term& sub) {
  std::size_t n = 0;
  for (const Term& l : c.literals) n += count_occurrences(l, sub);
  return n;
}

// Replaces every occurrence of `from` in t by `to`.
inline Term replace_subterm(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  if (t.is_var() || t.args().empty()) return t;
  TermList args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    Term r = replace_subterm(a, from, to);
    if (r != a) changed = true;
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  return Term::app(t.name(), t.sort(), std::move(args));
}

// ---------------------------------------------------------------------------
// Structural measures.

// Depth of a variable occurrence = number of application nodes strictly above
// it (root at depth 0); maximum over all occurrences, 0 for ground terms.
inline std::size_t max_var_depth(const Term& t) {
  std::size_t best = 0;
  for_each_subterm(t, [&](const Term& s, std::size_t d) {
    if (s.is_var()) best = std::max(best, d);
  });
  return best;
}

// Clause measure: literal-wise maximum, so the bound does not depend on how
// many literals the clause happens to have.
inline std::size_t max_var_depth(const Clause& c) {
  std::size_t best = 0;
  for (const Term& l : c.literals) best = std::max(best, max_var_depth(l));
  return best;
}

// ---------------------------------------------------------------------------
// Bindings, substitution, matching.

using Bindings = std::map<std::string, Term>;

// Simultaneous substitution; variables without a binding are left untouched.
inline Term apply_bindings(const Term& t, const Bindings& b) {
  if (t.is_var()) {
    auto it = b.find(t.name());
    if (it == b.end()) return t;
    if (it->second.sort() != t.sort())
      throw Error("binding for " + t.name() + " has sort " + it->second.sort() +
                  ", expected " + t.sort());
    return it->second;
  }
  if (t.args().empty()) return t;
  TermList args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    Term r = apply_bindings(a, b);
    if (r != a) changed = true;
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  return Term::app(t.name(), t.sort(), std::move(args));
}

inline Clause apply_bindings(const Clause& c, const Bindings& b) {
  TermList lits;
  lits.reserve(c.literals.size());
  for (const Term& l : c.literals) lits.push_back(apply_bindings(l, b));
  return Clause(std::move(lits), c.from_induction_step, c.origin);
}

namespace detail {
inline bool match_into(const Term& pattern, const Term& subject, Bindings& b) {
  if (pattern.is_var()) {
    if (pattern.sort() != subject.sort()) return false;
    auto it = b.find(pattern.name());
    if (it != b.end()) return it->second == subject;  // nonlinear: must agree
    b.emplace(pattern.name(), subject);
    return true;
  }
  if (!subject.is_app() || pattern.name() != subject.name() ||
      pattern.sort() != subject.sort() || pattern.arity() != subject.arity())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_into(pattern.args()[i], subject.args()[i], b)) return false;
  return true;
}
}  // namespace detail

// One-way syntactic matching: on success, apply_bindings(pattern, b) == subject.
inline std::optional<Bindings> match_pattern(const Term& pattern,
                                             const Term& subject) {
  Bindings b;
  if (detail::match_into(pattern, subject, b)) return b;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonical keys and fingerprints.

// Exact syntactic serialization (stable across runs; usable as a map key).
inline void repr_into(const Term& t, std::string& out) {
  out += t.is_var() ? 'v' : 'a';
  out += t.name();
  out += ':';
  out += t.sort();
  if (t.is_app() && !t.args().empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i) out += ',';
      repr_into(t.args()[i], out);
    }
    out += ')';
  }
}

inline std::string term_repr(const Term& t) {
  std::string out;
  repr_into(t, out);
  return out;
}

namespace detail {
inline void alpha_into(const Term& t, std::string& out,
                       std::map<std::string, std::size_t>& numbering) {
  if (t.is_var()) {
    auto [it, fresh] = numbering.emplace(t.name(), numbering.size());
    out += '_';
    out += std::to_string(it->second);
    out += ':';
    out += t.sort();
    return;
  }
  out += t.name();
  out += ':';
  out += t.sort();
  if (!t.args().empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i) out += ',';
      alpha_into(t.args()[i], out, numbering);
    }
    out += ')';
  }
}
}  // namespace detail

// Serialization invariant under variable renaming: variables are numbered by
// first occurrence, sorts kept.
inline std::string alpha_key(const Term& t) {
  std::string out;
  std::map<std::string, std::size_t> numbering;
  detail::alpha_into(t, out, numbering);
  return out;
}

// Order-sensitive clause fingerprint modulo variable renaming.
inline std::string alpha_key(const Clause& c) {
  std::string out;
  std::map<std::string, std::size_t> numbering;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += '|';
    detail::alpha_into(c.literals[i], out, numbering);
  }
  return out;
}

// Order-insensitive fingerprint ("clause family"): literals are first sorted
// by their individual renaming-invariant keys, then the whole list is renamed.
inline std::string family_key(const Clause& c) {
  std::vector<std::pair<std::string, const Term*>> by_local;
  by_local.reserve(c.literals.size());
  for (const Term& l : c.literals) by_local.emplace_back(alpha_key(l), &l);
  std::stable_sort(by_local.begin(), by_local.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  std::map<std::string, std::size_t> numbering;
  for (std::size_t i = 0; i < by_local.size(); ++i) {
    if (i) out += '|';
    detail::alpha_into(*by_local[i].second, out, numbering);
  }
  return out;
}

inline std::uint64_t fingerprint_hash(const std::string& key) {
  return detail::mix64(detail::hash_str(key, 0xcbf29ce484222325ull));
}

// ---------------------------------------------------------------------------
// Fresh names.

// First free name of the shape base, base', base'', ... not in `taken`.
inline std::string fresh_name(const std::string& base,
                              const std::vector<VarInfo>& taken) {
  auto used = [&](const std::string& n) {
    for (const VarInfo& v : taken)
      if (v.name == n) return true;
    return false;
  };
  std::string cand = base;
  while (used(cand)) cand += '\'';
  return cand;
}

// Preferred variable letter for a sort (used for induction and abstraction
// variables): num -> n, list -> l, bool -> p, otherwise the sort's first letter.
inline std::string sort_base_name(const Sort& s) {
  if (s == "num") return "n";
  if (s == "list") return "l";
  if (s == kBoolSort) return "p";
  if (!s.empty()) return std::string(1, static_cast<char>(std::tolower(s[0])));
  return "x";
}

// ---------------------------------------------------------------------------
// Clause utilities.

// Keeps the first occurrence of each syntactically identical literal.
// Empty result when nothing changed.
inline std::optional<Clause> clause_setify(const Clause& c) {
  TermList kept;
  for (const Term& l : c.literals) {
    bool dup = false;
    for (const Term& k : kept)
      if (k == l) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(l);
  }
  if (kept.size() == c.literals.size()) return std::nullopt;
  return Clause(std::move(kept), c.from_induction_step, c.origin);
}

}  // namespace bmtp
