#pragma once

// Theory registry: shells (recursive datatypes), primitive-recursive function
// definitions, rewrite rules, and generalization lemmas. Theory is a
// persistent value: every define_*/add_* returns a new Theory.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmtp/term.hpp"

namespace bmtp {

inline const Sort kNumSort = "num";
inline const std::string kZero = "0";
inline const std::string kSuc = "SUC";

// ---------------------------------------------------------------------------
// Declaration shapes (filled by the parser or by tests directly).

struct ConstructorDecl {
  std::string name;
  std::vector<Sort> params;            // non-empty (0-ary constructors are bottoms)
  std::vector<std::string> accessors;  // one per parameter, in order
};

struct ShellDecl {
  std::string name;  // also the sort name
  std::vector<std::string> bottoms;
  std::vector<ConstructorDecl> constructors;
};

// ---------------------------------------------------------------------------
// Registered entities.

struct Constructor {
  std::string name;
  std::vector<Sort> params;
  std::vector<std::string> accessors;
};

struct Shell {
  std::string name;
  std::vector<std::string> bottoms;
  std::vector<Constructor> constructors;
  bool is_recursive() const {
    for (const Constructor& c : constructors)
      for (const Sort& p : c.params)
        if (p == name) return true;
    return false;
  }
};

struct DefEq {
  Term lhs;  // F(pattern...)
  Term rhs;
};

struct FnDef {
  std::string symbol;
  std::vector<Sort> params;
  Sort result;
  std::vector<DefEq> equations;
  std::optional<std::size_t> rec_arg;  // 0-based position destructured by recursion
};

struct RewriteRule {
  std::optional<Term> condition;  // bool-sorted; rule fires when it reduces to T
  Term lhs;
  Term rhs;
  bool permutative = false;  // lhs and rhs are instances of each other
};

struct SymbolInfo {
  enum class Kind { Reserved, Bottom, Constructor, Accessor, Defined };
  Kind kind;
  std::vector<Sort> params;
  Sort result;
  std::size_t index = 0;       // global registration order (term-order tiebreak)
  std::string shell;           // owning shell for Bottom/Constructor/Accessor
  std::size_t ctor_index = 0;  // Accessor: constructor position in shell list
  std::size_t field_index = 0; // Accessor: projected argument index
};

// ---------------------------------------------------------------------------

class Theory {
 public:
  Theory() {
    // Reserved logical symbols.
    register_symbol(kTrue, SymbolInfo::Kind::Reserved, {}, kBoolSort);
    register_symbol(kFalse, SymbolInfo::Kind::Reserved, {}, kBoolSort);
    register_symbol(kNot, SymbolInfo::Kind::Reserved, {kBoolSort}, kBoolSort);
    register_symbol(kOr, SymbolInfo::Kind::Reserved, {kBoolSort, kBoolSort}, kBoolSort);
    register_symbol(kAnd, SymbolInfo::Kind::Reserved, {kBoolSort, kBoolSort}, kBoolSort);
    register_symbol(kImp, SymbolInfo::Kind::Reserved, {kBoolSort, kBoolSort}, kBoolSort);
    register_symbol(kIff, SymbolInfo::Kind::Reserved, {kBoolSort, kBoolSort}, kBoolSort);
    // eq and ite are sort-polymorphic; params recorded empty and checked ad hoc.
    register_symbol(kEq, SymbolInfo::Kind::Reserved, {}, kBoolSort);
    register_symbol(kIte, SymbolInfo::Kind::Reserved, {}, "");
    // Truth values form a built-in shell so that every sort of interest has
    // bottom objects (random ground generation, induction bases).
    Shell b;
    b.name = kBoolSort;
    b.bottoms = {kTrue, kFalse};
    shells_.push_back(b);
    syms_[kTrue].kind = SymbolInfo::Kind::Bottom;
    syms_[kTrue].shell = kBoolSort;
    syms_[kFalse].kind = SymbolInfo::Kind::Bottom;
    syms_[kFalse].shell = kBoolSort;
  }

  // ------------------------------------------------------------------ lookups

  const SymbolInfo* symbol(const std::string& name) const {
    auto it = syms_.find(name);
    return it == syms_.end() ? nullptr : &it->second;
  }
  const Shell* shell(const Sort& sort) const {
    for (const Shell& s : shells_)
      if (s.name == sort) return &s;
    return nullptr;
  }
  const FnDef* fn(const std::string& name) const {
    for (const FnDef& f : fns_)
      if (f.symbol == name) return &f;
    return nullptr;
  }
  bool is_shell_sort(const Sort& s) const { return shell(s) != nullptr; }
  bool is_bottom_symbol(const std::string& n) const {
    const SymbolInfo* s = symbol(n);
    return s && s->kind == SymbolInfo::Kind::Bottom;
  }
  bool is_constructor_symbol(const std::string& n) const {
    const SymbolInfo* s = symbol(n);
    return s && (s->kind == SymbolInfo::Kind::Constructor ||
                 s->kind == SymbolInfo::Kind::Bottom);
  }
  bool is_accessor_symbol(const std::string& n) const {
    const SymbolInfo* s = symbol(n);
    return s && s->kind == SymbolInfo::Kind::Accessor;
  }
  bool is_defined_fn(const std::string& n) const {
    const SymbolInfo* s = symbol(n);
    return s && s->kind == SymbolInfo::Kind::Defined;
  }
  std::size_t symbol_index(const std::string& n) const {
    const SymbolInfo* s = symbol(n);
    return s ? s->index : static_cast<std::size_t>(-1);
  }
  const std::vector<Shell>& shells() const { return shells_; }
  const std::vector<FnDef>& fns() const { return fns_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  const std::vector<RewriteRule>& shell_rules() const { return shell_rules_; }
  const std::vector<Term>& generalization_lemmas() const { return lemmas_; }

  // --------------------------------------------------------------- definition

  Theory define_shell(const ShellDecl& decl) const {
    // Accept a redeclaration of the built-in truth-value shell when it matches.
    if (decl.name == kBoolSort) {
      std::vector<std::string> bs = decl.bottoms;
      std::sort(bs.begin(), bs.end());
      if (bs == std::vector<std::string>{kFalse, kTrue} && decl.constructors.empty())
        return *this;
      throw Error("shell 'bool' is built in (bottoms T and F) and cannot change");
    }
    if (is_shell_sort(decl.name))
      throw Error("duplicate shell name: " + decl.name);
    if (syms_.count(decl.name))
      throw Error("shell name collides with a symbol: " + decl.name);
    if (decl.bottoms.empty())
      throw Error("shell " + decl.name + " needs at least one bottom object");

    Theory out = *this;
    Shell sh;
    sh.name = decl.name;
    sh.bottoms = decl.bottoms;
    for (const std::string& b : decl.bottoms)
      out.register_symbol(b, SymbolInfo::Kind::Bottom, {}, decl.name, decl.name);
    std::size_t ci = 0;
    for (const ConstructorDecl& cs : decl.constructors) {
      if (cs.params.empty())
        throw Error("constructor " + cs.name + " has no arguments; use a bottom");
      for (const Sort& p : cs.params)
        if (p != decl.name && !is_shell_sort(p))
          throw Error("constructor " + cs.name + " argument sort not registered: " + p);
      if (cs.accessors.size() != cs.params.size())
        throw Error("constructor " + cs.name + " needs one accessor per argument");
      out.register_symbol(cs.name, SymbolInfo::Kind::Constructor, cs.params,
                          decl.name, decl.name);
      for (std::size_t ai = 0; ai < cs.accessors.size(); ++ai) {
        out.register_symbol(cs.accessors[ai], SymbolInfo::Kind::Accessor,
                            {decl.name}, cs.params[ai], decl.name);
        SymbolInfo& acc = out.syms_[cs.accessors[ai]];
        acc.ctor_index = ci;
        acc.field_index = ai;
      }
      sh.constructors.push_back({cs.name, cs.params, cs.accessors});
      ++ci;
    }
    // Accessor equations double as rewrite rules: A_i(C(x1..xn)) = x_i.
    for (const Constructor& c : sh.constructors) {
      TermList pat_args;
      for (std::size_t i = 0; i < c.params.size(); ++i)
        pat_args.push_back(Term::var("z" + std::to_string(i), c.params[i]));
      Term pat = Term::app(c.name, sh.name, pat_args);
      for (std::size_t i = 0; i < c.accessors.size(); ++i) {
        RewriteRule r;
        r.lhs = Term::app(c.accessors[i], c.params[i], {pat});
        r.rhs = pat_args[i];
        out.shell_rules_.push_back(std::move(r));
      }
    }
    out.shells_.push_back(std::move(sh));
    return out;
  }

  // Registers a function's signature so its equations can reference it.
  Theory declare_function(const std::string& symbol, std::vector<Sort> params,
                          Sort result) const {
    for (const Sort& p : params)
      if (!is_shell_sort(p)) throw Error("parameter sort not registered: " + p);
    if (!is_shell_sort(result)) throw Error("result sort not registered: " + result);
    Theory out = *this;
    out.register_symbol(symbol, SymbolInfo::Kind::Defined, std::move(params),
                        std::move(result));
    return out;
  }

  // Validates the defining equations and infers the recursive argument.
  Theory complete_function(const std::string& symbol,
                           std::vector<DefEq> equations) const {
    const SymbolInfo* si = symbol_(symbol);
    if (!si || si->kind != SymbolInfo::Kind::Defined)
      throw Error("function not declared: " + symbol);
    if (fn(symbol)) throw Error("function already defined: " + symbol);
    if (equations.empty()) throw Error(symbol + ": no defining equations");

    FnDef def;
    def.symbol = symbol;
    def.params = si->params;
    def.result = si->result;

    // Which positions are destructured?
    std::optional<std::size_t> rec;
    for (const DefEq& e : equations) {
      check_equation_shape(symbol, *si, e);
      for (std::size_t i = 0; i < e.lhs.arity(); ++i) {
        if (e.lhs.args()[i].is_var()) continue;
        if (rec && *rec != i)
          throw Error(symbol + ": recursion on two argument positions (" +
                      std::to_string(*rec + 1) + " and " + std::to_string(i + 1) + ")");
        rec = i;
      }
    }

    if (!rec) {
      if (equations.size() != 1)
        throw Error(symbol + ": several equations but no destructured argument");
      if (contains_symbol(equations[0].rhs, symbol))
        throw Error(symbol + ": non-recursive definition calls itself");
      def.rec_arg = std::nullopt;
      def.equations = std::move(equations);
      Theory out = *this;
      out.fns_.push_back(std::move(def));
      return out;
    }

    const Sort& rec_sort = si->params[*rec];
    const Shell* sh = shell(rec_sort);
    if (!sh) throw Error(symbol + ": recursive argument sort has no shell: " + rec_sort);

    // Coverage: one equation per bottom object and per constructor.
    std::map<std::string, std::size_t> seen;
    for (const DefEq& e : equations) {
      const Term& pat = e.lhs.args()[*rec];
      if (pat.is_var())
        throw Error(symbol + ": every equation must destructure argument " +
                    std::to_string(*rec + 1));
      if (++seen[pat.name()] > 1)
        throw Error(symbol + ": duplicate case for " + pat.name());
      check_primitive_recursion(symbol, *rec, e);
    }
    for (const std::string& b : sh->bottoms)
      if (!seen.count(b)) throw Error(symbol + ": missing case for " + b);
    for (const Constructor& c : sh->constructors)
      if (!seen.count(c.name)) throw Error(symbol + ": missing case for " + c.name);
    if (seen.size() != sh->bottoms.size() + sh->constructors.size())
      throw Error(symbol + ": equation for a symbol outside the recursive sort");

    def.rec_arg = rec;
    def.equations = std::move(equations);
    Theory out = *this;
    out.fns_.push_back(std::move(def));
    return out;
  }

  Theory define_function(const std::string& symbol, std::vector<Sort> params,
                         Sort result, std::vector<DefEq> equations) const {
    return declare_function(symbol, std::move(params), std::move(result))
        .complete_function(symbol, std::move(equations));
  }

  // rule: (condition ==>)? lhs = rhs | lhs <=> rhs | bare P | ~P.
  Theory add_rewrite_rule(const Term& rule) const {
    RewriteRule r = normalize_rule(rule);
    std::vector<VarInfo> lv = free_vars(r.lhs);
    std::vector<VarInfo> extra = free_vars(r.rhs);
    if (r.condition) collect_free_vars(*r.condition, extra);
    for (const VarInfo& v : extra)
      if (std::find(lv.begin(), lv.end(), v) == lv.end())
        throw Error("rewrite rule introduces variable " + v.name +
                    " absent from the left-hand side");
    r.permutative = match_pattern(r.lhs, r.rhs).has_value() &&
                    match_pattern(r.rhs, r.lhs).has_value() && r.lhs != r.rhs;
    Theory out = *this;
    out.rules_.push_back(std::move(r));
    return out;
  }

  Theory add_generalization_lemma(const Term& lemma) const {
    if (lemma.sort() != kBoolSort)
      throw Error("generalization lemma must be boolean-sorted");
    Theory out = *this;
    out.lemmas_.push_back(lemma);
    return out;
  }

  // ------------------------------------------------------------- term checks

  // Validates arities and sorts of every application in t.
  void check_term(const Term& t) const {
    if (t.is_var()) {
      if (!is_shell_sort(t.sort()))
        throw Error("variable " + t.name() + " has unregistered sort " + t.sort());
      return;
    }
    for (const Term& a : t.args()) check_term(a);
    const std::string& f = t.name();
    if (f == kEq) {
      if (t.arity() != 2 || t.args()[0].sort() != t.args()[1].sort() ||
          t.sort() != kBoolSort)
        throw Error("ill-sorted equality");
      return;
    }
    if (f == kIte) {
      if (t.arity() != 3 || t.args()[0].sort() != kBoolSort ||
          t.args()[1].sort() != t.args()[2].sort() ||
          t.sort() != t.args()[1].sort())
        throw Error("ill-sorted conditional");
      return;
    }
    const SymbolInfo* si = symbol_(f);
    if (!si) throw Error("unknown symbol: " + f);
    if (si->params.size() != t.arity())
      throw Error(f + " expects " + std::to_string(si->params.size()) +
                  " arguments, got " + std::to_string(t.arity()));
    for (std::size_t i = 0; i < t.arity(); ++i)
      if (t.args()[i].sort() != si->params[i])
        throw Error(f + " argument " + std::to_string(i + 1) + " has sort " +
                    t.args()[i].sort() + ", expected " + si->params[i]);
    if (t.sort() != si->result)
      throw Error(f + " result sort mismatch");
  }

  // Non-variable term built from bottoms and constructor applications whose
  // arguments are bottoms, variables, or (recursively) such templates.
  bool is_explicit_value_template(const Term& t) const {
    if (t.is_var()) return false;
    if (is_bottom_symbol(t.name())) return true;
    const SymbolInfo* si = symbol_(t.name());
    if (!si || si->kind != SymbolInfo::Kind::Constructor) return false;
    for (const Term& a : t.args())
      if (!a.is_var() && !is_explicit_value_template(a)) return false;
    return true;
  }

  // ------------------------------------------------------------- term order

  // Total order used to orient permutative rules: size, then variables before
  // applications, variables by name, applications by symbol registration
  // index, then arguments lexicographically.
  int term_compare(const Term& a, const Term& b) const {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a.is_var() && b.is_var())
      return a.name() < b.name() ? -1 : (a.name() == b.name() ? 0 : 1);
    if (a.is_var()) return -1;
    if (b.is_var()) return 1;
    std::size_t ia = symbol_index(a.name()), ib = symbol_index(b.name());
    if (ia != ib) return ia < ib ? -1 : 1;
    if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
    for (std::size_t i = 0; i < std::min(a.arity(), b.arity()); ++i) {
      int c = term_compare(a.args()[i], b.args()[i]);
      if (c != 0) return c;
    }
    if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
    return 0;
  }
  bool term_less(const Term& a, const Term& b) const {
    return term_compare(a, b) < 0;
  }

  // ------------------------------------------------------ recursion analysis

  // Occurrences of v as the immediate argument at some defined function's
  // recursive position (structural induction on v can unfold that call).
  std::size_t rec_position_occurrences(const Term& t, const std::string& v) const {
    std::size_t n = 0;
    for_each_subterm(t, [&](const Term& s, std::size_t) {
      if (!s.is_app()) return;
      const FnDef* d = fn(s.name());
      if (d && d->rec_arg && *d->rec_arg < s.arity()) {
        const Term& arg = s.args()[*d->rec_arg];
        if (arg.is_var() && arg.name() == v) ++n;
      }
    });
    return n;
  }
  std::size_t rec_position_occurrences(const Clause& c, const std::string& v) const {
    std::size_t n = 0;
    for (const Term& l : c.literals) n += rec_position_occurrences(l, v);
    return n;
  }
  bool induction_test(const Clause& c, const std::string& v) const {
    return rec_position_occurrences(c, v) > 0;
  }

 private:
  const SymbolInfo* symbol_(const std::string& n) const { return symbol(n); }

  static bool contains_symbol(const Term& t, const std::string& sym) {
    if (t.is_app() && t.name() == sym) return true;
    for (const Term& a : t.args())
      if (contains_symbol(a, sym)) return true;
    return false;
  }

  void register_symbol(const std::string& name, SymbolInfo::Kind kind,
                       std::vector<Sort> params, Sort result,
                       std::string shell_name = "") {
    if (syms_.count(name)) throw Error("duplicate symbol: " + name);
    SymbolInfo si;
    si.kind = kind;
    si.params = std::move(params);
    si.result = std::move(result);
    si.index = next_index_++;
    si.shell = std::move(shell_name);
    syms_.emplace(name, std::move(si));
  }

  void check_equation_shape(const std::string& symbol, const SymbolInfo& si,
                            const DefEq& e) const {
    if (!e.lhs.is_app() || e.lhs.name() != symbol ||
        e.lhs.arity() != si.params.size())
      throw Error(symbol + ": equation left-hand side must apply " + symbol +
                  " to its parameters");
    std::vector<std::string> seen_vars;
    for (std::size_t i = 0; i < e.lhs.arity(); ++i) {
      const Term& p = e.lhs.args()[i];
      if (p.sort() != si.params[i])
        throw Error(symbol + ": pattern sort mismatch at argument " +
                    std::to_string(i + 1));
      if (p.is_var()) {
        if (std::find(seen_vars.begin(), seen_vars.end(), p.name()) !=
            seen_vars.end())
          throw Error(symbol + ": repeated pattern variable " + p.name());
        seen_vars.push_back(p.name());
        continue;
      }
      if (!is_constructor_symbol(p.name()))
        throw Error(symbol + ": pattern must be a variable or constructor form");
      for (const Term& a : p.args()) {
        if (!a.is_var())
          throw Error(symbol + ": nested constructor patterns are not primitive"
                      " recursion");
        if (std::find(seen_vars.begin(), seen_vars.end(), a.name()) !=
            seen_vars.end())
          throw Error(symbol + ": repeated pattern variable " + a.name());
        seen_vars.push_back(a.name());
      }
    }
    if (e.rhs.sort() != si.result)
      throw Error(symbol + ": right-hand side sort mismatch");
    std::vector<VarInfo> lv = free_vars(e.lhs);
    for (const VarInfo& v : free_vars(e.rhs))
      if (std::find(lv.begin(), lv.end(), v) == lv.end())
        throw Error(symbol + ": right-hand side introduces variable " + v.name);
  }

  void check_primitive_recursion(const std::string& symbol, std::size_t rec,
                                 const DefEq& e) const {
    const Term& pat = e.lhs.args()[rec];
    std::vector<std::string> immediate;
    for (const Term& a : pat.args()) immediate.push_back(a.name());
    for_each_subterm(e.rhs, [&](const Term& s, std::size_t) {
      if (!s.is_app() || s.name() != symbol) return;
      if (rec >= s.arity()) return;
      const Term& arg = s.args()[rec];
      if (!arg.is_var() ||
          std::find(immediate.begin(), immediate.end(), arg.name()) ==
              immediate.end())
        throw Error(symbol + ": recursive call must recurse on an immediate"
                    " constructor argument");
    });
  }

  RewriteRule normalize_rule(const Term& t) const {
    RewriteRule r;
    Term body = t;
    if (is_imp(body)) {
      r.condition = body.args()[0];
      body = body.args()[1];
    }
    if (is_eq(body) || is_iff(body)) {
      r.lhs = body.args()[0];
      r.rhs = body.args()[1];
    } else if (is_not(body)) {
      r.lhs = body.args()[0];
      r.rhs = falsity();
    } else if (body.sort() == kBoolSort) {
      r.lhs = body;
      r.rhs = truth();
    } else {
      throw Error("rewrite rule must be an equation, an equivalence, or a"
                  " boolean literal");
    }
    if (r.lhs.is_var()) throw Error("rewrite rule left-hand side is a variable");
    return r;
  }

  std::vector<Shell> shells_;
  std::vector<FnDef> fns_;
  std::vector<RewriteRule> rules_;
  std::vector<RewriteRule> shell_rules_;
  std::vector<Term> lemmas_;
  std::map<std::string, SymbolInfo> syms_;
  std::size_t next_index_ = 0;
};

// ---------------------------------------------------------------------------
// Numerals (constructor form over the conventional num shell).

inline Term make_numeral(std::uint64_t k) {
  Term t = Term::app(kZero, kNumSort);
  for (; k > 0; --k) t = Term::app(kSuc, kNumSort, {t});
  return t;
}

inline std::optional<std::uint64_t> numeral_value(const Term& t) {
  std::uint64_t k = 0;
  const Term* cur = &t;
  while (true) {
    if (!cur->is_app()) return std::nullopt;
    if (cur->name() == kZero && cur->arity() == 0) return k;
    if (cur->name() == kSuc && cur->arity() == 1) {
      ++k;
      cur = &cur->args()[0];
      continue;
    }
    return std::nullopt;
  }
}

}  // namespace bmtp
