#pragma once

// Concrete syntax: lexer, term parser with sort inference, minimal-parentheses
// printer, and the .bmt theory-file reader/writer.
//
// Term grammar (precedence, higher binds tighter; R/L/N = associativity):
//   <=> 15 R | ==> 20 R | \/ 30 R | /\ 40 R | = < <= > >= 60 N
//   ~ prefix 65 | + - 70 L | * 80 L | EXP 90 L | application/atom
// Decimal numerals are sugar for constructor chains (2 parses as SUC(SUC(0))).
// `a > b` and `a >= b` are sugar for `b < a` / `b <= a`.
//
// File grammar:
//   shell NAME { bottom C; con C(sort, ...) accessors (A, ...); ... }
//   define F(sort, ...): sort { equation; ... }
//   rewrite TERM;        genlemma TERM;        conjecture "name" TERM;
// Comments run from # to end of line.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bmtp/theory.hpp"

namespace bmtp {

// ---------------------------------------------------------------------------
// Printer.

namespace syntax_detail {

struct InfixInfo {
  const char* tok;
  int prec;
  char assoc;  // 'L', 'R', 'N'
};

inline const std::map<std::string, InfixInfo>& infix_table() {
  static const std::map<std::string, InfixInfo> t = {
      {kIff, {"<=>", 15, 'R'}}, {kImp, {"==>", 20, 'R'}},
      {kOr, {"\\/", 30, 'R'}},  {kAnd, {"/\\", 40, 'R'}},
      {kEq, {"=", 60, 'N'}},    {"LE", {"<=", 60, 'N'}},
      {"LT", {"<", 60, 'N'}},   {"PLUS", {"+", 70, 'L'}},
      {"SUB", {"-", 70, 'L'}},  {"MULT", {"*", 80, 'L'}},
      {"EXP", {"EXP", 90, 'L'}},
  };
  return t;
}

inline void pp(const Term& t, int min_prec, std::string& out) {
  if (t.is_var()) {
    out += t.name();
    return;
  }
  if (t.arity() == 2) {
    auto it = infix_table().find(t.name());
    if (it != infix_table().end()) {
      const InfixInfo& op = it->second;
      bool parens = op.prec < min_prec;
      if (parens) out += '(';
      pp(t.args()[0], op.assoc == 'L' ? op.prec : op.prec + 1, out);
      out += ' ';
      out += op.tok;
      out += ' ';
      pp(t.args()[1], op.assoc == 'R' ? op.prec : op.prec + 1, out);
      if (parens) out += ')';
      return;
    }
  }
  if (is_not(t)) {
    bool parens = 65 < min_prec;
    if (parens) out += '(';
    out += '~';
    // Prefix operator: an operand of the same precedence (another ~) needs
    // no parentheses.
    pp(t.args()[0], 65, out);
    if (parens) out += ')';
    return;
  }
  out += t.name();
  if (!t.args().empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i) out += ", ";
      pp(t.args()[i], 0, out);
    }
    out += ')';
  }
}

}  // namespace syntax_detail

inline std::string print_term(const Term& t) {
  std::string out;
  syntax_detail::pp(t, 0, out);
  return out;
}

// Literals joined by \/ ; each literal parenthesized if looser than \/ .
inline std::string print_clause(const Clause& c) {
  if (c.literals.size() == 1) return print_term(c.literals[0]);
  std::string out;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " \\/ ";
    syntax_detail::pp(c.literals[i], 31, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexer.

namespace syntax_detail {

struct Token {
  enum class Type { Ident, Number, Str, Op, End };
  Type type;
  std::string text;
  std::uint64_t value = 0;
  int line = 1, col = 1;
};

inline std::string at(const Token& t) {
  return std::to_string(t.line) + ":" + std::to_string(t.col);
}

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  static const char* ops[] = {"<=>", "==>", "<=", ">=", "\\/", "/\\", "=",
                              "<",   ">",   "~",  "+",  "-",   "*",   "(",
                              ")",   "{",   "}",  ";",  ",",   ":"};
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char ch = src[i];
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      advance(1);
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.col = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_' || src[j] == '\''))
        ++j;
      tok.type = Token::Type::Ident;
      tok.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      tok.type = Token::Type::Number;
      tok.text = src.substr(i, j - i);
      tok.value = std::stoull(tok.text);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (ch == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"')
        throw Error(std::to_string(line) + ":" + std::to_string(col) +
                    ": unterminated string");
      tok.type = Token::Type::Str;
      tok.text = src.substr(i + 1, j - i - 1);
      advance(j - i + 1);
      out.push_back(std::move(tok));
      continue;
    }
    bool matched = false;
    for (const char* op : ops) {
      std::size_t n = std::char_traits<char>::length(op);
      if (src.compare(i, n, op) == 0) {
        tok.type = Token::Type::Op;
        tok.text = op;
        advance(n);
        out.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (!matched)
      throw Error(std::to_string(line) + ":" + std::to_string(col) +
                  ": unexpected character '" + std::string(1, ch) + "'");
  }
  Token end;
  end.type = Token::Type::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// Surface syntax tree, before sort elaboration.
struct SNode {
  enum class K { Ident, App, Num };
  K k = K::Ident;
  std::string name;  // identifier, symbol, "=" marker, or connective name
  std::uint64_t num = 0;
  std::vector<SNode> args;
  int line = 1, col = 1;
};

struct Unresolved {
  std::string name;
  int line, col;
};

}  // namespace syntax_detail

// ---------------------------------------------------------------------------
// Parsed theory file.

struct ParsedTheory {
  Theory theory;
  std::vector<std::pair<std::string, Term>> conjectures;
  // Declaration order for faithful re-printing: kind s/f/r/g/c + index into
  // the matching list. The built-in bool shell never appears here.
  struct Decl {
    char kind;
    std::size_t index;
  };
  std::vector<Decl> decls;
};

// ---------------------------------------------------------------------------
// Parser.

class Parser {
  using Token = syntax_detail::Token;
  using SNode = syntax_detail::SNode;

 public:
  Parser(const std::string& text, Theory base)
      : toks_(syntax_detail::lex(text)), th_(std::move(base)) {}

  ParsedTheory parse_file() {
    ParsedTheory out;
    while (peek().type != Token::Type::End) {
      const Token& kw = expect_ident("declaration");
      if (kw.text == "shell") {
        std::size_t before = th_.shells().size();
        parse_shell();
        if (th_.shells().size() > before)
          out.decls.push_back({'s', th_.shells().size() - 1});
      } else if (kw.text == "define") {
        parse_define();
        out.decls.push_back({'f', th_.fns().size() - 1});
      } else if (kw.text == "rewrite") {
        Term t = parse_term_until_semi(kBoolSort);
        th_ = th_.add_rewrite_rule(t);
        out.decls.push_back({'r', th_.rules().size() - 1});
      } else if (kw.text == "genlemma") {
        Term t = parse_term_until_semi(kBoolSort);
        th_ = th_.add_generalization_lemma(t);
        out.decls.push_back({'g', th_.generalization_lemmas().size() - 1});
      } else if (kw.text == "conjecture") {
        const Token& name = next();
        if (name.type != Token::Type::Str)
          throw Error(syntax_detail::at(name) + ": conjecture needs a quoted name");
        Term t = parse_term_until_semi(kBoolSort);
        out.conjectures.emplace_back(name.text, t);
        out.decls.push_back({'c', out.conjectures.size() - 1});
      } else {
        throw Error(syntax_detail::at(kw) + ": unknown declaration '" + kw.text +
                    "' (expected shell, define, rewrite, genlemma, or conjecture)");
      }
    }
    out.theory = th_;
    return out;
  }

  // Parses a complete standalone term. Unknown identifiers become variables;
  // their sorts come from usage, or from var_sorts when usage cannot decide.
  Term parse_single_term(const std::map<std::string, Sort>& var_sorts,
                         const Sort& expected) {
    varmap_ = var_sorts;
    SNode n = parse_expr(0);
    const Token& end = peek();
    if (end.type != Token::Type::End)
      throw Error(syntax_detail::at(end) + ": trailing input after term");
    return elaborate_strict(n, expected);
  }

 private:
  // ------------------------------------------------------------ token stream
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  const Token& expect_op(const char* op) {
    const Token& t = next();
    if (t.type != Token::Type::Op || t.text != op)
      throw Error(syntax_detail::at(t) + ": expected '" + op + "', got '" +
                  t.text + "'");
    return t;
  }
  const Token& expect_ident(const char* what) {
    const Token& t = next();
    if (t.type != Token::Type::Ident)
      throw Error(syntax_detail::at(t) + ": expected " + what);
    return t;
  }
  bool at_op(const char* op) const {
    return peek().type == Token::Type::Op && peek().text == op;
  }

  // ---------------------------------------------------------- surface parser
  struct OpInfo {
    std::string fn;  // canonical symbol / connective, or "=" marker
    int prec;
    char assoc;
    bool swap;  // >, >= : arguments swapped
  };

  bool infix_op(const Token& t, OpInfo& out) const {
    if (t.type == Token::Type::Ident && t.text == "EXP") {
      out = {"EXP", 90, 'L', false};
      return true;
    }
    if (t.type != Token::Type::Op) return false;
    if (t.text == "<=>") out = {kIff, 15, 'R', false};
    else if (t.text == "==>") out = {kImp, 20, 'R', false};
    else if (t.text == "\\/") out = {kOr, 30, 'R', false};
    else if (t.text == "/\\") out = {kAnd, 40, 'R', false};
    else if (t.text == "=") out = {"=", 60, 'N', false};
    else if (t.text == "<") out = {"LT", 60, 'N', false};
    else if (t.text == "<=") out = {"LE", 60, 'N', false};
    else if (t.text == ">") out = {"LT", 60, 'N', true};
    else if (t.text == ">=") out = {"LE", 60, 'N', true};
    else if (t.text == "+") out = {"PLUS", 70, 'L', false};
    else if (t.text == "-") out = {"SUB", 70, 'L', false};
    else if (t.text == "*") out = {"MULT", 80, 'L', false};
    else return false;
    return true;
  }

  SNode parse_expr(int min_prec) {
    SNode lhs = parse_prefix();
    while (true) {
      OpInfo op;
      if (!infix_op(peek(), op) || op.prec < min_prec) break;
      const Token& t = next();
      SNode rhs = parse_expr(op.assoc == 'R' ? op.prec : op.prec + 1);
      SNode node;
      node.k = SNode::K::App;
      node.name = op.fn;
      node.line = t.line;
      node.col = t.col;
      if (op.swap) {
        node.args.push_back(std::move(rhs));
        node.args.push_back(std::move(lhs));
      } else {
        node.args.push_back(std::move(lhs));
        node.args.push_back(std::move(rhs));
      }
      lhs = std::move(node);
    }
    return lhs;
  }

  SNode parse_prefix() {
    const Token& t = next();
    SNode n;
    n.line = t.line;
    n.col = t.col;
    if (t.type == Token::Type::Op && t.text == "~") {
      n.k = SNode::K::App;
      n.name = kNot;
      n.args.push_back(parse_expr(66));
      return n;
    }
    if (t.type == Token::Type::Op && t.text == "(") {
      SNode inner = parse_expr(0);
      expect_op(")");
      return inner;
    }
    if (t.type == Token::Type::Number) {
      n.k = SNode::K::Num;
      n.num = t.value;
      return n;
    }
    if (t.type == Token::Type::Ident) {
      if (at_op("(")) {
        next();
        n.k = SNode::K::App;
        n.name = t.text;
        if (!at_op(")")) {
          n.args.push_back(parse_expr(0));
          while (at_op(",")) {
            next();
            n.args.push_back(parse_expr(0));
          }
        }
        expect_op(")");
        return n;
      }
      n.k = SNode::K::Ident;
      n.name = t.text;
      return n;
    }
    throw Error(syntax_detail::at(t) + ": expected a term, got '" + t.text + "'");
  }

  // ------------------------------------------------------------- elaboration
  // expected == "" means "any sort"; bare identifiers of unknown sort raise
  // Unresolved, and application nodes retry children so that one child's
  // discovery (e.g. P(x) fixing x) can unblock a sibling (x = y).
  Term elaborate(const SNode& n, const Sort& expected) {
    using syntax_detail::Unresolved;
    switch (n.k) {
      case SNode::K::Num: {
        if (!expected.empty() && expected != kNumSort)
          throw Error(pos_str(n) + ": numeral where sort " + expected +
                      " is required");
        if (!th_.is_shell_sort(kNumSort))
          throw Error(pos_str(n) + ": numerals need the num shell");
        return make_numeral(n.num);
      }
      case SNode::K::Ident: {
        const SymbolInfo* si = th_.symbol(n.name);
        if (si && si->kind != SymbolInfo::Kind::Reserved) {
          if (!si->params.empty())
            throw Error(pos_str(n) + ": symbol " + n.name + " expects " +
                        std::to_string(si->params.size()) + " arguments");
          check_expected(n, si->result, expected);
          return Term::app(n.name, si->result);
        }
        if (si)
          throw Error(pos_str(n) + ": '" + n.name +
                      "' is reserved; use the operator syntax");
        auto it = varmap_.find(n.name);
        if (it != varmap_.end()) {
          check_expected(n, it->second, expected);
          return Term::var(n.name, it->second);
        }
        if (!expected.empty()) {
          varmap_[n.name] = expected;
          return Term::var(n.name, expected);
        }
        throw Unresolved{n.name, n.line, n.col};
      }
      case SNode::K::App:
        return elaborate_app(n, expected);
    }
    throw Error("unreachable");
  }

  Term elaborate_app(const SNode& n, const Sort& expected) {
    using syntax_detail::Unresolved;
    if (n.name == "=") {
      if (n.args.size() != 2) throw Error(pos_str(n) + ": '=' needs two sides");
      Term a, b;
      try {
        a = elaborate(n.args[0], "");
        b = elaborate(n.args[1], a.sort());
      } catch (const Unresolved&) {
        b = elaborate(n.args[1], "");
        a = elaborate(n.args[0], b.sort());
      }
      check_expected(n, kBoolSort, expected);
      // Truth-valued equality is canonically an equivalence.
      if (a.sort() == kBoolSort) return mk_iff(a, b);
      return mk_eq(a, b);
    }
    if (n.name == kIte) {
      if (n.args.size() != 3)
        throw Error(pos_str(n) + ": ite needs three arguments");
      Term c = elaborate_child(n, 0, kBoolSort);
      Term a, b;
      try {
        a = elaborate(n.args[1], expected);
        b = elaborate(n.args[2], a.sort());
      } catch (const Unresolved&) {
        b = elaborate(n.args[2], expected);
        a = elaborate(n.args[1], b.sort());
      }
      if (!expected.empty()) check_expected(n, a.sort(), expected);
      return mk_ite(c, a, b);
    }
    if (n.name == kNot || n.name == kOr || n.name == kAnd || n.name == kImp ||
        n.name == kIff) {
      std::size_t want = n.name == kNot ? 1 : 2;
      if (n.args.size() != want)
        throw Error(pos_str(n) + ": wrong arity for connective");
      check_expected(n, kBoolSort, expected);
      std::vector<Term> args(n.args.size());
      elaborate_children(n, std::vector<Sort>(n.args.size(), kBoolSort), args);
      return Term::app(n.name, kBoolSort, std::move(args));
    }
    const SymbolInfo* si = th_.symbol(n.name);
    if (!si || si->kind == SymbolInfo::Kind::Reserved)
      throw Error(pos_str(n) + ": unknown symbol: " + n.name);
    if (si->params.size() != n.args.size())
      throw Error(pos_str(n) + ": " + n.name + " expects " +
                  std::to_string(si->params.size()) + " arguments, got " +
                  std::to_string(n.args.size()));
    check_expected(n, si->result, expected);
    std::vector<Term> args(n.args.size());
    elaborate_children(n, si->params, args);
    return Term::app(n.name, si->result, std::move(args));
  }

  Term elaborate_child(const SNode& n, std::size_t i, const Sort& expected) {
    return elaborate(n.args[i], expected);
  }

  void elaborate_children(const SNode& n, const std::vector<Sort>& expected,
                          std::vector<Term>& out) {
    using syntax_detail::Unresolved;
    std::vector<bool> done(n.args.size(), false);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (done[i]) continue;
        try {
          out[i] = elaborate(n.args[i], expected[i]);
          done[i] = true;
        } catch (const Unresolved& u) {
          if (pass == 1) throw u;
        }
      }
    }
  }

  void check_expected(const SNode& n, const Sort& got, const Sort& expected) {
    if (!expected.empty() && got != expected)
      throw Error(pos_str(n) + ": sort mismatch: got " + got + ", expected " +
                  expected);
  }

  std::string pos_str(const SNode& n) const {
    return std::to_string(n.line) + ":" + std::to_string(n.col);
  }

  Term elaborate_strict(const SNode& n, const Sort& expected) {
    try {
      Term t = elaborate(n, expected);
      th_.check_term(t);
      return t;
    } catch (const syntax_detail::Unresolved& u) {
      throw Error(std::to_string(u.line) + ":" + std::to_string(u.col) +
                  ": cannot infer the sort of variable '" + u.name +
                  "'; use it under a function or provide a context");
    }
  }

  Term parse_term_until_semi(const Sort& expected) {
    varmap_.clear();
    SNode n = parse_expr(0);
    expect_op(";");
    return elaborate_strict(n, expected);
  }

  // ------------------------------------------------------------ declarations
  void parse_shell() {
    const Token& name = expect_ident("shell name");
    ShellDecl decl;
    decl.name = name.text;
    expect_op("{");
    while (!at_op("}")) {
      const Token& kw = expect_ident("'bottom' or 'con'");
      if (kw.text == "bottom") {
        while (true) {
          const Token& b = next();
          if (b.type != Token::Type::Ident && b.type != Token::Type::Number)
            throw Error(syntax_detail::at(b) + ": expected bottom object name");
          decl.bottoms.push_back(b.text);
          if (at_op(",")) {
            next();
            continue;
          }
          break;
        }
        expect_op(";");
      } else if (kw.text == "con") {
        ConstructorDecl cs;
        cs.name = expect_ident("constructor name").text;
        expect_op("(");
        while (!at_op(")")) {
          cs.params.push_back(expect_ident("sort name").text);
          if (at_op(",")) next();
        }
        expect_op(")");
        const Token& acc = expect_ident("'accessors'");
        if (acc.text != "accessors")
          throw Error(syntax_detail::at(acc) + ": expected 'accessors'");
        expect_op("(");
        while (!at_op(")")) {
          cs.accessors.push_back(expect_ident("accessor name").text);
          if (at_op(",")) next();
        }
        expect_op(")");
        expect_op(";");
        decl.constructors.push_back(std::move(cs));
      } else {
        throw Error(syntax_detail::at(kw) + ": expected 'bottom' or 'con'");
      }
    }
    expect_op("}");
    th_ = th_.define_shell(decl);
  }

  void parse_define() {
    const Token& name = expect_ident("function name");
    expect_op("(");
    std::vector<Sort> params;
    while (!at_op(")")) {
      params.push_back(expect_ident("sort name").text);
      if (at_op(",")) next();
    }
    expect_op(")");
    expect_op(":");
    Sort result = expect_ident("result sort").text;
    th_ = th_.declare_function(name.text, params, result);
    expect_op("{");
    std::vector<DefEq> eqs;
    while (!at_op("}")) {
      varmap_.clear();
      SNode n = parse_expr(0);
      expect_op(";");
      Term t = elaborate_strict(n, kBoolSort);
      if (!is_eq(t) && !is_iff(t))
        throw Error(pos_str(n) + ": defining equation must be '=' or '<=>'");
      eqs.push_back({t.args()[0], t.args()[1]});
    }
    expect_op("}");
    th_ = th_.complete_function(name.text, std::move(eqs));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Theory th_;
  std::map<std::string, Sort> varmap_;
};

// ---------------------------------------------------------------------------
// Convenience entry points.

inline ParsedTheory parse_theory(const std::string& text, Theory base = Theory()) {
  return Parser(text, std::move(base)).parse_file();
}

inline Term parse_term(const std::string& text, const Theory& th,
                       const std::map<std::string, Sort>& var_sorts = {},
                       const Sort& expected = "") {
  return Parser(text, th).parse_single_term(var_sorts, expected);
}

// Canonical re-rendering of a parsed file; parsing the output reproduces the
// same theory, conjectures, and declaration order (the built-in bool shell is
// never printed).
inline std::string print_theory(const ParsedTheory& pt) {
  std::string out;
  const Theory& th = pt.theory;
  for (const ParsedTheory::Decl& d : pt.decls) {
    switch (d.kind) {
      case 's': {
        const Shell& sh = th.shells()[d.index];
        out += "shell " + sh.name + " {\n";
        for (const std::string& b : sh.bottoms) out += "  bottom " + b + ";\n";
        for (const Constructor& c : sh.constructors) {
          out += "  con " + c.name + "(";
          for (std::size_t i = 0; i < c.params.size(); ++i)
            out += (i ? ", " : "") + c.params[i];
          out += ") accessors (";
          for (std::size_t i = 0; i < c.accessors.size(); ++i)
            out += (i ? ", " : "") + c.accessors[i];
          out += ");\n";
        }
        out += "}\n";
        break;
      }
      case 'f': {
        const FnDef& f = th.fns()[d.index];
        out += "define " + f.symbol + "(";
        for (std::size_t i = 0; i < f.params.size(); ++i)
          out += (i ? ", " : "") + f.params[i];
        out += "): " + f.result + " {\n";
        for (const DefEq& e : f.equations) {
          Term body = f.result == kBoolSort ? mk_iff(e.lhs, e.rhs)
                                            : mk_eq(e.lhs, e.rhs);
          out += "  " + print_term(body) + ";\n";
        }
        out += "}\n";
        break;
      }
      case 'r': {
        const RewriteRule& r = th.rules()[d.index];
        Term body = r.lhs.sort() == kBoolSort ? mk_iff(r.lhs, r.rhs)
                                              : mk_eq(r.lhs, r.rhs);
        if (r.condition) body = mk_imp(*r.condition, body);
        out += "rewrite " + print_term(body) + ";\n";
        break;
      }
      case 'g':
        out += "genlemma " + print_term(th.generalization_lemmas()[d.index]) +
               ";\n";
        break;
      case 'c':
        out += "conjecture \"" + pt.conjectures[d.index].first + "\" " +
               print_term(pt.conjectures[d.index].second) + ";\n";
        break;
    }
  }
  return out;
}

}  // namespace bmtp
