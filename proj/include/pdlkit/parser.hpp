#pragma once

// Concrete syntax.
//
//   formula := iff
//   iff     := imp ('<->' imp)*              left-associative
//   imp     := or ('->' imp)?                right-associative
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '~' unary | '[' prog ']' unary | '<' prog '>' unary
//            | 'p'k | 'true' | 'false' | '(' formula ')'
//
//   prog    := choice ('||' choice)*
//   choice  := inter ('u' inter)*
//   inter   := seq ('&' seq)*
//   seq     := postfix (';' postfix)*
//   postfix := primary '*'*
//   primary := 'a'k | 'r1' | 'r2' | 's1' | 's2' | '(' prog ')' | unary '?'
//
// Derived connectives are expanded while parsing; the printer folds the
// negation, truth, conjunction and diamond patterns back into sugar.

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pdlkit/error.hpp"
#include "pdlkit/syntax.hpp"

namespace pdlkit {

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty formula", pos_);
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool lookahead(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!lookahead(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) throw ParseError("expected '" + std::string(tok) + "'", pos_);
  }

  // A maximal run of lowercase letters and digits.
  std::string_view peek_word() {
    skip_ws();
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::islower(static_cast<unsigned char>(text_[end])) || std::isdigit(static_cast<unsigned char>(text_[end]))))
      ++end;
    return text_.substr(pos_, end - pos_);
  }

  static bool is_indexed(std::string_view w, char prefix) {
    if (w.size() < 2 || w[0] != prefix) return false;
    for (std::size_t i = 1; i < w.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(w[i]))) return false;
    return true;
  }

  std::uint32_t index_of(std::string_view w) {
    unsigned long long v = 0;
    for (std::size_t i = 1; i < w.size(); ++i) {
      v = v * 10 + static_cast<unsigned>(w[i] - '0');
      if (v > 0xffffffffULL) throw ParseError("index too large in '" + std::string(w) + "'", pos_);
    }
    if (v == 0) throw ParseError("indices start at 1 in '" + std::string(w) + "'", pos_);
    return static_cast<std::uint32_t>(v);
  }

  Formula formula() {
    Formula f = implication();
    while (accept("<->")) f = iff(f, implication());
    return f;
  }

  Formula implication() {
    Formula f = disjunction();
    if (accept("->")) return Formula::implies(f, implication());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (!lookahead("||") && accept("|")) f = disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept("&")) f = conj(f, unary());
    return f;
  }

  Formula unary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    if (accept("~")) return neg(unary());
    if (accept("[")) {
      Program p = program();
      expect("]");
      return Formula::box(p, unary());
    }
    if (!lookahead("<->") && accept("<")) {
      Program p = program();
      expect(">");
      return diamond(p, unary());
    }
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    std::size_t start = pos_;
    std::string_view w = peek_word();
    if (w == "true") {
      pos_ += w.size();
      return top();
    }
    if (w == "false") {
      pos_ += w.size();
      return Formula::falsum();
    }
    if (is_indexed(w, 'p')) {
      pos_ += w.size();
      return Formula::var(index_of(w));
    }
    if (w.empty()) throw ParseError("unexpected '" + std::string(1, text_[start]) + "'", start);
    throw ParseError("unexpected '" + std::string(w) + "' where a formula was expected", start);
  }

  Program program() {
    Program p = choice();
    while (accept("||")) p = Program::par(p, choice());
    return p;
  }

  Program choice() {
    Program p = intersection();
    while (peek_word() == "u") {
      pos_ += 1;
      p = Program::choice(p, intersection());
    }
    return p;
  }

  Program intersection() {
    Program p = sequence();
    while (accept("&")) p = Program::inter(p, sequence());
    return p;
  }

  Program sequence() {
    Program p = postfix();
    while (accept(";")) p = Program::seq(p, postfix());
    return p;
  }

  Program postfix() {
    Program p = primary();
    while (accept("*")) p = Program::star(p);
    return p;
  }

  Program primary() {
    skip_ws();
    std::size_t start = pos_;
    std::string_view w = peek_word();
    if (is_indexed(w, 'a')) {
      pos_ += w.size();
      return Program::atomic(index_of(w));
    }
    if (w == "r1" || w == "r2" || w == "s1" || w == "s2") {
      pos_ += w.size();
      SpecialProgram s = w == "r1" ? SpecialProgram::R1
                         : w == "r2" ? SpecialProgram::R2
                         : w == "s1" ? SpecialProgram::S1
                                     : SpecialProgram::S2;
      return Program::special(s);
    }
    if (lookahead("(")) {
      // Either a parenthesized program or a parenthesized test formula.
      try {
        expect("(");
        Program p = program();
        expect(")");
        if (!lookahead("?")) return p;
      } catch (const ParseError&) {
      }
      pos_ = start;
    }
    Formula f = unary();
    expect("?");
    return Program::test(f);
  }
};

enum Level { kImplies = 1, kAnd = 3, kUnary = 4 };
enum ProgramLevel { kPar = 0, kChoice = 1, kInter = 2, kSeq = 3, kPostfix = 4 };

inline void print_program(std::string& out, const Program& p, int level);

inline void print_formula(std::string& out, const Formula& f, int level) {
  if (f.kind() == Formula::Kind::Var) {
    out += "p" + std::to_string(f.index());
    return;
  }
  if (f.kind() == Formula::Kind::Falsum) {
    out += "false";
    return;
  }
  if (is_top(f)) {
    out += "true";
    return;
  }
  if (f.kind() == Formula::Kind::Box) {
    out += "[";
    print_program(out, f.program(), kPar);
    out += "]";
    print_formula(out, f.body(), kUnary);
    return;
  }
  if (auto c = as_conjunction(f)) {
    bool paren = level > kAnd;
    if (paren) out += "(";
    print_formula(out, c->first, kAnd);
    out += " & ";
    print_formula(out, c->second, kUnary);
    if (paren) out += ")";
    return;
  }
  if (auto d = as_diamond(f)) {
    out += "<";
    print_program(out, d->first, kPar);
    out += ">";
    print_formula(out, d->second, kUnary);
    return;
  }
  if (auto n = as_negation(f)) {
    out += "~";
    print_formula(out, *n, kUnary);
    return;
  }
  bool paren = level > kImplies;
  if (paren) out += "(";
  print_formula(out, f.lhs(), kImplies + 1);
  out += " -> ";
  print_formula(out, f.rhs(), kImplies);
  if (paren) out += ")";
}

inline void print_program(std::string& out, const Program& p, int level) {
  switch (p.kind()) {
    case Program::Kind::Atomic: out += "a" + std::to_string(p.index()); return;
    case Program::Kind::Special: out += to_string(p.special_kind()); return;
    case Program::Kind::Test: {
      const Formula& f = p.formula();
      bool simple = f.kind() == Formula::Kind::Var || f.kind() == Formula::Kind::Falsum || is_top(f);
      if (!simple) out += "(";
      print_formula(out, f, 0);
      if (!simple) out += ")";
      out += "?";
      return;
    }
    case Program::Kind::Star:
      print_program(out, p.inner(), kPostfix);
      out += "*";
      return;
    default: break;
  }
  int own = 0;
  std::string_view op;
  switch (p.kind()) {
    case Program::Kind::Seq: own = kSeq; op = " ; "; break;
    case Program::Kind::Inter: own = kInter; op = " & "; break;
    case Program::Kind::Choice: own = kChoice; op = " u "; break;
    default: own = kPar; op = " || "; break;
  }
  bool paren = level > own;
  if (paren) out += "(";
  print_program(out, p.lhs(), own);
  out += op;
  print_program(out, p.rhs(), own + 1);
  if (paren) out += ")";
}

}  // namespace detail

// Parses `text` and checks it against `dialect`.
inline Formula parse(std::string_view text, Dialect dialect) {
  Formula f = detail::Parser(text).parse_all();
  validate(f, dialect);
  return f;
}

inline std::string print(const Formula& phi) {
  std::string out;
  detail::print_formula(out, phi, 0);
  return out;
}

inline std::string print(const Program& alpha) {
  std::string out;
  detail::print_program(out, alpha, detail::kPar);
  return out;
}

// One formula per line; '#' starts a comment, blank lines are skipped.
inline std::vector<Formula> parse_formula_stream(std::istream& in, Dialect dialect) {
  std::vector<Formula> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse(line, dialect));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), e.position());
    } catch (const DialectError& e) {
      throw DialectError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<Formula> parse_formula_file(const std::string& path, Dialect dialect) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open formula file '" + path + "'");
  return parse_formula_stream(in, dialect);
}

}  // namespace pdlkit
