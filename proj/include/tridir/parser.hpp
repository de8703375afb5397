#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tridir/context.hpp"
#include "tridir/term.hpp"
#include "tridir/type.hpp"

namespace tridir {

// Surface syntax:
//
//   types   A ::= bot | P | A -> A | A /\ A | A \/ A | (A)
//           /\ binds tighter than \/, which binds tighter than ->
//   terms   e ::= x | fn x => e | fix u => e | e e | (e) | (e : As)
//           As ::= [G |-] A, ...      G ::= x : A, ...
//   files   (type P; | val x : A;)* e
//
// A file without type declarations may use any atom names.
//
// `#` starts a comment. In extended mode terms may also contain linear
// variables x^ and let forms `let x^ = e in e`, `let! x^ = e in e`, as
// printed by the tools.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

class DuplicateDecl : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownAtom : public ParseError {
 public:
  using ParseError::ParseError;
};

struct SourceFile {
  std::vector<std::string> atoms;
  TypingContext gamma;
  Term subject = Term::hole();
};

struct ParseOptions {
  bool extended = false;
  // Atoms allowed in types; unset means any name is accepted.
  std::optional<std::set<std::string>> atoms;
  // Decides whether a free name is a fix variable.
  TypingContext scope;
};

namespace detail {

enum class Tok {
  Ident, Arrow, DArrow, Meet, Join, Turnstile, LParen, RParen, Colon, Comma, Semi,
  Caret, Bang, Equals, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](const char* s) { return src.compare(i, std::char_traits<char>::length(s), s) == 0; };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) {
        ++j;
      }
      out.push_back({Tok::Ident, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    struct Sym {
      const char* text;
      Tok kind;
    };
    static const Sym syms[] = {{"->", Tok::Arrow}, {"=>", Tok::DArrow}, {"/\\", Tok::Meet},
                               {"\\/", Tok::Join}, {"|-", Tok::Turnstile}, {"(", Tok::LParen},
                               {")", Tok::RParen}, {":", Tok::Colon},    {",", Tok::Comma},
                               {";", Tok::Semi},   {"^", Tok::Caret},    {"!", Tok::Bang},
                               {"=", Tok::Equals}};
    bool matched = false;
    for (const auto& s : syms) {
      if (starts(s.text)) {
        out.push_back({s.kind, s.text, l, cl});
        advance(std::char_traits<char>::length(s.text));
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

inline bool is_keyword(const std::string& s) {
  return s == "fn" || s == "fix" || s == "let" || s == "in" || s == "type" || s == "val" ||
         s == "bot";
}

class Parser {
 public:
  Parser(const std::string& src, ParseOptions opts) : toks_(lex(src)), opts_(std::move(opts)) {
    for (const auto& b : opts_.scope.entries()) scope_.push_back({b.name, b.kind});
  }

  SourceFile file() {
    SourceFile out;
    std::set<std::string> atoms;
    std::set<std::string> vals;
    // Atoms are checked against the declarations only when there are some.
    for (const auto& t : toks_) {
      if (t.kind == Tok::Ident && t.text == "type") opts_.atoms = std::set<std::string>{};
    }
    for (;;) {
      if (at_word("type")) {
        next();
        const Token name = ident("atom name");
        if (!atoms.insert(name.text).second) {
          throw DuplicateDecl(name.line, name.column, "duplicate type declaration " + name.text);
        }
        out.atoms.push_back(name.text);
        opts_.atoms->insert(name.text);
        expect(Tok::Semi, "';'");
      } else if (at_word("val")) {
        next();
        const Token name = ident("variable name");
        expect(Tok::Colon, "':'");
        Type t = type();
        if (!vals.insert(name.text).second) {
          throw DuplicateDecl(name.line, name.column, "duplicate val declaration " + name.text);
        }
        out.gamma = out.gamma.extended({name.text, VarKind::Ordinary, t});
        expect(Tok::Semi, "';'");
      } else {
        break;
      }
    }
    out.subject = term();
    expect(Tok::End, "end of input");
    return out;
  }

  Type whole_type() {
    Type t = type();
    expect(Tok::End, "end of input");
    return t;
  }

  Term whole_term() {
    Term e = term();
    expect(Tok::End, "end of input");
    return e;
  }

  TypingContext whole_context() {
    TypingContext g;
    if (peek().kind != Tok::End) g = context_entries();
    expect(Tok::End, "end of input");
    return g;
  }

 private:
  // Types ---------------------------------------------------------------

  Type type() {
    Type dom = join_type();
    if (peek().kind == Tok::Arrow) {
      next();
      return Type::arrow(dom, type());
    }
    return dom;
  }

  Type join_type() {
    Type t = meet_type();
    while (peek().kind == Tok::Join) {
      next();
      t = Type::join(t, meet_type());
    }
    return t;
  }

  Type meet_type() {
    Type t = atom_type();
    while (peek().kind == Tok::Meet) {
      next();
      t = Type::meet(t, atom_type());
    }
    return t;
  }

  Type atom_type() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Type inner = type();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "bot") {
        next();
        return Type::bot();
      }
      if (is_keyword(t.text)) fail(t, "expected a type, found '" + t.text + "'");
      if (opts_.atoms && opts_.atoms->count(t.text) == 0) {
        throw UnknownAtom(t.line, t.column, "undeclared atom " + t.text);
      }
      next();
      return Type::base(t.text);
    }
    fail(t, "expected a type");
  }

  // Terms ---------------------------------------------------------------

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "fn") {
      next();
      const std::string x = ident("parameter name").text;
      expect(Tok::DArrow, "'=>'");
      scope_.push_back({x, VarKind::Ordinary});
      Term body = term();
      scope_.pop_back();
      return Term::lam(x, body);
    }
    if (t.kind == Tok::Ident && t.text == "fix") {
      next();
      const std::string u = ident("fix variable name").text;
      expect(Tok::DArrow, "'=>'");
      scope_.push_back({u, VarKind::Fix});
      Term body = term();
      scope_.pop_back();
      return Term::fix(u, body);
    }
    if (t.kind == Tok::Ident && t.text == "let") {
      if (!opts_.extended) fail(t, "let is not part of the source language");
      next();
      bool slack = false;
      if (peek().kind == Tok::Bang) {
        next();
        slack = true;
      }
      const std::string x = ident("linear variable").text;
      expect(Tok::Caret, "'^'");
      expect(Tok::Equals, "'='");
      Term rhs = term();
      if (!at_word("in")) fail(peek(), "expected 'in'");
      next();
      Term body = term();
      return slack ? Term::slack_let(x, rhs, body) : Term::let(x, rhs, body);
    }
    Term e = atom_term();
    while (starts_atom()) e = Term::app(e, atom_term());
    return e;
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::LParen) return true;
    return t.kind == Tok::Ident && !is_keyword(t.text);
  }

  Term atom_term() {
    const Token t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Term inner = term();
      if (peek().kind == Tok::Colon) {
        next();
        Annotations as;
        as.push_back(annotation());
        while (peek().kind == Tok::Comma) {
          next();
          as.push_back(annotation());
        }
        inner = Term::anno(inner, std::move(as));
      }
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      next();
      if (peek().kind == Tok::Caret) {
        if (!opts_.extended) fail(peek(), "linear variables are not part of the source language");
        next();
        return Term::lin(t.text);
      }
      return kind_of(t.text) == VarKind::Fix ? Term::fix_var(t.text) : Term::var(t.text);
    }
    fail(t, "expected a term");
  }

  // An entry `G |- A` or `|- A` or `A`; a context starts with `x :`.
  Annotation annotation() {
    if (peek().kind == Tok::Turnstile) {
      next();
      return {TypingContext{}, type()};
    }
    if (!starts_binding()) return {TypingContext{}, type()};
    TypingContext g = context_entries();
    expect(Tok::Turnstile, "'|-'");
    return {g, type()};
  }

  TypingContext context_entries() {
    TypingContext g;
    for (;;) {
      const Token name = ident("variable name");
      expect(Tok::Colon, "':'");
      g = g.extended({name.text, kind_of(name.text), type()});
      if (peek().kind == Tok::Comma && starts_binding(1)) {
        next();
        continue;
      }
      return g;
    }
  }

  bool starts_binding(std::size_t skip = 0) const {
    const Token& a = toks_[std::min(pos_ + skip, toks_.size() - 1)];
    const Token& b = toks_[std::min(pos_ + skip + 1, toks_.size() - 1)];
    return a.kind == Tok::Ident && !is_keyword(a.text) && b.kind == Tok::Colon;
  }

  VarKind kind_of(const std::string& x) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == x) return it->second;
    }
    return VarKind::Ordinary;
  }

  // Tokens ----------------------------------------------------------------

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  bool at_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }

  Token ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail(t, "expected " + what);
    return next();
  }

  void expect(Tok k, const std::string& what) {
    if (peek().kind != k) {
      const Token& t = peek();
      fail(t, "expected " + what + (t.kind == Tok::End ? ", found end of input"
                                                       : ", found '" + t.text + "'"));
    }
    next();
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.column, msg);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
  std::vector<std::pair<std::string, VarKind>> scope_;
};

}  // namespace detail

inline SourceFile parse(const std::string& text, bool extended = false) {
  return detail::Parser(text, {extended, std::nullopt, {}}).file();
}

inline Type parse_type(const std::string& text,
                       std::optional<std::set<std::string>> atoms = std::nullopt) {
  return detail::Parser(text, {false, std::move(atoms), {}}).whole_type();
}

inline Term parse_term(const std::string& text, bool extended = false,
                       const TypingContext& scope = {}) {
  return detail::Parser(text, {extended, std::nullopt, scope}).whole_term();
}

inline TypingContext parse_context(const std::string& text) {
  return detail::Parser(text, {false, std::nullopt, {}}).whole_context();
}

}  // namespace tridir
