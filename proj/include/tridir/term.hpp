#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tridir/context.hpp"
#include "tridir/type.hpp"

namespace tridir {

// A contextual typing annotation (Γ0 ⊢ A). An empty context applies
// everywhere.
struct Annotation {
  TypingContext context;
  Type type;

  friend bool operator==(const Annotation& a, const Annotation& b) {
    return a.type == b.type && a.context == b.context;
  }
};

using Annotations = std::vector<Annotation>;

enum class TermKind : std::uint8_t {
  Var,       // x
  FixVar,    // u
  LinVar,    // x^ (linear)
  Lam,       // fn x => e
  App,       // e1 e2
  Fix,       // fix u => e
  Anno,      // (e : As)
  Let,       // let x^ = e1 in e2
  SlackLet,  // let! x^ = (v : As) in e2
  Hole,      // [] in an evaluation context
};

// Immutable term tree shared between the source language and the
// let-normal language. Source terms never contain Let, SlackLet or Hole.
class Term {
 public:
  static Term var(std::string x) { return make(TermKind::Var, std::move(x)); }
  static Term fix_var(std::string u) { return make(TermKind::FixVar, std::move(u)); }
  static Term lin(std::string x) { return make(TermKind::LinVar, std::move(x)); }
  static Term hole() {
    static const Term h = make(TermKind::Hole, "");
    return h;
  }
  static Term lam(std::string x, Term body) {
    return make(TermKind::Lam, std::move(x), std::move(body.node_));
  }
  static Term fix(std::string u, Term body) {
    return make(TermKind::Fix, std::move(u), std::move(body.node_));
  }
  static Term app(Term fn, Term arg) {
    return make(TermKind::App, "", std::move(fn.node_), std::move(arg.node_));
  }
  static Term anno(Term subject, Annotations as) {
    return make(TermKind::Anno, "", std::move(subject.node_), nullptr,
                std::make_shared<const Annotations>(std::move(as)));
  }
  static Term anno(Term subject, std::shared_ptr<const Annotations> as) {
    return make(TermKind::Anno, "", std::move(subject.node_), nullptr, std::move(as));
  }
  static Term let(std::string x, Term rhs, Term body) {
    return make(TermKind::Let, std::move(x), std::move(rhs.node_), std::move(body.node_));
  }
  static Term slack_let(std::string x, Term rhs, Term body) {
    return make(TermKind::SlackLet, std::move(x), std::move(rhs.node_),
                std::move(body.node_));
  }

  TermKind kind() const { return node_->kind; }
  bool is(TermKind k) const { return node_->kind == k; }
  // Variable name, or the name bound by Lam/Fix/Let/SlackLet.
  const std::string& name() const { return node_->name; }

  // Lam/Fix body.
  Term body() const { return Term(node_->a); }
  // App parts.
  Term fn() const { return Term(node_->a); }
  Term arg() const { return Term(node_->b); }
  // Anno parts.
  Term subject() const { return Term(node_->a); }
  const Annotations& annotations() const { return *node_->annos; }
  const std::shared_ptr<const Annotations>& shared_annotations() const {
    return node_->annos;
  }
  // Let/SlackLet parts.
  Term rhs() const { return Term(node_->a); }
  Term let_body() const { return Term(node_->b); }

  std::size_t hash() const { return node_->hash; }
  // Node count; annotation types do not count.
  std::size_t size() const { return node_->size; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b) {
    return a.node_ == b.node_ || equal_nodes(*a.node_, *b.node_);
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    TermKind kind;
    std::string name;
    std::shared_ptr<const Node> a, b;
    std::shared_ptr<const Annotations> annos;
    std::size_t hash = 0;
    std::size_t size = 1;
  };

  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Term make(TermKind k, std::string name, std::shared_ptr<const Node> a = nullptr,
                   std::shared_ptr<const Node> b = nullptr,
                   std::shared_ptr<const Annotations> annos = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    std::size_t h = hash_combine(static_cast<std::size_t>(k) * 31 + 7,
                                 std::hash<std::string>{}(n->name));
    if (a) {
      h = hash_combine(h, a->hash);
      n->size += a->size;
    }
    if (b) {
      h = hash_combine(h, b->hash);
      n->size += b->size;
    }
    if (annos) {
      for (const auto& an : *annos) {
        h = hash_combine(h, an.type.hash());
        h = hash_combine(h, an.context.hash());
      }
    }
    n->hash = h;
    n->a = std::move(a);
    n->b = std::move(b);
    n->annos = std::move(annos);
    return Term(std::move(n));
  }

  static bool equal_nodes(const Node& x, const Node& y) {
    if (x.hash != y.hash || x.kind != y.kind || x.size != y.size || x.name != y.name) {
      return false;
    }
    if (x.a && !(x.a == y.a || equal_nodes(*x.a, *y.a))) return false;
    if (x.b && !(x.b == y.b || equal_nodes(*x.b, *y.b))) return false;
    if (x.annos && !(x.annos == y.annos || *x.annos == *y.annos)) return false;
    return true;
  }

  std::shared_ptr<const Node> node_;
};

inline bool is_let_form(const Term& e) {
  return e.is(TermKind::Let) || e.is(TermKind::SlackLet);
}

namespace detail {

inline void print_annotation(std::string& out, const Annotation& a) {
  if (!a.context.empty()) {
    out += to_string(a.context);
    out += " |- ";
  }
  out += to_string(a.type);
}

// Levels: 0 anywhere, 1 function position, 2 argument position.
inline void print_term(std::string& out, const Term& e, int level) {
  switch (e.kind()) {
    case TermKind::Var:
    case TermKind::FixVar:
      out += e.name();
      return;
    case TermKind::LinVar:
      out += e.name();
      out += '^';
      return;
    case TermKind::Hole:
      out += "[]";
      return;
    case TermKind::Anno: {
      out += '(';
      print_term(out, e.subject(), 0);
      out += " : ";
      bool first = true;
      for (const auto& a : e.annotations()) {
        if (!first) out += ", ";
        first = false;
        print_annotation(out, a);
      }
      out += ')';
      return;
    }
    case TermKind::App: {
      const bool parens = level >= 2;
      if (parens) out += '(';
      print_term(out, e.fn(), 1);
      out += ' ';
      print_term(out, e.arg(), 2);
      if (parens) out += ')';
      return;
    }
    case TermKind::Lam:
    case TermKind::Fix:
    case TermKind::Let:
    case TermKind::SlackLet: {
      const bool parens = level >= 1;
      if (parens) out += '(';
      if (e.is(TermKind::Lam)) {
        out += "fn " + e.name() + " => ";
        print_term(out, e.body(), 0);
      } else if (e.is(TermKind::Fix)) {
        out += "fix " + e.name() + " => ";
        print_term(out, e.body(), 0);
      } else {
        out += e.is(TermKind::Let) ? "let " : "let! ";
        out += e.name() + "^ = ";
        print_term(out, e.rhs(), 0);
        out += " in ";
        print_term(out, e.let_body(), 0);
      }
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Term& e) {
  std::string out;
  detail::print_term(out, e, 0);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Term& e) {
  return os << to_string(e);
}

}  // namespace tridir

template <>
struct std::hash<tridir::Term> {
  std::size_t operator()(const tridir::Term& t) const noexcept { return t.hash(); }
};
