#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tridir/derivation.hpp"
#include "tridir/letnormal.hpp"
#include "tridir/subtyping.hpp"
#include "tridir/syntax.hpp"

namespace tridir {

struct ValidationResult {
  bool ok = true;
  std::string error;  // first violated schema, if any

  explicit operator bool() const { return ok; }
};

namespace detail {

// Checks every node of a derivation against its rule schema, without using
// the proof search.
class Validator {
 public:
  explicit Validator(System sys) : sys_(sys) {}

  ValidationResult run(const Derivation& d) {
    node(d);
    return result_;
  }

 private:
  bool fail(const Derivation& d, const std::string& why) {
    if (result_.ok) {
      result_.ok = false;
      result_.error = std::string(to_string(d.rule)) + " at " + to_string(d.judgment.subject) +
                      ": " + why;
    }
    return false;
  }

  static std::vector<LinearEntry> sorted(const LinearContext& d) {
    auto v = d.entries();
    std::sort(v.begin(), v.end(),
              [](const LinearEntry& a, const LinearEntry& b) { return a.name < b.name; });
    return v;
  }

  static bool same_delta(const LinearContext& a, const LinearContext& b) {
    return sorted(a) == sorted(b);
  }

  static LinearContext concat(const LinearContext& a, const LinearContext& b) {
    LinearContext out = a;
    for (const auto& e : b.entries()) out = out.with(e);
    return out;
  }

  static bool is_check_rule(Rule r) {
    switch (r) {
      case Rule::Var:
      case Rule::LinVar:
      case Rule::ArrE:
      case Rule::FixVar:
      case Rule::CtxAnno:
      case Rule::AndE1:
      case Rule::AndE2:
        return false;
      default:
        return true;
    }
  }

  // The entry of `after` that is not in `before`, when Δ grew by exactly one.
  static std::optional<LinearEntry> added(const LinearContext& before,
                                          const LinearContext& after) {
    if (after.size() != before.size() + 1) return std::nullopt;
    std::optional<LinearEntry> out;
    for (const auto& e : after.entries()) {
      if (before.lookup(e.name) == nullptr) {
        if (out) return std::nullopt;
        out = e;
      }
    }
    return out;
  }

  // J's Δ with entry x retyped: the child of a left rule.
  static bool retyped_from(const LinearContext& parent, const LinearContext& child,
                           const std::string& x, const Type& t) {
    return same_delta(parent.replaced(LinearEntry::linear(x, t)), child);
  }

  bool judgment_is(const Derivation& c, Direction dir, const TypingContext& g,
                   const Term& subject, const Type* type) {
    const Judgment& j = c.judgment;
    return j.direction == dir && j.gamma == g && j.subject == subject &&
           (type == nullptr || j.type == *type);
  }

  bool node(const Derivation& d) {
    const Judgment& j = d.judgment;
    const auto& ch = d.children;
    const Term& e = j.subject;
    const Type& c = j.type;

    if ((j.direction == Direction::Check) != is_check_rule(d.rule)) {
      return fail(d, "wrong direction");
    }
    if (!ok_delta(j.delta, e)) return fail(d, "linearity violated");
    if (!ok_gamma(j.gamma, e)) return fail(d, "subject not scoped by the context");
    if (sys_ == System::Tri &&
        (d.rule == Rule::Let || d.rule == Rule::SlackLet || d.rule == Rule::SlackVar)) {
      return fail(d, "let-system rule in a tridirectional derivation");
    }
    if (sys_ == System::LetNormal && d.rule == Rule::DirectL) {
      return fail(d, "directL in a let-normal derivation");
    }
    if (d.rule != Rule::Sub && d.subtyping) return fail(d, "stray subtyping derivation");

    auto arity = [&](std::size_t n) { return ch.size() == n || fail(d, "wrong arity"); };

    switch (d.rule) {
      case Rule::Var:
      case Rule::FixVar: {
        if (!arity(0)) return false;
        const bool var = d.rule == Rule::Var;
        if (!e.is(var ? TermKind::Var : TermKind::FixVar)) return fail(d, "subject shape");
        if (!j.delta.empty()) return fail(d, "linear context not empty");
        const Binding* b = j.gamma.lookup(e.name());
        if (b == nullptr || b->kind != (var ? VarKind::Ordinary : VarKind::Fix) || b->type != c) {
          return fail(d, "assumption does not match");
        }
        return true;
      }
      case Rule::LinVar: {
        if (!arity(0)) return false;
        if (!e.is(TermKind::LinVar) || j.delta.size() != 1) return fail(d, "subject shape");
        const LinearEntry& en = j.delta.entries().front();
        if (en.name != e.name() || en.is_slack() || *en.type != c) {
          return fail(d, "linear assumption does not match");
        }
        return true;
      }
      case Rule::ArrI: {
        if (!arity(1)) return false;
        if (!e.is(TermKind::Lam) || !c.is(TypeKind::Arrow) || !j.delta.empty()) {
          return fail(d, "subject shape");
        }
        auto g2 = j.gamma.extended(Binding{e.name(), VarKind::Ordinary, c.left()});
        const Type cod = c.right();
        if (!judgment_is(ch[0], Direction::Check, g2, e.body(), &cod) ||
            !ch[0].judgment.delta.empty()) {
          return fail(d, "premise mismatch");
        }
        return node(ch[0]);
      }
      case Rule::Fix: {
        if (!arity(1)) return false;
        if (!e.is(TermKind::Fix) || !j.delta.empty()) return fail(d, "subject shape");
        auto g2 = j.gamma.extended(Binding{e.name(), VarKind::Fix, c});
        if (!judgment_is(ch[0], Direction::Check, g2, e.body(), &c) ||
            !ch[0].judgment.delta.empty()) {
          return fail(d, "premise mismatch");
        }
        return node(ch[0]);
      }
      case Rule::ArrE: {
        if (!arity(2)) return false;
        if (!e.is(TermKind::App)) return fail(d, "subject shape");
        const Type& fty = ch[0].judgment.type;
        if (!judgment_is(ch[0], Direction::Synth, j.gamma, e.fn(), nullptr) ||
            !fty.is(TypeKind::Arrow) || fty.right() != c) {
          return fail(d, "function premise mismatch");
        }
        const Type dom = fty.left();
        if (!judgment_is(ch[1], Direction::Check, j.gamma, e.arg(), &dom)) {
          return fail(d, "argument premise mismatch");
        }
        if (!same_delta(concat(ch[0].judgment.delta, ch[1].judgment.delta), j.delta)) {
          return fail(d, "linear context split mismatch");
        }
        return node(ch[0]) && node(ch[1]);
      }
      case Rule::Sub: {
        if (!arity(1)) return false;
        if (!judgment_is(ch[0], Direction::Synth, j.gamma, e, nullptr) ||
            !same_delta(ch[0].judgment.delta, j.delta)) {
          return fail(d, "premise mismatch");
        }
        if (!d.subtyping || d.subtyping->lower != ch[0].judgment.type ||
            d.subtyping->upper != c || !validate(*d.subtyping)) {
          return fail(d, "invalid subtyping derivation");
        }
        return node(ch[0]);
      }
      case Rule::BotL: {
        if (!arity(0)) return false;
        for (const auto& en : j.delta.entries()) {
          if (!en.is_slack() && en.type->is(TypeKind::Bot)) return true;
        }
        return fail(d, "no linear assumption of type bot");
      }
      case Rule::CtxAnno: {
        if (!arity(1)) return false;
        if (!e.is(TermKind::Anno)) return fail(d, "subject shape");
        if (!judgment_is(ch[0], Direction::Check, j.gamma, e.subject(), &c) ||
            !same_delta(ch[0].judgment.delta, j.delta)) {
          return fail(d, "premise mismatch");
        }
        bool found = false;
        for (const auto& an : e.annotations()) {
          if (an.type != c) continue;
          bool supported = true;
          for (const auto& b : an.context.entries()) {
            const Binding* have = j.gamma.lookup(b.name);
            if (have == nullptr || !subtype(have->type, b.type)) supported = false;
          }
          if (supported) found = true;
        }
        if (!found) return fail(d, "no applicable annotation");
        return node(ch[0]);
      }
      case Rule::AndL1:
      case Rule::AndL2:
      case Rule::OrL: {
        const bool orl = d.rule == Rule::OrL;
        if (!arity(orl ? 2 : 1)) return false;
        for (const auto& k : ch) {
          if (!judgment_is(k, Direction::Check, j.gamma, e, &c)) {
            return fail(d, "premise mismatch");
          }
        }
        bool matched = false;
        for (const auto& en : j.delta.entries()) {
          if (en.is_slack()) continue;
          const Type& t = *en.type;
          if (orl && t.is(TypeKind::Union)) {
            matched = retyped_from(j.delta, ch[0].judgment.delta, en.name, t.left()) &&
                      retyped_from(j.delta, ch[1].judgment.delta, en.name, t.right());
          } else if (!orl && t.is(TypeKind::Intersect)) {
            const Type part = d.rule == Rule::AndL1 ? t.left() : t.right();
            matched = retyped_from(j.delta, ch[0].judgment.delta, en.name, part);
          }
          if (matched) break;
        }
        if (!matched) return fail(d, "no matching linear assumption");
        for (const auto& k : ch) {
          if (!node(k)) return false;
        }
        return true;
      }
      case Rule::AndI: {
        if (!arity(2)) return false;
        if (!(sys_ == System::Tri ? is_tri_value(e) : is_value(e))) {
          return fail(d, "subject is not a value");
        }
        if (!c.is(TypeKind::Intersect)) return fail(d, "goal is not an intersection");
        const Type l = c.left(), r = c.right();
        if (!judgment_is(ch[0], Direction::Check, j.gamma, e, &l) ||
            !judgment_is(ch[1], Direction::Check, j.gamma, e, &r) ||
            !same_delta(ch[0].judgment.delta, j.delta) ||
            !same_delta(ch[1].judgment.delta, j.delta)) {
          return fail(d, "premise mismatch");
        }
        return node(ch[0]) && node(ch[1]);
      }
      case Rule::AndE1:
      case Rule::AndE2: {
        if (!arity(1)) return false;
        const Type& t = ch[0].judgment.type;
        if (!judgment_is(ch[0], Direction::Synth, j.gamma, e, nullptr) ||
            !same_delta(ch[0].judgment.delta, j.delta) || !t.is(TypeKind::Intersect) ||
            (d.rule == Rule::AndE1 ? t.left() : t.right()) != c) {
          return fail(d, "premise mismatch");
        }
        return node(ch[0]);
      }
      case Rule::OrI1:
      case Rule::OrI2: {
        if (!arity(1)) return false;
        if (!c.is(TypeKind::Union)) return fail(d, "goal is not a union");
        const Type part = d.rule == Rule::OrI1 ? c.left() : c.right();
        if (!judgment_is(ch[0], Direction::Check, j.gamma, e, &part) ||
            !same_delta(ch[0].judgment.delta, j.delta)) {
          return fail(d, "premise mismatch");
        }
        return node(ch[0]);
      }
      case Rule::DirectL: {
        if (!arity(2)) return false;
        const Judgment& named = ch[0].judgment;
        const Judgment& rest = ch[1].judgment;
        if (named.direction != Direction::Synth || !(named.gamma == j.gamma) ||
            rest.direction != Direction::Check || !(rest.gamma == j.gamma) || rest.type != c) {
          return fail(d, "premise mismatch");
        }
        if (!is_synth_form(named.subject) || named.subject.is(TermKind::LinVar)) {
          return fail(d, "named subterm is a linear variable or not synthesizing");
        }
        // rest.delta = Δ2, x:A with Δ1, Δ2 = Δ.
        std::optional<LinearEntry> x;
        for (const auto& en : rest.delta.entries()) {
          if (j.delta.lookup(en.name) == nullptr && named.delta.lookup(en.name) == nullptr) {
            if (x) return fail(d, "more than one new linear variable");
            x = en;
          }
        }
        if (!x || x->is_slack() || *x->type != named.type) {
          return fail(d, "new linear variable missing or mistyped");
        }
        if (!same_delta(concat(named.delta, rest.delta.without(x->name)), j.delta)) {
          return fail(d, "linear context split mismatch");
        }
        bool placed = false;
        for (const auto& dec : decompose_eval(e)) {
          if (dec.focus == named.subject &&
              plug(dec.context, Term::lin(x->name)) == rest.subject) {
            placed = true;
            break;
          }
        }
        if (!placed) return fail(d, "named subterm is not in evaluation position");
        return node(ch[0]) && node(ch[1]);
      }
      case Rule::Let: {
        if (!arity(2)) return false;
        if (!e.is(TermKind::Let)) return fail(d, "subject shape");
        const Judgment& r = ch[0].judgment;
        const Judgment& b = ch[1].judgment;
        if (!judgment_is(ch[0], Direction::Synth, j.gamma, e.rhs(), nullptr) ||
            !judgment_is(ch[1], Direction::Check, j.gamma, e.let_body(), &c)) {
          return fail(d, "premise mismatch");
        }
        const LinearEntry* x = b.delta.lookup(e.name());
        if (x == nullptr || x->is_slack() || *x->type != r.type) {
          return fail(d, "bound variable missing or mistyped");
        }
        if (!same_delta(concat(r.delta, b.delta.without(e.name())), j.delta)) {
          return fail(d, "linear context split mismatch");
        }
        bool positioned = false;
        for (const auto& dec : elongated_decompose(e.let_body())) {
          if (dec.focus.is(TermKind::LinVar) && dec.focus.name() == e.name()) positioned = true;
        }
        if (!positioned) return fail(d, "bound variable not in elongated position");
        return node(ch[0]) && node(ch[1]);
      }
      case Rule::SlackLet: {
        if (!arity(1)) return false;
        if (!e.is(TermKind::SlackLet) || !e.rhs().is(TermKind::Anno) ||
            !is_value(e.rhs().subject())) {
          return fail(d, "subject shape");
        }
        if (!judgment_is(ch[0], Direction::Check, j.gamma, e.let_body(), &c) ||
            !same_delta(ch[0].judgment.delta,
                        j.delta.with(LinearEntry::slack_entry(e.name(), e.rhs())))) {
          return fail(d, "premise mismatch");
        }
        return node(ch[0]);
      }
      case Rule::SlackVar: {
        if (!arity(2)) return false;
        const Judgment& v = ch[0].judgment;
        const Judgment& rest = ch[1].judgment;
        if (v.direction != Direction::Synth || !(v.gamma == j.gamma) ||
            !judgment_is(ch[1], Direction::Check, j.gamma, e, &c)) {
          return fail(d, "premise mismatch");
        }
        std::optional<LinearEntry> slack;
        for (const auto& en : j.delta.entries()) {
          if (en.is_slack() && *en.slack == v.subject) {
            const LinearEntry* now = rest.delta.lookup(en.name);
            if (now != nullptr && !now->is_slack() && *now->type == v.type) slack = en;
          }
        }
        if (!slack) return fail(d, "no slack entry discharged");
        if (!same_delta(concat(concat(v.delta, rest.delta.without(slack->name)),
                               LinearContext{*slack}),
                        j.delta)) {
          return fail(d, "linear context split mismatch");
        }
        return node(ch[0]) && node(ch[1]);
      }
    }
    return fail(d, "unknown rule");
  }

  System sys_;
  ValidationResult result_;
};

}  // namespace detail

inline ValidationResult validate(const Derivation& d, System system) {
  detail::Validator v(system);
  return v.run(d);
}

}  // namespace tridir
