#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tridir/linear_context.hpp"
#include "tridir/term.hpp"

namespace tridir {

// ---------------------------------------------------------------------------
// Variables

struct FreeVar {
  std::string name;
  VarKind kind;
  friend bool operator<(const FreeVar& a, const FreeVar& b) {
    return std::tie(a.kind, a.name) < std::tie(b.kind, b.name);
  }
  friend bool operator==(const FreeVar& a, const FreeVar& b) {
    return a.kind == b.kind && a.name == b.name;
  }
};

namespace detail {

inline void collect_free(const Term& e, std::vector<std::string>& bound_ord,
                         std::vector<std::string>& bound_fix, std::set<FreeVar>& out) {
  auto bound = [](const std::vector<std::string>& bs, const std::string& x) {
    return std::find(bs.begin(), bs.end(), x) != bs.end();
  };
  switch (e.kind()) {
    case TermKind::Var:
      if (!bound(bound_ord, e.name())) out.insert({e.name(), VarKind::Ordinary});
      return;
    case TermKind::FixVar:
      if (!bound(bound_fix, e.name())) out.insert({e.name(), VarKind::Fix});
      return;
    case TermKind::LinVar:
    case TermKind::Hole:
      return;
    case TermKind::Lam:
      bound_ord.push_back(e.name());
      collect_free(e.body(), bound_ord, bound_fix, out);
      bound_ord.pop_back();
      return;
    case TermKind::Fix:
      bound_fix.push_back(e.name());
      collect_free(e.body(), bound_ord, bound_fix, out);
      bound_fix.pop_back();
      return;
    case TermKind::App:
      collect_free(e.fn(), bound_ord, bound_fix, out);
      collect_free(e.arg(), bound_ord, bound_fix, out);
      return;
    case TermKind::Anno:
      collect_free(e.subject(), bound_ord, bound_fix, out);
      return;
    case TermKind::Let:
    case TermKind::SlackLet:
      collect_free(e.rhs(), bound_ord, bound_fix, out);
      collect_free(e.let_body(), bound_ord, bound_fix, out);
      return;
  }
}

inline void collect_linear(const Term& e, std::vector<std::string>& bound,
                           std::vector<std::string>& out) {
  switch (e.kind()) {
    case TermKind::LinVar:
      if (std::find(bound.begin(), bound.end(), e.name()) == bound.end()) {
        out.push_back(e.name());
      }
      return;
    case TermKind::Lam:
    case TermKind::Fix:
      collect_linear(e.body(), bound, out);
      return;
    case TermKind::App:
      collect_linear(e.fn(), bound, out);
      collect_linear(e.arg(), bound, out);
      return;
    case TermKind::Anno:
      collect_linear(e.subject(), bound, out);
      return;
    case TermKind::Let:
    case TermKind::SlackLet:
      collect_linear(e.rhs(), bound, out);
      bound.push_back(e.name());
      collect_linear(e.let_body(), bound, out);
      bound.pop_back();
      return;
    default:
      return;
  }
}

}  // namespace detail

// Free ordinary and fix variables of e.
inline std::set<FreeVar> free_vars(const Term& e) {
  std::vector<std::string> bo, bf;
  std::set<FreeVar> out;
  detail::collect_free(e, bo, bf, out);
  return out;
}

// Free linear variable occurrences of e in left-to-right order, with
// repetitions.
inline std::vector<std::string> linear_occurrences(const Term& e) {
  std::vector<std::string> bound, out;
  detail::collect_linear(e, bound, out);
  return out;
}

inline bool occurs_linear(const Term& e, const std::string& x) {
  const auto occ = linear_occurrences(e);
  return std::find(occ.begin(), occ.end(), x) != occ.end();
}

// Γ ⊢ e ok: every free variable of e is declared in Γ with the right kind.
inline bool ok_gamma(const TypingContext& gamma, const Term& e) {
  for (const auto& fv : free_vars(e)) {
    const Binding* b = gamma.lookup(fv.name);
    if (b == nullptr || b->kind != fv.kind) return false;
  }
  return true;
}

// Δ ⊩ e ok: each linear variable of Δ occurs exactly once and no other
// linear variable occurs. Occurrences inside the right-hand sides of slack
// entries of Δ count as occurrences.
inline bool ok_delta(const LinearContext& delta, const Term& e) {
  std::vector<std::string> occ = linear_occurrences(e);
  for (const auto& en : delta.entries()) {
    if (en.is_slack()) {
      auto more = linear_occurrences(*en.slack);
      occ.insert(occ.end(), more.begin(), more.end());
    }
  }
  std::map<std::string, int> count;
  for (const auto& x : occ) ++count[x];
  if (count.size() != delta.size()) return false;
  for (const auto& en : delta.entries()) {
    auto it = count.find(en.name);
    if (it == count.end() || it->second != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Substitution

inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = "v";
  for (int i = 1;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

namespace detail {

inline std::set<std::string> all_names(const Term& e) {
  std::set<std::string> out;
  std::vector<Term> stack{e};
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (!t.name().empty()) out.insert(t.name());
    switch (t.kind()) {
      case TermKind::Lam:
      case TermKind::Fix:
        stack.push_back(t.body());
        break;
      case TermKind::App:
        stack.push_back(t.fn());
        stack.push_back(t.arg());
        break;
      case TermKind::Anno:
        stack.push_back(t.subject());
        for (const auto& a : t.annotations()) {
          for (const auto& b : a.context.entries()) out.insert(b.name);
        }
        break;
      case TermKind::Let:
      case TermKind::SlackLet:
        stack.push_back(t.rhs());
        stack.push_back(t.let_body());
        break;
      default:
        break;
    }
  }
  return out;
}

inline std::shared_ptr<const Annotations> rename_in_annotations(
    const std::shared_ptr<const Annotations>& as, const std::string& from,
    const std::string& to) {
  bool touched = false;
  for (const auto& a : *as) {
    if (a.context.lookup(from)) touched = true;
  }
  if (!touched) return as;
  Annotations out;
  for (const auto& a : *as) {
    TypingContext ctx;
    for (const auto& b : a.context.entries()) {
      Binding nb = b;
      if (nb.name == from) nb.name = to;
      ctx = ctx.extended(nb);
    }
    out.push_back({ctx, a.type});
  }
  return std::make_shared<const Annotations>(std::move(out));
}

// Renames annotation-context mentions of `from` to `to` throughout e,
// stopping at binders that shadow `from`.
inline Term rename_annotation_mentions(const Term& e, const std::string& from,
                                       const std::string& to) {
  switch (e.kind()) {
    case TermKind::App:
      return Term::app(rename_annotation_mentions(e.fn(), from, to),
                       rename_annotation_mentions(e.arg(), from, to));
    case TermKind::Anno:
      return Term::anno(rename_annotation_mentions(e.subject(), from, to),
                        rename_in_annotations(e.shared_annotations(), from, to));
    case TermKind::Lam:
      if (e.name() == from) return e;
      return Term::lam(e.name(), rename_annotation_mentions(e.body(), from, to));
    case TermKind::Fix:
      return Term::fix(e.name(), rename_annotation_mentions(e.body(), from, to));
    case TermKind::Let:
      return Term::let(e.name(), rename_annotation_mentions(e.rhs(), from, to),
                       rename_annotation_mentions(e.let_body(), from, to));
    case TermKind::SlackLet:
      return Term::slack_let(e.name(), rename_annotation_mentions(e.rhs(), from, to),
                             rename_annotation_mentions(e.let_body(), from, to));
    default:
      return e;
  }
}

// Replaces free occurrences of the variable (kind, name) in e by v.
// Binders that would capture a free variable of v are renamed.
inline Term substitute(const Term& v, TermKind kind, const std::string& name,
                       const Term& e, const std::set<FreeVar>& v_free,
                       const std::vector<std::string>& v_lin) {
  switch (e.kind()) {
    case TermKind::Var:
    case TermKind::FixVar:
    case TermKind::LinVar:
      return (e.kind() == kind && e.name() == name) ? v : e;
    case TermKind::Hole:
      return e;
    case TermKind::App:
      return Term::app(substitute(v, kind, name, e.fn(), v_free, v_lin),
                       substitute(v, kind, name, e.arg(), v_free, v_lin));
    case TermKind::Anno: {
      auto as = e.shared_annotations();
      return Term::anno(substitute(v, kind, name, e.subject(), v_free, v_lin), as);
    }
    case TermKind::Lam:
    case TermKind::Fix: {
      const TermKind binds = e.is(TermKind::Lam) ? TermKind::Var : TermKind::FixVar;
      const VarKind vk = e.is(TermKind::Lam) ? VarKind::Ordinary : VarKind::Fix;
      if (binds == kind && e.name() == name) return e;
      std::string binder = e.name();
      Term body = e.body();
      if (v_free.count(FreeVar{binder, vk})) {
        std::set<std::string> avoid = all_names(body);
        for (const auto& fv : v_free) avoid.insert(fv.name);
        avoid.insert(name);
        const std::string fresh = fresh_name(binder, avoid);
        body = substitute(binds == TermKind::Var ? Term::var(fresh) : Term::fix_var(fresh),
                          binds, binder, body, {}, {});
        if (binds == TermKind::Var) {
          // Contextual annotations mention the renamed binder by name.
          body = rename_annotation_mentions(body, binder, fresh);
        }
        binder = fresh;
      }
      Term nb = substitute(v, kind, name, body, v_free, v_lin);
      return e.is(TermKind::Lam) ? Term::lam(binder, nb) : Term::fix(binder, nb);
    }
    case TermKind::Let:
    case TermKind::SlackLet: {
      Term rhs = substitute(v, kind, name, e.rhs(), v_free, v_lin);
      if (kind == TermKind::LinVar && e.name() == name) {
        return e.is(TermKind::Let) ? Term::let(e.name(), rhs, e.let_body())
                                   : Term::slack_let(e.name(), rhs, e.let_body());
      }
      std::string binder = e.name();
      Term body = e.let_body();
      if (std::find(v_lin.begin(), v_lin.end(), binder) != v_lin.end()) {
        std::set<std::string> avoid = all_names(body);
        avoid.insert(v_lin.begin(), v_lin.end());
        avoid.insert(name);
        const std::string fresh = fresh_name(binder, avoid);
        body = substitute(Term::lin(fresh), TermKind::LinVar, binder, body, {}, {});
        binder = fresh;
      }
      Term nb = substitute(v, kind, name, body, v_free, v_lin);
      return e.is(TermKind::Let) ? Term::let(binder, rhs, nb)
                                 : Term::slack_let(binder, rhs, nb);
    }
  }
  return e;
}

}  // namespace detail

// [v/x]e, capture-avoiding. `x` is a Var, FixVar or LinVar term naming the
// variable to replace.
inline Term subst_value(const Term& v, const Term& x, const Term& e) {
  return detail::substitute(v, x.kind(), x.name(), e, free_vars(v), linear_occurrences(v));
}

// ---------------------------------------------------------------------------
// Classification

enum class Classification { PreValue, AntiValue };

// fix u => e is the only anti-value; everything else can become a value by
// naming its synthesizing parts.
inline Classification classify(const Term& e) {
  return e.is(TermKind::Fix) ? Classification::AntiValue : Classification::PreValue;
}

// Values for typing purposes: x, fn, x^, annotated values, and lets whose
// right-hand side and body are both values.
inline bool is_value(const Term& e) {
  switch (e.kind()) {
    case TermKind::Var:
    case TermKind::Lam:
    case TermKind::LinVar:
      return true;
    case TermKind::Anno:
      return is_value(e.subject());
    case TermKind::Let:
    case TermKind::SlackLet:
      return is_value(e.rhs()) && is_value(e.let_body());
    default:
      return false;
  }
}

// Values as the tridirectional system sees them. A linear variable under an
// annotation may name a term that was not a value, so (x^ : As) does not
// count; the let system tracks that through the binding instead.
inline bool is_tri_value(const Term& e) {
  switch (e.kind()) {
    case TermKind::Var:
    case TermKind::Lam:
    case TermKind::LinVar:
      return true;
    case TermKind::Anno:
      return !e.subject().is(TermKind::LinVar) && is_tri_value(e.subject());
    default:
      return is_value(e);
  }
}

// Forms whose typing rule synthesizes: x, u, x^, e1 e2, (e : As).
inline bool is_synth_form(const Term& e) {
  switch (e.kind()) {
    case TermKind::Var:
    case TermKind::FixVar:
    case TermKind::LinVar:
    case TermKind::App:
    case TermKind::Anno:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Contexts with a hole

struct Decomposition {
  Term context;  // contains exactly one Hole
  Term focus;
};

namespace detail {

inline std::optional<Term> plug_into(const Term& ctx, const Term& e) {
  switch (ctx.kind()) {
    case TermKind::Hole:
      return e;
    case TermKind::App:
      if (auto f = plug_into(ctx.fn(), e)) return Term::app(*f, ctx.arg());
      if (auto a = plug_into(ctx.arg(), e)) return Term::app(ctx.fn(), *a);
      return std::nullopt;
    case TermKind::Anno:
      if (auto s = plug_into(ctx.subject(), e)) {
        return Term::anno(*s, ctx.shared_annotations());
      }
      return std::nullopt;
    case TermKind::Lam:
      if (auto b = plug_into(ctx.body(), e)) return Term::lam(ctx.name(), *b);
      return std::nullopt;
    case TermKind::Fix:
      if (auto b = plug_into(ctx.body(), e)) return Term::fix(ctx.name(), *b);
      return std::nullopt;
    case TermKind::Let:
    case TermKind::SlackLet: {
      auto mk = [&](const Term& r, const Term& b) {
        return ctx.is(TermKind::Let) ? Term::let(ctx.name(), r, b)
                                     : Term::slack_let(ctx.name(), r, b);
      };
      if (auto r = plug_into(ctx.rhs(), e)) return mk(*r, ctx.let_body());
      if (auto b = plug_into(ctx.let_body(), e)) return mk(ctx.rhs(), *b);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace detail

// E[e]. A context without a hole is returned unchanged.
inline Term plug(const Term& ctx, const Term& e) {
  return detail::plug_into(ctx, e).value_or(ctx);
}

namespace detail {

template <class Descend>
void decompose_into(const Term& e, std::vector<Decomposition>& out, Descend&& may_pass) {
  out.push_back({Term::hole(), e});
  auto inner = [&](const Term& sub, auto&& rebuild) {
    std::vector<Decomposition> sub_out;
    decompose_into(sub, sub_out, may_pass);
    for (auto& d : sub_out) out.push_back({rebuild(d.context), d.focus});
  };
  switch (e.kind()) {
    case TermKind::App:
      inner(e.fn(), [&](const Term& c) { return Term::app(c, e.arg()); });
      if (may_pass(e.fn())) {
        inner(e.arg(), [&](const Term& c) { return Term::app(e.fn(), c); });
      }
      break;
    case TermKind::Anno:
      inner(e.subject(),
            [&](const Term& c) { return Term::anno(c, e.shared_annotations()); });
      break;
    case TermKind::Let:
    case TermKind::SlackLet: {
      const bool slack = e.is(TermKind::SlackLet);
      auto mk = [&](const Term& r, const Term& b) {
        return slack ? Term::slack_let(e.name(), r, b) : Term::let(e.name(), r, b);
      };
      inner(e.rhs(), [&](const Term& c) { return mk(c, e.let_body()); });
      // The body of a slack let is reachable only past a value right-hand side.
      if (slack ? is_value(e.rhs()) : may_pass(e.rhs())) {
        inner(e.let_body(), [&](const Term& c) { return mk(e.rhs(), c); });
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace detail

// All decompositions e = E[e'] with E ::= [] | E e | v E | (E : As) and the
// let forms, outermost first, function before argument. v E uses the
// tridirectional notion of value.
inline std::vector<Decomposition> decompose_eval(const Term& e) {
  std::vector<Decomposition> out;
  detail::decompose_into(e, out, [](const Term& t) { return is_tri_value(t); });
  return out;
}

// All decompositions e = Q[e'] for elongated evaluation contexts, which may
// pass over any pre-value but never over an anti-value.
inline std::vector<Decomposition> elongated_decompose(const Term& e) {
  std::vector<Decomposition> out;
  detail::decompose_into(
      e, out, [](const Term& t) { return classify(t) == Classification::PreValue; });
  return out;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace detail {

struct AlphaEnv {
  std::vector<std::pair<std::string, std::string>> ord, fix, lin;

  static bool same(const std::vector<std::pair<std::string, std::string>>& env,
                   const std::string& a, const std::string& b) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      const bool ha = it->first == a, hb = it->second == b;
      if (ha || hb) return ha && hb;
    }
    return a == b;
  }
};

inline bool annotations_alpha_eq(const Annotations& a, const Annotations& b,
                                 const AlphaEnv& env) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].type != b[i].type) return false;
    const auto& ca = a[i].context.entries();
    const auto& cb = b[i].context.entries();
    if (ca.size() != cb.size()) return false;
    for (std::size_t j = 0; j < ca.size(); ++j) {
      if (ca[j].type != cb[j].type || ca[j].kind != cb[j].kind) return false;
      if (!AlphaEnv::same(env.ord, ca[j].name, cb[j].name)) return false;
    }
  }
  return true;
}

inline bool alpha_eq_in(const Term& a, const Term& b, AlphaEnv& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var:
      return AlphaEnv::same(env.ord, a.name(), b.name());
    case TermKind::FixVar:
      return AlphaEnv::same(env.fix, a.name(), b.name());
    case TermKind::LinVar:
      return AlphaEnv::same(env.lin, a.name(), b.name());
    case TermKind::Hole:
      return true;
    case TermKind::App:
      return alpha_eq_in(a.fn(), b.fn(), env) && alpha_eq_in(a.arg(), b.arg(), env);
    case TermKind::Anno:
      return annotations_alpha_eq(a.annotations(), b.annotations(), env) &&
             alpha_eq_in(a.subject(), b.subject(), env);
    case TermKind::Lam:
    case TermKind::Fix: {
      auto& scope = a.is(TermKind::Lam) ? env.ord : env.fix;
      scope.emplace_back(a.name(), b.name());
      const bool r = alpha_eq_in(a.body(), b.body(), env);
      scope.pop_back();
      return r;
    }
    case TermKind::Let:
    case TermKind::SlackLet: {
      if (!alpha_eq_in(a.rhs(), b.rhs(), env)) return false;
      env.lin.emplace_back(a.name(), b.name());
      const bool r = alpha_eq_in(a.let_body(), b.let_body(), env);
      env.lin.pop_back();
      return r;
    }
  }
  return false;
}

}  // namespace detail

// Equality up to consistent renaming of bound ordinary, fix and linear
// variables.
inline bool alpha_eq(const Term& a, const Term& b) {
  detail::AlphaEnv env;
  return detail::alpha_eq_in(a, b, env);
}

}  // namespace tridir
