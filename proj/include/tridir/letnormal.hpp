#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tridir/syntax.hpp"

namespace tridir {

// One entry of a binding sequence: x^ = e, or x^ =! (v : As) for a slack
// binding.
struct LetBinding {
  std::string name;
  Term rhs;
  bool slack = false;

  friend bool operator==(const LetBinding& a, const LetBinding& b) {
    return a.name == b.name && a.slack == b.slack && a.rhs == b.rhs;
  }
};

using BindingSeq = std::vector<LetBinding>;

struct Translation {
  BindingSeq bindings;
  Term body;
};

// L in e: right-nests the bindings around the body.
inline Term embed(const BindingSeq& l, const Term& body) {
  Term out = body;
  for (auto it = l.rbegin(); it != l.rend(); ++it) {
    out = it->slack ? Term::slack_let(it->name, it->rhs, out)
                    : Term::let(it->name, it->rhs, out);
  }
  return out;
}

inline Term embed(const Translation& t) { return embed(t.bindings, t.body); }

namespace detail {

class Translator {
 public:
  explicit Translator(const Term& e) {
    for (const auto& x : linear_occurrences(e)) taken_.insert(x);
  }

  Translation run(const Term& e) {
    switch (e.kind()) {
      case TermKind::Var:
      case TermKind::FixVar: {
        const std::string x = fresh();
        return {{{x, e, false}}, Term::lin(x)};
      }
      case TermKind::LinVar:
        return {{}, e};
      case TermKind::Lam:
      case TermKind::Fix: {
        Translation inner = run(e.body());
        Term body = embed(inner.bindings, inner.body);
        return {{}, e.is(TermKind::Lam) ? Term::lam(e.name(), body) : Term::fix(e.name(), body)};
      }
      case TermKind::App: {
        Translation t1 = run(e.fn());
        Translation t2 = run(e.arg());
        BindingSeq l = std::move(t1.bindings);
        Term rhs = Term::hole();
        if (classify(e.fn()) == Classification::AntiValue) {
          rhs = Term::app(t1.body, embed(t2.bindings, t2.body));
        } else {
          l.insert(l.end(), t2.bindings.begin(), t2.bindings.end());
          rhs = Term::app(t1.body, t2.body);
        }
        const std::string x = fresh();
        l.push_back({x, rhs, false});
        return {std::move(l), Term::lin(x)};
      }
      case TermKind::Anno: {
        Translation t = run(e.subject());
        const bool slack = is_value(e.subject());
        const std::string x = fresh();
        t.bindings.push_back({x, Term::anno(t.body, e.shared_annotations()), slack});
        return {std::move(t.bindings), Term::lin(x)};
      }
      default:
        throw std::invalid_argument("translate: not a source term: " + to_string(e));
    }
  }

 private:
  std::string fresh() {
    for (;;) {
      std::string x = "x" + std::to_string(next_++);
      if (taken_.insert(x).second) return x;
    }
  }

  std::set<std::string> taken_;
  int next_ = 0;
};

}  // namespace detail

// e ↪ L + e'. Fresh linear variables are x0, x1, ... in the order their
// bindings are completed, left to right.
inline Translation translate(const Term& e) {
  detail::Translator t(e);
  return t.run(e);
}

// The term L in e' for e ↪ L + e'.
inline Term let_normal_form(const Term& e) {
  Translation t = translate(e);
  return embed(t.bindings, t.body);
}

// Splits a let chain into its maximal binding sequence and body.
inline Translation split_bindings(const Term& e) {
  Translation out{{}, e};
  while (is_let_form(out.body)) {
    out.bindings.push_back({out.body.name(), out.body.rhs(), out.body.is(TermKind::SlackLet)});
    out.body = out.body.let_body();
  }
  return out;
}

class UnboundLinear : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Term unwind_in(const Term& e, std::vector<std::string>& scope) {
  switch (e.kind()) {
    case TermKind::LinVar:
      if (std::find(scope.begin(), scope.end(), e.name()) == scope.end()) {
        throw UnboundLinear("unbound linear variable " + e.name() + "^");
      }
      return e;
    case TermKind::Var:
    case TermKind::FixVar:
    case TermKind::Hole:
      return e;
    case TermKind::Lam:
      return Term::lam(e.name(), unwind_in(e.body(), scope));
    case TermKind::Fix:
      return Term::fix(e.name(), unwind_in(e.body(), scope));
    case TermKind::App:
      return Term::app(unwind_in(e.fn(), scope), unwind_in(e.arg(), scope));
    case TermKind::Anno:
      return Term::anno(unwind_in(e.subject(), scope), e.shared_annotations());
    case TermKind::Let:
    case TermKind::SlackLet: {
      Term rhs = unwind_in(e.rhs(), scope);
      scope.push_back(e.name());
      Term body = unwind_in(e.let_body(), scope);
      scope.pop_back();
      return subst_value(rhs, Term::lin(e.name()), body);
    }
  }
  return e;
}

}  // namespace detail

// Reverse translation: substitutes every binding's right-hand side for its
// variable. Throws UnboundLinear if a linear variable has no binding.
inline Term unwind(const Term& e) {
  std::vector<std::string> scope;
  return detail::unwind_in(e, scope);
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace detail {

inline bool wf_in(const Term& e, std::set<std::string>& binders) {
  switch (e.kind()) {
    case TermKind::Lam:
    case TermKind::Fix:
      return wf_in(e.body(), binders);
    case TermKind::App:
      return wf_in(e.fn(), binders) && wf_in(e.arg(), binders);
    case TermKind::Anno:
      return wf_in(e.subject(), binders);
    case TermKind::Let:
    case TermKind::SlackLet: {
      const std::string& x = e.name();
      if (!binders.insert(x).second) return false;
      if (e.is(TermKind::SlackLet) &&
          !(e.rhs().is(TermKind::Anno) && is_value(e.rhs().subject()))) {
        return false;
      }
      const auto occ = linear_occurrences(e.let_body());
      if (std::count(occ.begin(), occ.end(), x) != 1) return false;
      bool positioned = false;
      for (const auto& d : elongated_decompose(e.let_body())) {
        if (d.focus.is(TermKind::LinVar) && d.focus.name() == x) {
          positioned = true;
          break;
        }
      }
      if (!positioned) return false;
      return wf_in(e.rhs(), binders) && wf_in(e.let_body(), binders);
    }
    case TermKind::Hole:
      return false;
    default:
      return true;
  }
}

}  // namespace detail

// Every let body has its variable in elongated evaluation position and uses
// it exactly once, binders are distinct, and slack right-hand sides are
// annotated values.
inline bool wf_letnormal(const Term& e) {
  std::set<std::string> binders;
  return detail::wf_in(e, binders);
}

// ---------------------------------------------------------------------------
// Measure

struct Measure {
  std::size_t unbound_synth = 0;
  std::size_t brittle = 0;
  std::size_t prickly = 0;
  std::size_t transposed = 0;

  auto tie() const { return std::tie(unbound_synth, brittle, prickly, transposed); }
  friend bool operator==(const Measure& a, const Measure& b) { return a.tie() == b.tie(); }
  friend bool operator!=(const Measure& a, const Measure& b) { return !(a == b); }
  friend bool operator<(const Measure& a, const Measure& b) { return a.tie() < b.tie(); }
  bool is_zero() const { return *this == Measure{}; }
};

inline std::string to_string(const Measure& m) {
  return std::to_string(m.unbound_synth) + " " + std::to_string(m.brittle) + " " +
         std::to_string(m.prickly) + " " + std::to_string(m.transposed);
}

namespace detail {

class Measurer {
 public:
  Measure run(const Term& e) {
    count(e, /*let_bound=*/false, /*at_root=*/true);
    walk(e, nullptr);
    for (const auto& chain : chains_) {
      for (std::size_t i = 0; i < chain.size(); ++i) {
        auto ii = intervals_.find(chain[i]);
        if (ii == intervals_.end()) continue;
        for (std::size_t j = i + 1; j < chain.size(); ++j) {
          auto jj = intervals_.find(chain[j]);
          if (jj == intervals_.end()) continue;
          if (ii->second.first > jj->second.second) ++m_.transposed;
        }
      }
    }
    m_.brittle = brittle_.size();
    return m_;
  }

 private:
  struct Env {
    std::string name;
    Term rhs;
    const void* id;
    bool value;
    std::shared_ptr<const Env> prev;
  };
  using EnvPtr = std::shared_ptr<const Env>;

  static const Env* find(const EnvPtr& env, const std::string& x) {
    for (const Env* p = env.get(); p != nullptr; p = p->prev.get()) {
      if (p->name == x) return p;
    }
    return nullptr;
  }

  // Valueness of e once its linear variables are unwound.
  static bool unwound_value(const Term& e, const EnvPtr& env) {
    switch (e.kind()) {
      case TermKind::Var:
      case TermKind::Lam:
        return true;
      case TermKind::LinVar: {
        const Env* b = find(env, e.name());
        return b == nullptr || b->value;
      }
      case TermKind::Anno:
        return unwound_value(e.subject(), env);
      case TermKind::Let:
      case TermKind::SlackLet: {
        const bool rv = unwound_value(e.rhs(), env);
        auto inner = std::make_shared<const Env>(
            Env{e.name(), e.rhs(), e.identity(), rv, env});
        return rv && unwound_value(e.let_body(), inner);
      }
      default:
        return false;
    }
  }

  // unbound⇑, prickly and chain collection.
  void count(const Term& e, bool let_bound, bool at_root) {
    switch (e.kind()) {
      case TermKind::Var:
      case TermKind::FixVar:
        if (!let_bound) ++m_.unbound_synth;
        return;
      case TermKind::LinVar:
      case TermKind::Hole:
        return;
      case TermKind::Lam:
      case TermKind::Fix:
        count(e.body(), false, true);
        return;
      case TermKind::App:
        if (!let_bound) ++m_.unbound_synth;
        count(e.fn(), false, false);
        count(e.arg(), false, classify(e.fn()) == Classification::AntiValue);
        return;
      case TermKind::Anno:
        if (!let_bound) ++m_.unbound_synth;
        count(e.subject(), false, false);
        return;
      case TermKind::Let:
      case TermKind::SlackLet: {
        std::vector<const void*> chain;
        Term cur = e;
        while (is_let_form(cur)) {
          chain.push_back(cur.identity());
          if (!at_root) ++m_.prickly;
          count(cur.rhs(), true, false);
          cur = cur.let_body();
        }
        chains_.push_back(std::move(chain));
        count(cur, false, false);
        return;
      }
    }
  }

  // Walks the unwound term in preorder, recording for each let the interval
  // of positions its right-hand side occupies, and counting brittle lets.
  void walk(const Term& e, const EnvPtr& env) {
    switch (e.kind()) {
      case TermKind::LinVar: {
        const Env* b = find(env, e.name());
        if (b == nullptr) {
          ++pos_;
          return;
        }
        const std::size_t start = pos_;
        walk(b->rhs, b->prev);
        intervals_.emplace(b->id, std::make_pair(start, pos_ == start ? start : pos_ - 1));
        return;
      }
      case TermKind::Let:
      case TermKind::SlackLet: {
        const bool rv = unwound_value(e.rhs(), env);
        if (e.is(TermKind::Let) && e.rhs().is(TermKind::Anno) &&
            unwound_value(e.rhs().subject(), env)) {
          brittle_.insert(e.identity());
        }
        // The right-hand side is walked where the variable occurs; walk it
        // here too if the variable never occurs, so nested lets are seen.
        if (!occurs_linear(e.let_body(), e.name())) scan_unused(e.rhs(), env);
        auto inner = std::make_shared<const Env>(
            Env{e.name(), e.rhs(), e.identity(), rv, env});
        walk(e.let_body(), inner);
        return;
      }
      case TermKind::Lam:
      case TermKind::Fix:
        ++pos_;
        walk(e.body(), env);
        return;
      case TermKind::App:
        ++pos_;
        walk(e.fn(), env);
        walk(e.arg(), env);
        return;
      case TermKind::Anno:
        ++pos_;
        walk(e.subject(), env);
        return;
      default:
        ++pos_;
        return;
    }
  }

  void scan_unused(const Term& e, const EnvPtr& env) {
    const std::size_t saved = pos_;
    walk(e, env);
    pos_ = saved;
  }

  Measure m_;
  std::size_t pos_ = 0;
  std::vector<std::vector<const void*>> chains_;
  std::set<const void*> brittle_;
  std::unordered_map<const void*, std::pair<std::size_t, std::size_t>> intervals_;
};

}  // namespace detail

// μ(e) = ⟨unbound⇑, brittle, prickly, transposed⟩. All zero exactly on
// canonical translations.
inline Measure measure(const Term& e) {
  detail::Measurer m;
  return m.run(e);
}

}  // namespace tridir
