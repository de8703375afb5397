#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tridir/derivation.hpp"
#include "tridir/subtyping.hpp"
#include "tridir/syntax.hpp"

namespace tridir {

// (Γ0 ⊢ A) applies under Γ when every assumption x:B of Γ0 is supported by
// some x:B' in Γ with B' ≤ B.
inline bool ctx_anno_satisfied(const TypingContext& gamma0, const TypingContext& gamma,
                               Subtyper& sub) {
  for (const auto& b : gamma0.entries()) {
    const Binding* have = gamma.lookup(b.name);
    if (have == nullptr || !sub(have->type, b.type)) return false;
  }
  return true;
}

inline bool ctx_anno_satisfied(const TypingContext& gamma0, const TypingContext& gamma) {
  Subtyper sub;
  return ctx_anno_satisfied(gamma0, gamma, sub);
}

namespace detail {

struct FuelOut {};

// Entries of Δ owned by e: the linear variables occurring in e, closed under
// occurrence in the right-hand sides of owned slack entries.
inline std::vector<std::string> owned_names(const LinearContext& delta, const Term& e) {
  std::vector<std::string> out;
  std::vector<Term> todo{e};
  while (!todo.empty()) {
    Term t = todo.back();
    todo.pop_back();
    for (const auto& x : linear_occurrences(t)) {
      if (std::find(out.begin(), out.end(), x) != out.end()) continue;
      out.push_back(x);
      const LinearEntry* en = delta.lookup(x);
      if (en != nullptr && en->is_slack()) todo.push_back(*en->slack);
    }
  }
  return out;
}

struct MemoKey {
  TypingContext gamma;
  std::string text;

  friend bool operator==(const MemoKey& a, const MemoKey& b) {
    return a.text == b.text && a.gamma == b.gamma;
  }
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const noexcept {
    return hash_combine(k.gamma.hash(), std::hash<std::string>{}(k.text));
  }
};

// Key text for pieces that do not depend on Δ: subterms without free linear
// variables, annotation lists and types. Entries hold their source alive, so
// the identity keys are never reused.
class TextCache {
 public:
  const std::string* closed(const Term& e) const {
    auto it = closed_.find(e.identity());
    return it == closed_.end() ? nullptr : &it->second.second;
  }
  void remember(const Term& e, std::string text) {
    closed_.emplace(e.identity(), std::make_pair(e, std::move(text)));
  }
  const std::string& annotations(const Term& anno) {
    const auto& as = anno.shared_annotations();
    auto it = annos_.find(as.get());
    if (it != annos_.end()) return it->second.second;
    std::string out;
    for (const auto& a : *as) {
      out += to_string(a.context);
      out += "|-";
      out += type(a.type);
      out += ',';
    }
    return annos_.emplace(as.get(), std::make_pair(as, std::move(out))).first->second.second;
  }
  const std::string& type(const Type& t) {
    auto it = types_.find(t);
    if (it != types_.end()) return it->second;
    return types_.emplace(t, to_string(t)).first->second;
  }

 private:
  std::unordered_map<const void*, std::pair<Term, std::string>> closed_;
  std::unordered_map<const void*, std::pair<std::shared_ptr<const Annotations>, std::string>>
      annos_;
  std::unordered_map<Type, std::string> types_;
};

// Serializes (Δ, e) with Δ's variables renamed by order of first occurrence,
// so judgments that differ only in the choice of linear names share a key.
class KeyWriter {
 public:
  KeyWriter(const LinearContext& delta, TextCache& cache) : delta_(delta), cache_(cache) {}

  std::string write(const Term& e) {
    std::string out;
    term(out, e);
    std::string ctx;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const LinearEntry& en = *order_[i];
      ctx += '%';
      ctx += std::to_string(i);
      if (en.is_slack()) {
        ctx += '!';
        ctx += slack_text_[i];
      } else {
        ctx += ':';
        ctx += cache_.type(*en.type);
      }
      ctx += ';';
    }
    for (const auto& en : delta_.entries()) {
      if (index_.count(en.name) == 0) ctx += "?" + en.name + ";";
    }
    return ctx + "|" + out;
  }

 private:
  static constexpr std::size_t kFree = 0;  // a reference to Δ

  // Appends the text of e and returns the outermost binder e refers to:
  // kFree for a Δ variable, 1 + the let depth for let-bound ones, and
  // SIZE_MAX when e has no linear variables at all.
  std::size_t term(std::string& out, const Term& e) {
    if (const std::string* t = cache_.closed(e)) {
      out += *t;
      return SIZE_MAX;
    }
    const std::size_t start = out.size();
    const std::size_t depth = bound_.size();
    std::size_t reach = SIZE_MAX;
    switch (e.kind()) {
      case TermKind::Var:
        out += 'v';
        out += e.name();
        out += ' ';
        break;
      case TermKind::FixVar:
        out += 'u';
        out += e.name();
        out += ' ';
        break;
      case TermKind::LinVar: {
        auto it = std::find(bound_.rbegin(), bound_.rend(), e.name());
        if (it != bound_.rend()) {
          out += 'b';
          out += e.name();
          reach = static_cast<std::size_t>(bound_.rend() - it);
        } else {
          out += '%';
          out += std::to_string(visit(e.name()));
          reach = kFree;
        }
        out += ' ';
        break;
      }
      case TermKind::Hole:
        out += "[] ";
        reach = kFree;
        break;
      case TermKind::Lam:
      case TermKind::Fix:
        out += e.is(TermKind::Lam) ? "(L" : "(F";
        out += e.name();
        out += ' ';
        reach = term(out, e.body());
        out += ')';
        break;
      case TermKind::App:
        out += "(@";
        reach = std::min(term(out, e.fn()), term(out, e.arg()));
        out += ')';
        break;
      case TermKind::Anno:
        out += "(:";
        reach = term(out, e.subject());
        out += cache_.annotations(e);
        out += ')';
        break;
      case TermKind::Let:
      case TermKind::SlackLet:
        out += e.is(TermKind::Let) ? "(=" : "(!";
        out += e.name();
        out += ' ';
        reach = term(out, e.rhs());
        bound_.push_back(e.name());
        reach = std::min(reach, term(out, e.let_body()));
        bound_.pop_back();
        out += ')';
        break;
    }
    if (reach != kFree && (reach == SIZE_MAX || reach > depth)) {
      cache_.remember(e, out.substr(start));
      return SIZE_MAX;
    }
    return reach;
  }

  std::size_t visit(const std::string& x) {
    auto it = index_.find(x);
    if (it != index_.end()) return it->second;
    const LinearEntry* en = delta_.lookup(x);
    const std::size_t i = order_.size();
    index_.emplace(x, i);
    if (en == nullptr) {
      // Not declared: keep the raw name so distinct judgments stay distinct.
      static const LinearEntry missing{};
      order_.push_back(&missing);
      slack_text_.push_back("");
      return i;
    }
    order_.push_back(en);
    slack_text_.push_back("");
    if (en->is_slack()) {
      std::string s;
      auto saved = std::move(bound_);
      bound_.clear();
      term(s, *en->slack);
      bound_ = std::move(saved);
      slack_text_[i] = std::move(s);
    }
    return i;
  }

  const LinearContext& delta_;
  TextCache& cache_;
  std::map<std::string, std::size_t> index_;
  std::vector<const LinearEntry*> order_;
  std::vector<std::string> slack_text_;
  std::vector<std::string> bound_;
};

struct Premise {
  Direction direction;
  TypingContext gamma;
  LinearContext delta;
  Term subject;
  Type type;  // goal for Check; the synthesized type for Synth
};

struct Alternative {
  Rule rule;
  std::vector<Premise> premises;
  std::optional<std::pair<Type, Type>> subtyping;
};

// Backtracking proof search shared by both systems. Judgments are decided
// with memoization; derivations are rebuilt afterwards by replaying the
// alternatives in the same order and taking the first that succeeds.
class Engine {
 public:
  explicit Engine(SearchOptions opts) : opts_(opts), budget_(opts.fuel) {}

  const SearchOptions& options() const { return opts_; }
  Subtyper& subtyper() { return sub_; }

  void set_budget(std::uint64_t fuel) {
    budget_ = fuel;
    spent_ = 0;
  }
  std::uint64_t spent() const { return spent_; }

  bool decide_check(const TypingContext& g, const LinearContext& d, const Term& e,
                    const Type& c) {
    MemoKey key{g, KeyWriter(d, text_).write(e) + "<=" + text_.type(c)};
    auto it = check_memo_.find(key);
    if (it != check_memo_.end()) return it->second;
    spend();
    const bool r =
        check_alternatives(g, d, e, c, [&](const Alternative& a) { return holds(a); });
    check_memo_.emplace(std::move(key), r);
    return r;
  }

  // Every type e synthesizes, closed under ∧-projection, principal first.
  const std::vector<Type>& synth_set(const TypingContext& g, const LinearContext& d,
                                     const Term& e) {
    MemoKey key{g, KeyWriter(d, text_).write(e)};
    auto it = synth_memo_.find(key);
    if (it != synth_memo_.end()) return it->second;
    spend();
    std::vector<Type> out;
    synth_roots(g, d, e, [&](Rule, const Type& t, const std::vector<Premise>&) {
      for (const auto& p : projections(t)) {
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
      }
      return false;
    });
    return synth_memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  bool synthesizes(const TypingContext& g, const LinearContext& d, const Term& e,
                   const Type& a) {
    const auto& s = synth_set(g, d, e);
    return std::find(s.begin(), s.end(), a) != s.end();
  }

  Derivation derive_check(const TypingContext& g, const LinearContext& d, const Term& e,
                          const Type& c) {
    std::optional<Derivation> out;
    check_alternatives(g, d, e, c, [&](const Alternative& a) {
      if (!holds(a)) return false;
      out = build(Judgment{g, d, e, Direction::Check, c}, a);
      return true;
    });
    if (!out) throw std::logic_error("derive_check on an underivable judgment");
    return std::move(*out);
  }

  Derivation derive_synth(const TypingContext& g, const LinearContext& d, const Term& e,
                          const Type& a) {
    std::optional<Derivation> out;
    synth_roots(g, d, e, [&](Rule rule, const Type& t, const std::vector<Premise>& ps) {
      std::vector<bool> path;
      if (!projection_path(t, a, path)) return false;
      // Each step of the path is one ∧ elimination.
      Alternative alt{rule, ps, std::nullopt};
      Derivation cur = build(Judgment{g, d, e, Direction::Synth, t}, alt);
      Type here = t;
      for (bool right : path) {
        here = right ? here.right() : here.left();
        Derivation next{right ? Rule::AndE2 : Rule::AndE1,
                        Judgment{g, d, e, Direction::Synth, here}, {}, std::nullopt};
        next.children.push_back(std::move(cur));
        cur = std::move(next);
      }
      out = std::move(cur);
      return true;
    });
    if (!out) throw std::logic_error("derive_synth on an underivable judgment");
    return std::move(*out);
  }

 private:
  void spend() {
    if (spent_ >= budget_) throw FuelOut{};
    ++spent_;
  }

  bool holds(const Alternative& a) {
    for (const auto& p : a.premises) {
      const bool ok = p.direction == Direction::Check
                          ? decide_check(p.gamma, p.delta, p.subject, p.type)
                          : synthesizes(p.gamma, p.delta, p.subject, p.type);
      if (!ok) return false;
    }
    if (a.subtyping && !sub_(a.subtyping->first, a.subtyping->second)) return false;
    return true;
  }

  Derivation build(Judgment j, const Alternative& a) {
    Derivation out{a.rule, std::move(j), {}, std::nullopt};
    for (const auto& p : a.premises) {
      out.children.push_back(p.direction == Direction::Check
                                 ? derive_check(p.gamma, p.delta, p.subject, p.type)
                                 : derive_synth(p.gamma, p.delta, p.subject, p.type));
    }
    if (a.subtyping) out.subtyping = sub_.derive(a.subtyping->first, a.subtyping->second);
    return out;
  }

  bool heuristic() const { return opts_.strategy == Strategy::Heuristic; }
  bool let_normal() const { return opts_.system == System::LetNormal; }

  static Premise check_p(const TypingContext& g, const LinearContext& d, const Term& e,
                         const Type& c) {
    return Premise{Direction::Check, g, d, e, c};
  }
  static Premise synth_p(const TypingContext& g, const LinearContext& d, const Term& e,
                         const Type& a) {
    return Premise{Direction::Synth, g, d, e, a};
  }

  // Calls yield(rule, type, premises) for each way e synthesizes a type
  // without a trailing ∧ elimination. Stops when yield returns true.
  template <class Yield>
  bool synth_roots(const TypingContext& g, const LinearContext& d, const Term& e,
                   Yield&& yield) {
    switch (e.kind()) {
      case TermKind::Var:
      case TermKind::FixVar: {
        const VarKind want = e.is(TermKind::Var) ? VarKind::Ordinary : VarKind::Fix;
        const Binding* b = g.lookup(e.name());
        if (!d.empty() || b == nullptr || b->kind != want) return false;
        return yield(e.is(TermKind::Var) ? Rule::Var : Rule::FixVar, b->type,
                     std::vector<Premise>{});
      }
      case TermKind::LinVar: {
        if (d.size() != 1) return false;
        const LinearEntry& en = d.entries().front();
        if (en.name != e.name() || en.is_slack()) return false;
        return yield(Rule::LinVar, *en.type, std::vector<Premise>{});
      }
      case TermKind::App: {
        auto [d1, d2] = d.split(owned_names(d, e.fn()));
        const std::vector<Type> fns = synth_set(g, d1, e.fn());
        for (const auto& f : fns) {
          if (!f.is(TypeKind::Arrow)) continue;
          if (!decide_check(g, d2, e.arg(), f.left())) continue;
          std::vector<Premise> ps{synth_p(g, d1, e.fn(), f), check_p(g, d2, e.arg(), f.left())};
          if (yield(Rule::ArrE, f.right(), ps)) return true;
        }
        return false;
      }
      case TermKind::Anno: {
        for (const auto& an : e.annotations()) {
          if (!ctx_anno_satisfied(an.context, g, sub_)) continue;
          if (!decide_check(g, d, e.subject(), an.type)) continue;
          std::vector<Premise> ps{check_p(g, d, e.subject(), an.type)};
          if (yield(Rule::CtxAnno, an.type, ps)) return true;
        }
        return false;
      }
      default:
        return false;
    }
  }

  static LinearContext retyped(const LinearContext& d, const std::string& x, const Type& t) {
    return d.replaced(LinearEntry::linear(x, t));
  }

  std::string fresh_linear(const LinearContext& d, const Term& e) const {
    const auto occ = detail::all_names(e);
    for (int k = 0;; ++k) {
      std::string n = "n" + std::to_string(k);
      if (d.lookup(n) == nullptr && occ.count(n) == 0) return n;
    }
  }

  // Types worth naming a synthesizing subterm with, under the heuristic.
  std::vector<Type> naming_types(const Term& f, const std::vector<Type>& all) const {
    if (!heuristic() || all.empty()) return all;
    switch (f.kind()) {
      case TermKind::Var:
        if (!has_left_structure(all.front())) return {};
        return {all.front()};
      case TermKind::FixVar:
        return {all.front()};
      case TermKind::Anno:
        if (is_tri_value(f)) {
          std::vector<Type> out;
          for (const auto& t : all) {
            if (has_left_structure(t)) out.push_back(t);
          }
          return out;
        }
        return all;
      default:
        return all;
    }
  }

  // A slack variable is due when it occurs in the part of the subject that
  // is typed before any nested let body.
  static bool due(const Term& e, const std::string& x) {
    if (is_let_form(e)) return occurs_linear(e.rhs(), x);
    return occurs_linear(e, x);
  }

  template <class Yield>
  bool check_alternatives(const TypingContext& g, const LinearContext& d, const Term& e,
                          const Type& c, Yield&& yield) {
    const bool heur = heuristic();

    // ⊥L succeeds outright.
    for (const auto& en : d.entries()) {
      if (!en.is_slack() && en.type->is(TypeKind::Bot)) {
        if (yield(Alternative{Rule::BotL, {}, std::nullopt})) return true;
        break;
      }
    }

    // ∨L
    for (const auto& en : d.entries()) {
      if (en.is_slack() || !en.type->is(TypeKind::Union)) continue;
      Alternative a{Rule::OrL,
                    {check_p(g, retyped(d, en.name, en.type->left()), e, c),
                     check_p(g, retyped(d, en.name, en.type->right()), e, c)},
                    std::nullopt};
      if (heur) return yield(a);
      if (yield(a)) return true;
    }

    if (e.is(TermKind::SlackLet) && let_normal()) {
      Alternative a{Rule::SlackLet,
                    {check_p(g, d.with(LinearEntry::slack_entry(e.name(), e.rhs())),
                             e.let_body(), c)},
                    std::nullopt};
      if (heur) return yield(a);
      if (yield(a)) return true;
    }

    switch (e.kind()) {
      case TermKind::Lam:
        if (c.is(TypeKind::Arrow) && d.empty()) {
          auto g2 = g.extended(Binding{e.name(), VarKind::Ordinary, c.left()});
          if (yield(Alternative{Rule::ArrI, {check_p(g2, d, e.body(), c.right())},
                                std::nullopt})) {
            return true;
          }
        }
        break;
      case TermKind::Fix:
        if (d.empty()) {
          auto g2 = g.extended(Binding{e.name(), VarKind::Fix, c});
          if (yield(Alternative{Rule::Fix, {check_p(g2, d, e.body(), c)}, std::nullopt})) {
            return true;
          }
        }
        break;
      case TermKind::Let:
        if (let_normal()) {
          auto [d1, d2] = d.split(owned_names(d, e.rhs()));
          std::vector<Type> types = synth_set(g, d1, e.rhs());
          if (opts_.force_let_projection && types.size() > 1) types.erase(types.begin());
          if (heur && !types.empty() && !opts_.force_let_projection &&
              (e.rhs().is(TermKind::Var) || e.rhs().is(TermKind::FixVar) ||
               e.rhs().is(TermKind::LinVar))) {
            types.resize(1);
          }
          for (const auto& t : types) {
            Alternative a{Rule::Let,
                          {synth_p(g, d1, e.rhs(), t),
                           check_p(g, d2.with(LinearEntry::linear(e.name(), t)),
                                   e.let_body(), c)},
                          std::nullopt};
            if (yield(a)) return true;
          }
        }
        break;
      default:
        break;
    }

    // sub: one witness suffices, since every synthesized type is derivable.
    if (is_synth_form(e)) {
      for (const auto& t : synth_set(g, d, e)) {
        if (!sub_(t, c)) continue;
        if (yield(Alternative{Rule::Sub, {synth_p(g, d, e, t)}, std::make_pair(t, c)})) {
          return true;
        }
        break;
      }
    }

    if (c.is(TypeKind::Intersect) && (let_normal() ? is_value(e) : is_tri_value(e))) {
      if (yield(Alternative{Rule::AndI,
                            {check_p(g, d, e, c.left()), check_p(g, d, e, c.right())},
                            std::nullopt})) {
        return true;
      }
    }

    if (c.is(TypeKind::Union)) {
      if (yield(Alternative{Rule::OrI1, {check_p(g, d, e, c.left())}, std::nullopt})) {
        return true;
      }
      if (yield(Alternative{Rule::OrI2, {check_p(g, d, e, c.right())}, std::nullopt})) {
        return true;
      }
    }

    // ∧L: under the heuristic only to expose a nested ∨ or ⊥.
    for (const auto& en : d.entries()) {
      if (en.is_slack() || !en.type->is(TypeKind::Intersect)) continue;
      if (heur && !has_left_structure(*en.type)) continue;
      if (yield(Alternative{Rule::AndL1, {check_p(g, retyped(d, en.name, en.type->left()), e, c)},
                            std::nullopt})) {
        return true;
      }
      if (yield(Alternative{Rule::AndL2,
                            {check_p(g, retyped(d, en.name, en.type->right()), e, c)},
                            std::nullopt})) {
        return true;
      }
    }

    if (!let_normal()) {
      for (const auto& dec : decompose_eval(e)) {
        const Term& f = dec.focus;
        if (!is_synth_form(f) || f.is(TermKind::LinVar)) continue;
        auto [d1, d2] = d.split(owned_names(d, f));
        const std::vector<Type> types = naming_types(f, synth_set(g, d1, f));
        if (types.empty()) continue;
        const std::string x = fresh_linear(d, e);
        const Term named = plug(dec.context, Term::lin(x));
        for (const auto& t : types) {
          Alternative a{Rule::DirectL,
                        {synth_p(g, d1, f, t),
                         check_p(g, d2.with(LinearEntry::linear(x, t)), named, c)},
                        std::nullopt};
          if (yield(a)) return true;
        }
      }
    } else {
      for (const auto& en : d.entries()) {
        if (!en.is_slack()) continue;
        if (heur && !due(e, en.name)) continue;
        const Term& v = *en.slack;
        auto [d1, rest] = d.without(en.name).split(owned_names(d, v));
        for (const auto& t : synth_set(g, d1, v)) {
          Alternative a{Rule::SlackVar,
                        {synth_p(g, d1, v, t),
                         check_p(g, rest.with(LinearEntry::linear(en.name, t)), e, c)},
                        std::nullopt};
          if (yield(a)) return true;
        }
      }
    }
    return false;
  }

  SearchOptions opts_;
  std::uint64_t budget_;
  std::uint64_t spent_ = 0;
  Subtyper sub_;
  TextCache text_;
  std::unordered_map<MemoKey, bool, MemoKeyHash> check_memo_;
  std::unordered_map<MemoKey, std::vector<Type>, MemoKeyHash> synth_memo_;
};

}  // namespace detail
}  // namespace tridir
