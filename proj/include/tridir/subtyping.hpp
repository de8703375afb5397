#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tridir/type.hpp"

namespace tridir {

enum class SubRule { Arrow, AndL1, AndL2, AndR, BotL, OrL, OrR1, OrR2, BaseRefl };

inline const char* to_string(SubRule r) {
  switch (r) {
    case SubRule::Arrow: return "arr";
    case SubRule::AndL1: return "andL1";
    case SubRule::AndL2: return "andL2";
    case SubRule::AndR: return "andR";
    case SubRule::BotL: return "botL";
    case SubRule::OrL: return "orL";
    case SubRule::OrR1: return "orR1";
    case SubRule::OrR2: return "orR2";
    case SubRule::BaseRefl: return "base-refl";
  }
  return "?";
}

inline std::optional<SubRule> sub_rule_from_string(const std::string& s) {
  for (SubRule r : {SubRule::Arrow, SubRule::AndL1, SubRule::AndL2, SubRule::AndR,
                    SubRule::BotL, SubRule::OrL, SubRule::OrR1, SubRule::OrR2,
                    SubRule::BaseRefl}) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

struct SubDerivation {
  SubRule rule;
  Type lower, upper;  // lower ≤ upper
  std::vector<SubDerivation> children;
};

struct TypePair {
  Type a, b;
  friend bool operator==(const TypePair& x, const TypePair& y) {
    return x.a == y.a && x.b == y.b;
  }
};

struct TypePairHash {
  std::size_t operator()(const TypePair& p) const noexcept {
    return hash_combine(p.a.hash(), p.b.hash());
  }
};

// Decides A ≤ B. Invertible rules (⊥L, ∧R, ∨L) are applied first, then the
// structural arrow rule and atom reflexivity, then the ∧L/∨R choices are
// backtracked over. Every premise is strictly smaller, so the search ends.
// Results are memoized per instance.
class Subtyper {
 public:
  bool operator()(const Type& a, const Type& b) { return decide(a, b); }

  bool decide(const Type& a, const Type& b) {
    auto it = memo_.find({a, b});
    if (it != memo_.end()) return it->second;
    const bool r = compute(a, b);
    memo_.emplace(TypePair{a, b}, r);
    return r;
  }

  // A derivation of A ≤ B, if one exists.
  std::optional<SubDerivation> derive(const Type& a, const Type& b) {
    if (!decide(a, b)) return std::nullopt;
    return build(a, b);
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  bool compute(const Type& a, const Type& b) {
    if (a.is(TypeKind::Bot)) return true;
    if (b.is(TypeKind::Intersect)) return decide(a, b.left()) && decide(a, b.right());
    if (a.is(TypeKind::Union)) return decide(a.left(), b) && decide(a.right(), b);
    if (a.is(TypeKind::Arrow) && b.is(TypeKind::Arrow)) {
      return decide(b.left(), a.left()) && decide(a.right(), b.right());
    }
    if (a.is(TypeKind::Base) && b.is(TypeKind::Base)) return a.name() == b.name();
    if (a.is(TypeKind::Intersect) && (decide(a.left(), b) || decide(a.right(), b))) {
      return true;
    }
    if (b.is(TypeKind::Union) && (decide(a, b.left()) || decide(a, b.right()))) {
      return true;
    }
    return false;
  }

  // Replays compute() choosing the first succeeding rule.
  SubDerivation build(const Type& a, const Type& b) {
    auto node = [&](SubRule r, std::vector<SubDerivation> ch) {
      return SubDerivation{r, a, b, std::move(ch)};
    };
    if (a.is(TypeKind::Bot)) return node(SubRule::BotL, {});
    if (b.is(TypeKind::Intersect)) {
      return node(SubRule::AndR, {build(a, b.left()), build(a, b.right())});
    }
    if (a.is(TypeKind::Union)) {
      return node(SubRule::OrL, {build(a.left(), b), build(a.right(), b)});
    }
    if (a.is(TypeKind::Arrow) && b.is(TypeKind::Arrow)) {
      return node(SubRule::Arrow, {build(b.left(), a.left()), build(a.right(), b.right())});
    }
    if (a.is(TypeKind::Base) && b.is(TypeKind::Base)) return node(SubRule::BaseRefl, {});
    if (a.is(TypeKind::Intersect)) {
      if (decide(a.left(), b)) return node(SubRule::AndL1, {build(a.left(), b)});
      if (decide(a.right(), b)) return node(SubRule::AndL2, {build(a.right(), b)});
    }
    if (decide(a, b.left())) return node(SubRule::OrR1, {build(a, b.left())});
    return node(SubRule::OrR2, {build(a, b.right())});
  }

  std::unordered_map<TypePair, bool, TypePairHash> memo_;
};

inline bool subtype(const Type& a, const Type& b) {
  Subtyper s;
  return s.decide(a, b);
}

// Checks that every node of d instantiates its rule schema.
inline bool validate(const SubDerivation& d) {
  const Type& a = d.lower;
  const Type& b = d.upper;
  const auto& ch = d.children;
  auto conc = [](const SubDerivation& c, const Type& l, const Type& u) {
    return c.lower == l && c.upper == u && validate(c);
  };
  switch (d.rule) {
    case SubRule::BotL:
      return ch.empty() && a.is(TypeKind::Bot);
    case SubRule::BaseRefl:
      return ch.empty() && a.is(TypeKind::Base) && b.is(TypeKind::Base) &&
             a.name() == b.name();
    case SubRule::Arrow:
      return ch.size() == 2 && a.is(TypeKind::Arrow) && b.is(TypeKind::Arrow) &&
             conc(ch[0], b.left(), a.left()) && conc(ch[1], a.right(), b.right());
    case SubRule::AndR:
      return ch.size() == 2 && b.is(TypeKind::Intersect) && conc(ch[0], a, b.left()) &&
             conc(ch[1], a, b.right());
    case SubRule::OrL:
      return ch.size() == 2 && a.is(TypeKind::Union) && conc(ch[0], a.left(), b) &&
             conc(ch[1], a.right(), b);
    case SubRule::AndL1:
      return ch.size() == 1 && a.is(TypeKind::Intersect) && conc(ch[0], a.left(), b);
    case SubRule::AndL2:
      return ch.size() == 1 && a.is(TypeKind::Intersect) && conc(ch[0], a.right(), b);
    case SubRule::OrR1:
      return ch.size() == 1 && b.is(TypeKind::Union) && conc(ch[0], a, b.left());
    case SubRule::OrR2:
      return ch.size() == 1 && b.is(TypeKind::Union) && conc(ch[0], a, b.right());
  }
  return false;
}

}  // namespace tridir
