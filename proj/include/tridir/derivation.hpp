#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tridir/context.hpp"
#include "tridir/linear_context.hpp"
#include "tridir/subtyping.hpp"
#include "tridir/term.hpp"

namespace tridir {

enum class Rule {
  Var,
  LinVar,
  ArrI,
  ArrE,
  Sub,
  FixVar,
  Fix,
  BotL,
  CtxAnno,
  AndL1,
  AndL2,
  AndI,
  AndE1,
  AndE2,
  OrL,
  OrI1,
  OrI2,
  DirectL,
  Let,
  SlackLet,
  SlackVar,
};

inline constexpr Rule kAllRules[] = {
    Rule::Var,   Rule::LinVar, Rule::ArrI,  Rule::ArrE,    Rule::Sub,      Rule::FixVar,
    Rule::Fix,   Rule::BotL,   Rule::CtxAnno, Rule::AndL1, Rule::AndL2,    Rule::AndI,
    Rule::AndE1, Rule::AndE2,  Rule::OrL,   Rule::OrI1,    Rule::OrI2,     Rule::DirectL,
    Rule::Let,   Rule::SlackLet, Rule::SlackVar};

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::Var: return "var";
    case Rule::LinVar: return "linvar";
    case Rule::ArrI: return "arrI";
    case Rule::ArrE: return "arrE";
    case Rule::Sub: return "sub";
    case Rule::FixVar: return "fixvar";
    case Rule::Fix: return "fix";
    case Rule::BotL: return "botL";
    case Rule::CtxAnno: return "ctx-anno";
    case Rule::AndL1: return "andL1";
    case Rule::AndL2: return "andL2";
    case Rule::AndI: return "andI";
    case Rule::AndE1: return "andE1";
    case Rule::AndE2: return "andE2";
    case Rule::OrL: return "orL";
    case Rule::OrI1: return "orI1";
    case Rule::OrI2: return "orI2";
    case Rule::DirectL: return "directL";
    case Rule::Let: return "let";
    case Rule::SlackLet: return "slack-let";
    case Rule::SlackVar: return "slack-var";
  }
  return "?";
}

inline std::optional<Rule> rule_from_string(const std::string& s) {
  for (Rule r : kAllRules) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

enum class Direction { Check, Synth };

// Γ; Δ ⊢ e ⇓ C or Γ; Δ ⊢ e ⇑ A.
struct Judgment {
  TypingContext gamma;
  LinearContext delta;
  Term subject;
  Direction direction;
  Type type;
};

struct Derivation {
  Rule rule;
  Judgment judgment;
  std::vector<Derivation> children;
  std::optional<SubDerivation> subtyping;  // set for sub

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
  }

  bool uses(Rule r) const {
    if (rule == r) return true;
    for (const auto& c : children) {
      if (c.uses(r)) return true;
    }
    return false;
  }
};

enum class Verdict { Accept, Reject, FuelExhausted };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "accept";
    case Verdict::Reject: return "reject";
    case Verdict::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

struct CheckOutcome {
  Verdict verdict = Verdict::Reject;
  std::optional<Derivation> derivation;  // set iff Accept
  std::uint64_t fuel_used = 0;

  bool accepted() const { return verdict == Verdict::Accept; }
};

struct SynthResult {
  Type type;
  Derivation derivation;
};

struct SynthOutcome {
  bool fuel_exhausted = false;
  std::vector<SynthResult> results;  // principal first, no duplicates
  std::uint64_t fuel_used = 0;
};

// A free variable is undeclared, or Δ does not match the subject's linear
// variables.
class IllScoped : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The subject is not a well-formed term of the system it was given to.
class IllFormed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class System { Tri, LetNormal };
enum class Strategy { Heuristic, Exhaustive };

struct SearchOptions {
  System system = System::LetNormal;
  Strategy strategy = Strategy::Heuristic;
  std::uint64_t fuel = 100000;
  // Test hook: when the right-hand side of a let synthesizes several types,
  // never use the first (principal) one.
  bool force_let_projection = false;
};

}  // namespace tridir
