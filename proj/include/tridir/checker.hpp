#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "tridir/derivation.hpp"
#include "tridir/detail/engine.hpp"
#include "tridir/letnormal.hpp"
#include "tridir/syntax.hpp"

namespace tridir {

inline bool contains_let(const Term& e) {
  switch (e.kind()) {
    case TermKind::Let:
    case TermKind::SlackLet:
      return true;
    case TermKind::Lam:
    case TermKind::Fix:
      return contains_let(e.body());
    case TermKind::App:
      return contains_let(e.fn()) || contains_let(e.arg());
    case TermKind::Anno:
      return contains_let(e.subject());
    default:
      return false;
  }
}

// A reusable checker for one system. Memo tables persist across queries on
// the same instance; each query gets its own fuel budget.
class Checker {
 public:
  explicit Checker(SearchOptions opts = {}) : engine_(opts) {}

  const SearchOptions& options() const { return engine_.options(); }

  CheckOutcome check(const TypingContext& g, const LinearContext& d, const Term& e,
                     const Type& c) {
    require(g, d, e);
    return check_unchecked(g, d, e, c, engine_.options().fuel);
  }

  CheckOutcome check(const TypingContext& g, const LinearContext& d, const Term& e,
                     const Type& c, std::uint64_t fuel) {
    require(g, d, e);
    return check_unchecked(g, d, e, c, fuel);
  }

  SynthOutcome synth(const TypingContext& g, const LinearContext& d, const Term& e) {
    return synth(g, d, e, engine_.options().fuel);
  }

  SynthOutcome synth(const TypingContext& g, const LinearContext& d, const Term& e,
                     std::uint64_t fuel) {
    require(g, d, e);
    SynthOutcome out;
    engine_.set_budget(fuel);
    std::vector<Type> types;
    try {
      types = engine_.synth_set(g, d, e);
    } catch (const detail::FuelOut&) {
      out.fuel_exhausted = true;
      out.fuel_used = engine_.spent();
      return out;
    }
    out.fuel_used = engine_.spent();
    engine_.set_budget(kUnlimited);
    for (const auto& t : types) out.results.push_back({t, engine_.derive_synth(g, d, e, t)});
    return out;
  }

 private:
  static constexpr std::uint64_t kUnlimited = std::numeric_limits<std::uint64_t>::max();

  // Validation is skipped when the input is the one validated last, which
  // is the common case of one subject checked against many types.
  void require(const TypingContext& g, const LinearContext& d, const Term& e) {
    if (last_ && last_->subject.identity() == e.identity() && last_->gamma == g &&
        last_->delta == d) {
      return;
    }
    validate_input(g, d, e);
    last_ = Validated{g, d, e};
  }

  void validate_input(const TypingContext& g, const LinearContext& d, const Term& e) const {
    const bool ln = engine_.options().system == System::LetNormal;
    if (!ln) {
      if (contains_let(e)) throw IllFormed("let forms are not terms of the tridirectional system");
      if (d.has_slack()) throw IllFormed("slack entries are not allowed in the tridirectional system");
    } else if (!wf_letnormal(e)) {
      throw IllFormed("not a well-formed let-normal term: " + to_string(e));
    }
    if (!ok_gamma(g, e)) throw IllScoped("free variable not declared in the context: " + to_string(e));
    for (const auto& en : d.entries()) {
      if (en.is_slack() && !ok_gamma(g, *en.slack)) {
        throw IllScoped("free variable not declared in the context: " + to_string(*en.slack));
      }
    }
    if (!ok_delta(d, e)) {
      throw IllScoped("linear context does not match the subject: " + to_string(d) + " for " +
                      to_string(e));
    }
  }

  CheckOutcome check_unchecked(const TypingContext& g, const LinearContext& d, const Term& e,
                               const Type& c, std::uint64_t fuel) {
    CheckOutcome out;
    engine_.set_budget(fuel);
    bool ok = false;
    try {
      ok = engine_.decide_check(g, d, e, c);
    } catch (const detail::FuelOut&) {
      out.verdict = Verdict::FuelExhausted;
      out.fuel_used = engine_.spent();
      return out;
    }
    out.fuel_used = engine_.spent();
    if (!ok) {
      out.verdict = Verdict::Reject;
      return out;
    }
    engine_.set_budget(kUnlimited);
    out.verdict = Verdict::Accept;
    out.derivation = engine_.derive_check(g, d, e, c);
    return out;
  }

  struct Validated {
    TypingContext gamma;
    LinearContext delta;
    Term subject;
  };

  detail::Engine engine_;
  std::optional<Validated> last_;
};

}  // namespace tridir
