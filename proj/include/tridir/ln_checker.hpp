#pragma once

#include <cstdint>

#include "tridir/checker.hpp"

namespace tridir {

// The let-normal system: every tridirectional rule except directL, plus let,
// slack-let and slack-var.

inline CheckOutcome ln_check(const TypingContext& g, const LinearContext& d, const Term& e,
                             const Type& c, std::uint64_t fuel = 100000,
                             Strategy strategy = Strategy::Heuristic,
                             bool force_let_projection = false) {
  Checker ch(SearchOptions{System::LetNormal, strategy, fuel, force_let_projection});
  return ch.check(g, d, e, c);
}

inline SynthOutcome ln_synth(const TypingContext& g, const LinearContext& d, const Term& e,
                             std::uint64_t fuel = 100000,
                             Strategy strategy = Strategy::Heuristic) {
  Checker ch(SearchOptions{System::LetNormal, strategy, fuel, false});
  return ch.synth(g, d, e);
}

}  // namespace tridir
