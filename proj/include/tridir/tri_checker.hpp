#pragma once

#include <cstdint>

#include "tridir/checker.hpp"

namespace tridir {

// The left tridirectional system: syntax-directed rules, subsumption, left
// rules on Δ and directL over every evaluation position.

inline CheckOutcome tri_check(const TypingContext& g, const LinearContext& d, const Term& e,
                              const Type& c, std::uint64_t fuel = 100000,
                              Strategy strategy = Strategy::Heuristic) {
  Checker ch(SearchOptions{System::Tri, strategy, fuel, false});
  return ch.check(g, d, e, c);
}

inline SynthOutcome tri_synth(const TypingContext& g, const LinearContext& d, const Term& e,
                              std::uint64_t fuel = 100000,
                              Strategy strategy = Strategy::Heuristic) {
  Checker ch(SearchOptions{System::Tri, strategy, fuel, false});
  return ch.synth(g, d, e);
}

}  // namespace tridir
