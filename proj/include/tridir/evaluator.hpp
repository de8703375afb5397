#pragma once

#include <cstddef>
#include <string>

#include "tridir/syntax.hpp"

namespace tridir {

// Call-by-value small-step reduction over source terms. Values are
// variables and abstractions; an annotation is erased in one step when it
// reaches evaluation position.

struct StepResult {
  enum Kind { Stepped, IsValue, Stuck } kind;
  Term term;           // the reduct when Stepped, otherwise the input
  std::string reason;  // set when Stuck
};

inline bool is_eval_value(const Term& e) {
  return e.is(TermKind::Var) || e.is(TermKind::Lam);
}

inline StepResult step(const Term& e) {
  switch (e.kind()) {
    case TermKind::Var:
    case TermKind::Lam:
      return {StepResult::IsValue, e, ""};
    case TermKind::FixVar:
      return {StepResult::Stuck, e, "free fix variable " + e.name()};
    case TermKind::Fix:
      return {StepResult::Stepped, subst_value(e, Term::fix_var(e.name()), e.body()), ""};
    case TermKind::Anno:
      return {StepResult::Stepped, e.subject(), ""};
    case TermKind::App: {
      if (!is_eval_value(e.fn())) {
        StepResult r = step(e.fn());
        if (r.kind == StepResult::Stepped) r.term = Term::app(r.term, e.arg());
        else r.term = e;
        return r;
      }
      if (!is_eval_value(e.arg())) {
        StepResult r = step(e.arg());
        if (r.kind == StepResult::Stepped) r.term = Term::app(e.fn(), r.term);
        else r.term = e;
        return r;
      }
      if (e.fn().is(TermKind::Var)) {
        return {StepResult::Stuck, e, "free variable in function position: " + e.fn().name()};
      }
      return {StepResult::Stepped, subst_value(e.arg(), Term::var(e.fn().name()), e.fn().body()),
              ""};
    }
    default:
      return {StepResult::Stuck, e, "not a source term"};
  }
}

struct EvalResult {
  enum Kind { Value, Stuck, OutOfSteps } kind;
  Term term;  // the last term reached
  std::size_t steps = 0;
  std::string reason;
};

inline EvalResult eval(const Term& e, std::size_t max_steps) {
  Term cur = e;
  for (std::size_t n = 0;; ++n) {
    StepResult r = step(cur);
    switch (r.kind) {
      case StepResult::IsValue:
        return {EvalResult::Value, cur, n, ""};
      case StepResult::Stuck:
        return {EvalResult::Stuck, cur, n, r.reason};
      case StepResult::Stepped:
        if (n == max_steps) return {EvalResult::OutOfSteps, cur, n, ""};
        cur = r.term;
        break;
    }
  }
}

}  // namespace tridir
