#pragma once

// Everything: checkers, translation, evaluator, harness, parser and JSON.

#include "tridir/checker.hpp"
#include "tridir/context.hpp"
#include "tridir/derivation.hpp"
#include "tridir/evaluator.hpp"
#include "tridir/harness.hpp"
#include "tridir/letnormal.hpp"
#include "tridir/linear_context.hpp"
#include "tridir/ln_checker.hpp"
#include "tridir/parser.hpp"
#include "tridir/serialize.hpp"
#include "tridir/subtyping.hpp"
#include "tridir/syntax.hpp"
#include "tridir/term.hpp"
#include "tridir/tri_checker.hpp"
#include "tridir/type.hpp"
#include "tridir/validator.hpp"
