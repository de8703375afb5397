#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "tridir/harness.hpp"
#include "tridir/ln_checker.hpp"
#include "tridir/parser.hpp"
#include "tridir/tri_checker.hpp"
#include "tridir/validator.hpp"

using namespace tridir;

namespace {

Term t(const char* s, const TypingContext& g = {}) { return parse_term(s, true, g); }
Type ty(const char* s) { return parse_type(s); }

const TypingContext kMapFilter = parse_context(
    "map : (int -> int) -> (s -> s) /\\ (n -> n), f : int -> int, filter : int -> s \\/ n, n : int");
const TypingContext kPrincipal = parse_context("x : (A1 -> B) /\\ (A2 -> B), y : A1 \\/ A2");

void expect_valid(const CheckOutcome& r, System sys) {
  ASSERT_TRUE(r.derivation.has_value());
  const auto v = validate(*r.derivation, sys);
  EXPECT_TRUE(v.ok) << v.error;
}

TEST(TriCheck, MapFilter) {
  const auto r = tri_check(kMapFilter, {}, t("(map f) (filter n)"), ty("s \\/ n"));
  ASSERT_EQ(r.verdict, Verdict::Accept);
  expect_valid(r, System::Tri);
  EXPECT_TRUE(r.derivation->uses(Rule::DirectL));
}

TEST(TriCheck, PrincipalExample) {
  const auto r = tri_check(kPrincipal, {}, t("x y"), ty("B"));
  ASSERT_EQ(r.verdict, Verdict::Accept);
  expect_valid(r, System::Tri);
  EXPECT_TRUE(r.derivation->uses(Rule::OrL));
}

TEST(TriCheck, Identity) {
  const auto r = tri_check({}, {}, t("fn x => x"), ty("P -> P"));
  ASSERT_EQ(r.verdict, Verdict::Accept);
  expect_valid(r, System::Tri);
  EXPECT_EQ(tri_check({}, {}, t("fn x => x"), ty("P -> Q")).verdict, Verdict::Reject);
}

TEST(TriCheck, AntiValueDoesNotLeakBot) {
  const TypingContext g = parse_context("w : int -> bot, x : int");
  EXPECT_EQ(tri_check(g, {}, t("(fix u => u) (w x)"), ty("P")).verdict, Verdict::Reject);
  // without the fix, w x is named and bot discharges anything
  EXPECT_EQ(tri_check(g, {}, t("(fn u => u) (w x)"), ty("P")).verdict, Verdict::Accept);
}

TEST(TriCheck, ContextAnnotations) {
  const TypingContext g = parse_context("g : (P -> P) /\\ (Q -> Q)");
  const Term e = t("fn x => (g x : x : P |- P, x : Q |- Q)");
  EXPECT_EQ(tri_check(g, {}, e, ty("(P -> P) /\\ (Q -> Q)")).verdict, Verdict::Accept);
  EXPECT_EQ(tri_check(g, {}, e, ty("P -> Q")).verdict, Verdict::Reject);
}

TEST(TriCheck, ScopeErrors) {
  EXPECT_THROW(tri_check({}, {}, t("x"), ty("P")), IllScoped);
  const LinearContext d{LinearEntry::linear("a", ty("P"))};
  EXPECT_THROW(tri_check({}, d, t("fn x => x"), ty("P -> P")), IllScoped);
  EXPECT_THROW(tri_check(parse_context("x : P"), {}, t("let a^ = x in a^"), ty("P")), IllFormed);
}

TEST(TriSynth, ProjectionsAfterPrincipal) {
  const TypingContext g = parse_context("x : (s -> s) /\\ (n -> n)");
  const auto r = tri_synth(g, {}, t("x"));
  ASSERT_EQ(r.results.size(), 3u);
  EXPECT_EQ(r.results[0].type, ty("(s -> s) /\\ (n -> n)"));
  EXPECT_EQ(r.results[1].type, ty("s -> s"));
  EXPECT_EQ(r.results[2].type, ty("n -> n"));
}

TEST(TriSynth, LambdaSynthesizesNothing) {
  EXPECT_TRUE(tri_synth({}, {}, t("fn x => x")).results.empty());
  const auto r = tri_synth({}, {}, t("(fn x => x : |- P -> P)"));
  ASSERT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.results[0].type, ty("P -> P"));
}

TEST(TriSynth, LinearVariable) {
  const LinearContext d{LinearEntry::linear("a", ty("A /\\ B"))};
  const auto r = tri_synth({}, d, t("a^"));
  ASSERT_EQ(r.results.size(), 3u);
  EXPECT_EQ(r.results[0].type, ty("A /\\ B"));
}

TEST(CtxAnno, Satisfaction) {
  const TypingContext odd = parse_context("x : odd");
  EXPECT_TRUE(ctx_anno_satisfied({}, odd));
  EXPECT_TRUE(ctx_anno_satisfied(odd, odd));
  EXPECT_FALSE(ctx_anno_satisfied(odd, parse_context("x : even")));
  EXPECT_TRUE(ctx_anno_satisfied(parse_context("x : odd \\/ even"), odd));
  EXPECT_FALSE(ctx_anno_satisfied(odd, {}));
}

TEST(LetCheck, MapFilterAfterTranslation) {
  const auto r = ln_check(kMapFilter, {}, let_normal_form(t("(map f) (filter n)")), ty("s \\/ n"));
  ASSERT_EQ(r.verdict, Verdict::Accept);
  expect_valid(r, System::LetNormal);
}

TEST(LetCheck, PrincipalTypeAtTheLet) {
  const Term e = t("let a^ = x in let b^ = y in let c^ = a^ b^ in c^");
  const auto r = ln_check(kPrincipal, {}, e, ty("B"));
  ASSERT_EQ(r.verdict, Verdict::Accept);
  expect_valid(r, System::LetNormal);
  // the let for a^ binds x's declared type
  const Derivation& root = *r.derivation;
  ASSERT_EQ(root.rule, Rule::Let);
  EXPECT_EQ(root.children[0].judgment.type, ty("(A1 -> B) /\\ (A2 -> B)"));
}

TEST(LetCheck, ProjectionHookFails) {
  const Term e = let_normal_form(t("x y"));
  Checker forced(SearchOptions{System::LetNormal, Strategy::Heuristic, 100000, true});
  EXPECT_EQ(forced.check(kPrincipal, {}, e, ty("B")).verdict, Verdict::Reject);
  Checker exhaustive(SearchOptions{System::LetNormal, Strategy::Exhaustive, 100000, true});
  EXPECT_EQ(exhaustive.check(kPrincipal, {}, e, ty("B")).verdict, Verdict::Reject);
}

TEST(LetCheck, SlackBindingDischarged) {
  const TypingContext g = parse_context("y : P");
  const Term e = t("let! a^ = (fn x => x : |- P -> P) in let b^ = y in let c^ = a^ b^ in c^", g);
  const auto r = ln_check(g, {}, e, ty("P"));
  ASSERT_EQ(r.verdict, Verdict::Accept);
  expect_valid(r, System::LetNormal);
  EXPECT_TRUE(r.derivation->uses(Rule::SlackLet));
  EXPECT_TRUE(r.derivation->uses(Rule::SlackVar));
}

TEST(LetCheck, Errors) {
  EXPECT_THROW(ln_check({}, {}, t("let a^ = x in a^"), ty("P")), IllScoped);
  EXPECT_THROW(ln_check(parse_context("x : P"), {}, t("let a^ = x in fn y => a^"), ty("P -> P")),
               IllFormed);
}

TEST(LetSynth, LinearVariables) {
  const LinearContext a{LinearEntry::linear("a", ty("A"))};
  const auto one = ln_synth({}, a, t("a^"));
  ASSERT_EQ(one.results.size(), 1u);
  EXPECT_EQ(one.results[0].type, ty("A"));
  const LinearContext ab{LinearEntry::linear("a", ty("A /\\ B"))};
  const auto three = ln_synth({}, ab, t("a^"));
  ASSERT_EQ(three.results.size(), 3u);
  EXPECT_EQ(three.results[1].type, ty("A"));
  EXPECT_EQ(three.results[2].type, ty("B"));
  EXPECT_TRUE(ln_synth({}, {}, t("fn x => x")).results.empty());
}

TEST(Fuel, RunsOutAndReports) {
  const auto r = tri_check(kMapFilter, {}, t("(map f) (filter n)"), ty("s \\/ n"), 3);
  EXPECT_EQ(r.verdict, Verdict::FuelExhausted);
  EXPECT_FALSE(r.derivation.has_value());
}

// Properties over a small corpus, in both systems.

std::vector<Term> small_corpus() {
  Signature sig = Signature::defaults();
  sig.max_size = 5;
  return enumerate_terms(sig);
}

void walk(const Derivation& d, const std::function<void(const Derivation&)>& f) {
  f(d);
  for (const auto& c : d.children) walk(c, f);
}

// On every path from the root to a leaf, each slack entry is discharged at
// most once, and only a botL leaf, which closes its branch under any Δ, may
// still hold one.
bool slack_discharged(const Derivation& d, std::multiset<std::string> seen) {
  if (d.rule == Rule::SlackVar) {
    for (const auto& en : d.judgment.delta.entries()) {
      const LinearEntry* now = d.children[1].judgment.delta.lookup(en.name);
      if (en.is_slack() && now != nullptr && !now->is_slack()) {
        if (seen.count(en.name)) return false;
        seen.insert(en.name);
      }
    }
  }
  if (d.children.empty()) return d.rule == Rule::BotL || !d.judgment.delta.has_slack();
  for (const auto& c : d.children) {
    if (!slack_discharged(c, seen)) return false;
  }
  return true;
}

TEST(CheckerProperties, DerivationShapes) {
  const Signature sig = Signature::defaults();
  std::size_t accepted = 0;
  for (const auto& e : small_corpus()) {
    Checker tri(SearchOptions{System::Tri});
    Checker ln(SearchOptions{System::LetNormal});
    const Term l = let_normal_form(e);
    for (const auto& c : sig.check_types) {
      const auto a = tri.check(sig.gamma, {}, e, c);
      const auto b = ln.check(sig.gamma, {}, l, c);
      for (const auto* r : {&a, &b}) {
        if (!r->accepted()) continue;
        ++accepted;
        const bool is_tri = r == &a;
        walk(*r->derivation, [&](const Derivation& n) {
          const Judgment& j = n.judgment;
          if (is_tri) ASSERT_TRUE(ok_delta(j.delta, j.subject)) << to_string(j.subject);
          if (n.rule == Rule::AndI) {
            ASSERT_TRUE(is_tri ? is_tri_value(j.subject) : is_value(j.subject)) << to_string(j.subject);
          }
          if (n.rule == Rule::DirectL) {
            ASSERT_FALSE(is_tri && n.children[0].judgment.subject.is(TermKind::LinVar));
          }
          if (!is_tri) ASSERT_NE(n.rule, Rule::DirectL);
          if (n.rule == Rule::Let) ASSERT_TRUE(j.subject.is(TermKind::Let));
        });
        if (!is_tri) ASSERT_TRUE(slack_discharged(*r->derivation, {})) << to_string(l);
      }
    }
  }
  EXPECT_GT(accepted, 1000u);
}

TEST(CheckerProperties, FuelMonotone) {
  const Signature sig = Signature::defaults();
  const auto terms = small_corpus();
  for (std::size_t i = 0; i < terms.size(); i += 7) {
    for (System sys : {System::Tri, System::LetNormal}) {
      const Term e = sys == System::Tri ? terms[i] : let_normal_form(terms[i]);
      for (std::size_t k = 0; k < sig.check_types.size(); k += 5) {
        const Type& c = sig.check_types[k];
        const auto full = Checker(SearchOptions{sys}).check(sig.gamma, {}, e, c);
        ASSERT_NE(full.verdict, Verdict::FuelExhausted);
        for (std::uint64_t f = 1; f <= full.fuel_used + 1; f *= 2) {
          const auto r = Checker(SearchOptions{sys}).check(sig.gamma, {}, e, c, f);
          ASSERT_TRUE(r.verdict == Verdict::FuelExhausted || r.verdict == full.verdict)
              << to_string(e) << " fuel " << f;
        }
        const auto more = Checker(SearchOptions{sys}).check(sig.gamma, {}, e, c, full.fuel_used);
        ASSERT_EQ(more.verdict, full.verdict) << to_string(e);
      }
    }
  }
}

TEST(CheckerProperties, StrategiesAgree) {
  const Signature sig = Signature::defaults();
  for (const auto& e : small_corpus()) {
    const auto m = strategy_agreement(sig.gamma, e, sig.check_types, 100000);
    ASSERT_TRUE(m.empty()) << to_string(m.front().term) << " : " << to_string(m.front().type);
  }
}

}  // namespace
