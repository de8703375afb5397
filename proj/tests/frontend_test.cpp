#include <gtest/gtest.h>

#include "tridir/harness.hpp"
#include "tridir/parser.hpp"
#include "tridir/serialize.hpp"
#include "tridir/tri_checker.hpp"
#include "tridir/ln_checker.hpp"
#include "tridir/validator.hpp"

using namespace tridir;

namespace {

Type P() { return Type::base("P"); }
Type Q() { return Type::base("Q"); }

TEST(Parse, File) {
  const SourceFile f = parse("val f : P -> Q; f");
  ASSERT_EQ(f.gamma.size(), 1u);
  EXPECT_EQ(f.gamma.lookup("f")->type, Type::arrow(P(), Q()));
  EXPECT_TRUE(f.subject == Term::var("f"));

  const SourceFile g = parse("# prelude\ntype P;\ntype Q;\nval x : P;\nfn y => x\n");
  EXPECT_EQ(g.atoms, (std::vector<std::string>{"P", "Q"}));
  EXPECT_TRUE(alpha_eq(g.subject, Term::lam("y", Term::var("x"))));
}

TEST(Parse, Annotation) {
  const Term e = parse_term("(fn x => x : |- P -> P)");
  ASSERT_TRUE(e.is(TermKind::Anno));
  ASSERT_EQ(e.annotations().size(), 1u);
  EXPECT_TRUE(e.annotations()[0].context.empty());
  EXPECT_EQ(e.annotations()[0].type, Type::arrow(P(), P()));
  EXPECT_TRUE(e.subject() == Term::lam("x", Term::var("x")));

  const Term c = parse_term("(g x : x : P |- P, Q)");
  ASSERT_EQ(c.annotations().size(), 2u);
  EXPECT_EQ(c.annotations()[0].context.lookup("x")->type, P());
  EXPECT_TRUE(c.annotations()[1].context.empty());
}

TEST(Parse, TypePrecedence) {
  const Type want = Type::arrow(
      Type::join(Type::meet(P(), Q()), Type::base("R")), Type::base("S"));
  EXPECT_EQ(parse_type("P /\\ Q \\/ R -> S"), want);
  EXPECT_EQ(parse_type("P -> Q -> P"), Type::arrow(P(), Type::arrow(Q(), P())));
  EXPECT_EQ(parse_type("P /\\ Q /\\ P"), Type::meet(Type::meet(P(), Q()), P()));
  EXPECT_EQ(parse_type("bot"), Type::bot());
}

TEST(Parse, ApplicationIsLeftAssociative) {
  EXPECT_TRUE(parse_term("f x y") ==
              Term::app(Term::app(Term::var("f"), Term::var("x")), Term::var("y")));
  EXPECT_TRUE(parse_term("fix u => u")  == Term::fix("u", Term::fix_var("u")));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse("type P;\nval x : P;\nfn => x");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 4u);
  }
  EXPECT_THROW(parse("type P; type P; x"), DuplicateDecl);
  EXPECT_THROW(parse("type P; val x : P; val x : P; x"), DuplicateDecl);
  EXPECT_THROW(parse("type P; val x : Q; x"), UnknownAtom);
  EXPECT_THROW(parse_type("P ->"), ParseError);
  EXPECT_THROW(parse_term("x^"), ParseError);
  EXPECT_THROW(parse_term("let x^ = x in x^"), ParseError);
  EXPECT_NO_THROW(parse_term("let x^ = x in x^", true));
}

std::vector<Term> corpus() {
  Signature sig = Signature::defaults();
  sig.max_size = 5;
  auto out = enumerate_terms(sig);
  sig.random_count = 100;
  for (auto& e : gen_random_terms(sig)) out.push_back(e);
  return out;
}

TEST(PrintParse, TermsRoundTrip) {
  const Signature sig = Signature::defaults();
  for (const auto& e : corpus()) {
    ASSERT_TRUE(alpha_eq(parse_term(to_string(e), false, sig.gamma), e)) << to_string(e);
    const Term l = let_normal_form(e);
    ASSERT_TRUE(alpha_eq(parse_term(to_string(l), true, sig.gamma), l)) << to_string(l);
  }
}

TEST(PrintParse, TypesRoundTrip) {
  for (const auto& t : enumerate_types({P(), Q(), Type::bot()}, 3)) {
    ASSERT_EQ(parse_type(to_string(t)), t) << to_string(t);
  }
}

TEST(Json, TermsAndTypesRoundTrip) {
  for (const auto& e : corpus()) {
    const Term l = let_normal_form(e);
    ASSERT_TRUE(term_from_json(to_json(l)) == l) << to_string(l);
  }
  const Type t = parse_type("(P -> Q) /\\ (P \\/ bot)");
  EXPECT_EQ(type_from_json(to_json(t)), t);
  EXPECT_THROW(term_from_json(Json{{"kind", "nope"}}), JsonError);
  EXPECT_THROW(term_from_json(Json{{"kind", "app"}}), JsonError);
}

TEST(Json, Stable) {
  const Term e = parse_term("(fn x => x : P -> P, Q -> Q) y");
  EXPECT_EQ(to_json(translate(e)).dump(), to_json(translate(e)).dump());
  EXPECT_EQ(to_json(measure(let_normal_form(e))).dump(),
            R"({"unbound_synth":0,"brittle":0,"prickly":0,"transposed":0})");
}

TEST(Json, DerivationsRoundTripAndRevalidate) {
  const Signature sig = Signature::defaults();
  std::size_t n = 0;
  for (const auto& e : corpus()) {
    if (n > 300) break;
    Checker tri(SearchOptions{System::Tri});
    Checker ln(SearchOptions{System::LetNormal});
    const Term l = let_normal_form(e);
    for (const auto& c : sig.check_types) {
      for (auto [r, sys] : {std::pair{tri.check(sig.gamma, {}, e, c), System::Tri},
                            std::pair{ln.check(sig.gamma, {}, l, c), System::LetNormal}}) {
        if (!r.accepted()) continue;
        ++n;
        const Json j = to_json(*r.derivation);
        const Derivation back = derivation_from_json(Json::parse(j.dump()));
        const auto v = validate(back, sys);
        ASSERT_TRUE(v.ok) << v.error << "\n" << j.dump(2);
        ASSERT_EQ(to_json(back).dump(), j.dump());
      }
    }
  }
  EXPECT_GT(n, 300u);
}

TEST(Json, DerivationText) {
  const TypingContext g = parse_context("x : P");
  const auto r = ln_check(g, {}, parse_term("let a^ = x in a^", true, g), P());
  ASSERT_TRUE(r.accepted());
  const std::string text = to_text(*r.derivation);
  EXPECT_EQ(text.substr(0, text.find('\n')), "let  |- let a^ = x in a^ <= P");
}

}  // namespace
