#include <gtest/gtest.h>

#include "tridir/parser.hpp"
#include "tridir/subtyping.hpp"
#include "type_oracle.hpp"

using namespace tridir;

namespace {

Type ty(const char* s) { return parse_type(s); }

TEST(Subtype, Examples) {
  EXPECT_TRUE(subtype(ty("bot"), ty("int -> int")));
  EXPECT_TRUE(subtype(ty("(s -> s) /\\ (n -> n)"), ty("s -> s")));
  EXPECT_FALSE(subtype(ty("(P -> Q) /\\ (P -> R)"), ty("P -> Q /\\ R")));
  EXPECT_TRUE(subtype(ty("P"), ty("P \\/ Q")));
  EXPECT_FALSE(subtype(ty("P \\/ Q"), ty("P")));
  EXPECT_FALSE(subtype(ty("P"), ty("Q")));
  EXPECT_TRUE(subtype(ty("Q -> P"), ty("Q /\\ P -> P \\/ Q")));
}

TEST(Subtype, DerivationsValidate) {
  Subtyper s;
  const auto d = s.derive(ty("(s -> s) /\\ (n -> n)"), ty("s -> s"));
  ASSERT_TRUE(d.has_value());
  EXPECT_TRUE(validate(*d));
  EXPECT_EQ(d->rule, SubRule::AndL1);
  EXPECT_FALSE(s.derive(ty("P"), ty("Q")).has_value());
}

TEST(Subtype, RejectsMalformedDerivation) {
  SubDerivation bad{SubRule::BaseRefl, ty("P"), ty("Q"), {}};
  EXPECT_FALSE(validate(bad));
  SubDerivation wrong_child{SubRule::AndL2, ty("P /\\ Q"), ty("P"),
                            {{SubRule::BaseRefl, ty("P"), ty("P"), {}}}};
  EXPECT_FALSE(validate(wrong_child));
}

// Every pair of the depth-3 universe against the naive oracle.
TEST(SubtypeProperties, AgreesWithNaiveOracle) {
  oracle::Universe u(3);
  std::vector<Type> types;
  for (int i = 0; i < u.size(); ++i) types.push_back(u.type(i));
  std::size_t mismatches = 0;
  for (int a = 0; a < u.size(); ++a) {
    Subtyper s;
    for (int b = 0; b < u.size(); ++b) {
      if (s(types[a], types[b]) != u.sub(a, b)) {
        if (++mismatches < 10) ADD_FAILURE() << to_string(types[a]) << " <: " << to_string(types[b]);
      }
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(SubtypeProperties, ReflexiveAndBotLeast) {
  oracle::Universe u(3);
  for (int a = 0; a < u.size(); ++a) {
    const Type t = u.type(a);
    EXPECT_TRUE(subtype(t, t)) << to_string(t);
    EXPECT_TRUE(subtype(Type::bot(), t)) << to_string(t);
  }
}

TEST(SubtypeProperties, LatticeLaws) {
  oracle::Universe u(2);
  std::vector<Type> ts;
  for (int i = 0; i < u.size(); ++i) ts.push_back(u.type(i));
  Subtyper s;
  for (const auto& a : ts) {
    for (const auto& b : ts) {
      const Type m = Type::meet(a, b), j = Type::join(a, b);
      ASSERT_TRUE(s(m, a) && s(m, b));
      ASSERT_TRUE(s(a, j) && s(b, j));
      for (const auto& c : ts) {
        if (s(c, a) && s(c, b)) ASSERT_TRUE(s(c, m)) << to_string(c) << " " << to_string(m);
        if (s(a, c) && s(b, c)) ASSERT_TRUE(s(j, c)) << to_string(j) << " " << to_string(c);
      }
    }
  }
}

TEST(SubtypeProperties, EveryDerivationValidates) {
  oracle::Universe u(3);
  std::size_t checked = 0;
  for (int a = 0; a < u.size(); a += 7) {
    Subtyper s;
    for (int b = 0; b < u.size(); b += 3) {
      const auto d = s.derive(u.type(a), u.type(b));
      if (!d) continue;
      ++checked;
      ASSERT_TRUE(validate(*d)) << to_string(u.type(a)) << " <: " << to_string(u.type(b));
    }
  }
  EXPECT_GT(checked, 1000u);
}

}  // namespace
