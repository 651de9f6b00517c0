#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "cmc/errors.hpp"
#include "cmc/expr.hpp"
#include "cmc/jet.hpp"
#include "support/fd_reference.hpp"
#include "support/random_expr.hpp"

using namespace cmc;

namespace {

Jet2 at(const std::string& text, double u, const ConstantMap& k = {}) {
  return eval_jet(parse(text, names_of(k)), u, k);
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;
}

}  // namespace

TEST(Parse, CanonicalPrint) {
  EXPECT_EQ(parse("sqrt(-u^2+2*u)").to_string(), "sqrt(((-(u^2))+(2*u)))");
  EXPECT_EQ(parse("1-2-3").to_string(), "((1-2)-3)");
  EXPECT_EQ(parse("8/4/2").to_string(), "((8/4)/2)");
  EXPECT_EQ(parse("-u^2").to_string(), "(-(u^2))");
  EXPECT_EQ(parse("2*u+3*u^2").to_string(), "((2*u)+(3*(u^2)))");
}

TEST(Parse, DoubleStarIsSyntaxError) {
  try {
    parse("2**u");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(Parse, SyntaxErrorsCarryOffsets) {
  for (const auto& [text, offset] :
       std::vector<std::pair<std::string, std::size_t>>{{"(u+1", 4}, {"u+", 2}, {"u $ 2", 2}}) {
    try {
      parse(text);
      FAIL() << text;
    } catch (const SyntaxError& e) {
      EXPECT_EQ(e.offset(), offset) << text;
    }
  }
}

TEST(Parse, ExponentMustBeConstant) {
  EXPECT_EQ(code_of([] { parse("2^u"); }), ErrorCode::SyntaxError);
  EXPECT_NO_THROW(parse("u^-2"));
  EXPECT_NO_THROW(parse("u^(a+1)", ConstantNames{"a"}));
}

TEST(Parse, Identifiers) {
  EXPECT_EQ(code_of([] { parse("cosh(u)+a"); }), ErrorCode::UnknownIdentifier);
  EXPECT_NO_THROW(parse("cosh(u)+a", ConstantNames{"a"}));
  EXPECT_EQ(code_of([] { parse("tan(u)"); }), ErrorCode::UnknownIdentifier);
  EXPECT_NEAR(at("pi", 0.0).val, std::acos(-1.0), 1e-15);
}

TEST(EvalJet, Examples) {
  const Jet2 sq = at("u^2", 3.0);
  EXPECT_DOUBLE_EQ(sq.val, 9.0);
  EXPECT_DOUBLE_EQ(sq.d1, 6.0);
  EXPECT_DOUBLE_EQ(sq.d2, 2.0);
  const Jet2 ch = at("cosh(u)", 0.0);
  EXPECT_DOUBLE_EQ(ch.val, 1.0);
  EXPECT_DOUBLE_EQ(ch.d1, 0.0);
  EXPECT_DOUBLE_EQ(ch.d2, 1.0);
  const Jet2 s = at("sqrt(-u^2+2*u)", 1.0);
  EXPECT_NEAR(s.val, 1.0, 1e-15);
  EXPECT_NEAR(s.d1, 0.0, 1e-15);
  EXPECT_NEAR(s.d2, -1.0, 1e-15);
}

TEST(EvalJet, ConstantsResolvedAtEvaluation) {
  const Expr e = parse("a*u^2+b", ConstantNames{"a", "b"});
  EXPECT_DOUBLE_EQ(eval_jet(e, 2.0, {{"a", 1.0}, {"b", 0.0}}).val, 4.0);
  EXPECT_DOUBLE_EQ(eval_jet(e, 2.0, {{"a", 3.0}, {"b", 1.0}}).val, 13.0);
  EXPECT_DOUBLE_EQ(eval_jet(e, 2.0, {{"a", 3.0}, {"b", 1.0}}).d2, 6.0);
}

TEST(EvalJet, DomainErrorsCarryU) {
  for (const auto& [text, u] : std::vector<std::pair<std::string, double>>{
           {"sqrt(u)", -1.0}, {"ln(u)", 0.0}, {"1/u", 0.0}, {"abs(u)", 0.0}, {"u^-1", 0.0},
           {"u^0.5", -2.0}, {"exp(u)", 1000.0}}) {
    try {
      at(text, u);
      FAIL() << text;
    } catch (const DomainError& e) {
      EXPECT_EQ(e.code(), ErrorCode::DomainError);
      EXPECT_EQ(e.u(), u) << text;
    }
  }
}

TEST(EvalJet, AbsUsesSign) {
  const Jet2 j = at("abs(u^3)", -2.0);
  EXPECT_DOUBLE_EQ(j.val, 8.0);
  EXPECT_DOUBLE_EQ(j.d1, -12.0);
  EXPECT_DOUBLE_EQ(j.d2, 12.0);
}

// Every grammar function checked against central differences.
TEST(EvalJet, FunctionsMatchCentralDifferences) {
  const double h = 1e-4;
  for (const std::string fn : {"sqrt", "sin", "cos", "sinh", "cosh", "exp", "ln", "abs"}) {
    const Expr e = parse(fn + "(u^2/3+0.5)");
    for (double u = -1.5; u <= 1.5; u += 0.25) {
      const Jet2 j = eval_jet(e, u, {});
      const double fp = eval_jet(e, u + h, {}).val, fm = eval_jet(e, u - h, {}).val;
      EXPECT_NEAR(j.d1, (fp - fm) / (2 * h), 1e-6 * (1 + std::abs(j.d1))) << fn << " u=" << u;
      EXPECT_NEAR(j.d2, (fp - 2 * j.val + fm) / (h * h), 1e-6 * (1 + std::abs(j.d2)))
          << fn << " u=" << u;
    }
  }
}

TEST(EvalJet, RandomExpressionsMatchExtrapolatedDifferences) {
  fixtures::RandomExpr gen(2024);
  const ConstantMap k{{"a", 0.7}, {"b", -1.3}};
  const double tol = 1e-6;
  int checked = 0, unresolved = 0, attempts = 0;
  while (checked < 1000 && attempts < 20000) {
    ++attempts;
    const std::string text = gen();
    const double u = gen.uniform(-2.0, 2.0);
    Jet2 j;
    fixtures::FdReference ref;
    try {
      const Expr e = parse(text, names_of(k));
      j = eval_jet(e, u, k);
      ref = fixtures::fd_reference([&](double x) { return eval_jet(e, x, k).val; }, u, tol);
    } catch (const DomainError&) {
      continue;
    }
    if (!ref.resolved) {
      ++unresolved;
      continue;
    }
    ++checked;
    EXPECT_NEAR(j.d1, ref.d1, tol * (1 + std::abs(j.d1))) << text << " u=" << u;
    EXPECT_NEAR(j.d2, ref.d2, tol * (1 + std::abs(j.d2))) << text << " u=" << u;
  }
  EXPECT_EQ(checked, 1000);
  EXPECT_LT(unresolved, checked / 5);
}

TEST(Parse, PrintParseIdempotent) {
  fixtures::RandomExpr gen(99);
  const ConstantNames names{"a", "b"};
  for (int i = 0; i < 500; ++i) {
    const std::string text = gen();
    const Expr e = parse(text, names);
    const Expr again = parse(e.to_string(), names);
    EXPECT_EQ(e, again) << text;
    EXPECT_EQ(e.to_string(), again.to_string());
  }
}

TEST(ProfileFunction, FromText) {
  const auto r = ProfileFunction::from_text("a*cosh(u)", {{"a", 2.0}}, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(r(0.0).val, 2.0);
  EXPECT_DOUBLE_EQ(r(0.0).d2, 2.0);
  EXPECT_EQ(r.domain(), (Interval{0.0, 1.0}));
}
