#include "alqhd/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "alqhd/rng.hpp"

using namespace alqhd;

namespace {

TEST(Factor, EvaluatesClosedVocabulary) {
  EXPECT_DOUBLE_EQ(Factor::power(0)(3.7), 1.0);
  EXPECT_DOUBLE_EQ(Factor::power(3)(2.0), 8.0);
  EXPECT_DOUBLE_EQ(Factor::cosine(2.0, 1.0)(0.25), std::cos(1.5));
  EXPECT_DOUBLE_EQ(Factor::sine(3.0)(0.5), std::sin(1.5));
  EXPECT_DOUBLE_EQ(Factor::exp_affine(1.0, -2.0)(2.0), 1.0);
  EXPECT_DOUBLE_EQ(Factor::constant(4.25)(123.0), 4.25);
}

TEST(SeparableExpr, EvaluateMatchesHandComputation) {
  // 2 + 3 x0^2 cos(x1) on x = (2, pi)
  SeparableExpr e(2);
  e.add_constant(2.0);
  e.add_term(3.0, {{0, Factor::power(2)}, {1, Factor::cosine(1.0)}});
  std::vector<double> x = {2.0, std::numbers::pi};
  EXPECT_NEAR(evaluate(e, x), 2.0 + 3.0 * 4.0 * std::cos(std::numbers::pi), 1e-14);
}

TEST(SeparableExpr, RejectsBadTermsAndPoints) {
  SeparableExpr e(2);
  EXPECT_THROW(e.add_term(1.0, {{1, Factor::power(1)}, {0, Factor::power(1)}}),
               DimensionMismatchError);
  EXPECT_THROW(e.add_term(1.0, {{0, Factor::power(1)}, {0, Factor::power(2)}}),
               DimensionMismatchError);
  EXPECT_THROW(e.add_term(1.0, {{2, Factor::power(1)}}), DimensionMismatchError);
  e.add_constant(1.0);
  std::vector<double> wrong = {1.0, 2.0, 3.0};
  EXPECT_THROW(evaluate(e, wrong), DimensionMismatchError);
}

// A random expression in the closed vocabulary.
SeparableExpr random_expr(CounterRng& rng, std::size_t dim, std::size_t n_terms) {
  SeparableExpr e(dim);
  for (std::size_t t = 0; t < n_terms; ++t) {
    std::vector<TermFactor> factors;
    for (std::size_t v = 0; v < dim; ++v) {
      if (rng.below(3) == 0) continue;  // leave this variable out of the term
      // same-variable products must stay within one product rule, so the
      // factor class is pinned per variable
      switch (v % 3) {
        case 0:
          factors.push_back({v, Factor::power(static_cast<int>(rng.below(3)) + 1)});
          break;
        case 1:
          if (rng.below(2) == 0)
            factors.push_back({v, Factor::cosine(rng.uniform(-3, 3), rng.uniform(-1, 1))});
          else
            factors.push_back({v, Factor::sine(rng.uniform(-3, 3), rng.uniform(-1, 1))});
          break;
        default:
          factors.push_back({v, Factor::exp_affine(rng.uniform(-0.5, 0.5), rng.uniform(-1, 1))});
          break;
      }
    }
    e.add_term(rng.uniform(-2.0, 2.0), std::move(factors));
  }
  if (e.terms.empty()) e.add_constant(1.0);
  return e;
}

TEST(SeparableExpr, MultiplyIsPointwiseProduct) {
  CounterRng rng(17u);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t dim = 1 + rng.below(3);
    SeparableExpr a = random_expr(rng, dim, 1 + rng.below(3));
    SeparableExpr b = random_expr(rng, dim, 1 + rng.below(3));
    SeparableExpr ab = multiply(a, b, 8);
    for (int pt = 0; pt < 10; ++pt) {
      std::vector<double> x(dim);
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      const double want = evaluate(a, x) * evaluate(b, x);
      EXPECT_NEAR(evaluate(ab, x), want, 1e-9 * (1.0 + std::fabs(want)));
    }
  }
}

TEST(SeparableExpr, TrigSquareCollapsesToDoubleAngle) {
  // cos(t)^2 = 1/2 + 1/2 cos(2t): the square must stay inside the vocabulary
  SeparableExpr c(1);
  c.add_term(1.0, {{0, Factor::cosine(1.0)}});
  SeparableExpr sq = multiply(c, c, 4);
  collect_terms(sq);
  ASSERT_EQ(sq.terms.size(), 2u);
  for (double t : {0.0, 0.3, 1.7, -2.2})
    EXPECT_NEAR(evaluate(sq, std::vector<double>{t}), std::cos(t) * std::cos(t), 1e-14);
}

TEST(SeparableExpr, MultiplyEnforcesWidthCap) {
  SeparableExpr a(4);
  a.add_term(1.0, {{0, Factor::power(1)}, {1, Factor::power(1)}});
  SeparableExpr b(4);
  b.add_term(1.0, {{2, Factor::power(1)}, {3, Factor::power(1)}});
  EXPECT_NO_THROW(multiply(a, b, 4));
  EXPECT_THROW(multiply(a, b, 3), TermTooWideError);
}

TEST(SeparableExpr, CollectTermsMergesDuplicates) {
  SeparableExpr e(1);
  e.add_term(2.0, {{0, Factor::power(2)}});
  e.add_term(3.0, {{0, Factor::power(2)}});
  e.add_term(-5.0, {{0, Factor::power(1)}});
  e.add_term(5.0, {{0, Factor::power(1)}});  // cancels exactly
  collect_terms(e);
  ASSERT_EQ(e.terms.size(), 1u);
  EXPECT_DOUBLE_EQ(e.terms[0].coeff, 5.0);
}

TEST(ObjectiveFn, DimensionCheckOnCall) {
  ObjectiveFn f;
  f.dim = 2;
  f.fn = [](std::span<const double>) { return 0.0; };
  std::vector<double> x = {1.0};
  EXPECT_THROW(f(x), DimensionMismatchError);
}

}  // namespace
