#include "alqhd/alm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "alqhd/rng.hpp"

using namespace alqhd;

namespace {

ObjectiveFn constant_fn(std::size_t dim, double v) {
  ObjectiveFn f;
  f.dim = dim;
  f.fn = [v](std::span<const double>) { return v; };
  return f;
}

ObjectiveFn affine1d(double a, double b) {  // a*x + b
  ObjectiveFn f;
  f.dim = 1;
  f.fn = [a, b](std::span<const double> x) { return a * x[0] + b; };
  return f;
}

TEST(AugmentedLagrangian, EmptyConstraintsReturnObjectiveUnchanged) {
  ObjectiveFn f;
  f.dim = 2;
  f.fn = [](std::span<const double> x) { return x[0] * x[0] + 3.0 * x[1]; };
  ConstraintSet cs;
  AlmState state = AlmState::initial(cs, AlmConfig{});
  ObjectiveFn L = augmented_lagrangian(f, cs, state);
  CounterRng rng(7u);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x = {rng.uniform(-4, 4), rng.uniform(-4, 4)};
    EXPECT_DOUBLE_EQ(L(x), f(x));
  }
}

TEST(AugmentedLagrangian, EqualityTermHandComputed) {
  //  f = 1, h(x) = x - 2, lambda = 0.7, rho = 4, at x = 3:
  //  L = 1 + 0.7 * 1 + 2 * 1 = 3.7
  ObjectiveFn f = constant_fn(1, 1.0);
  ConstraintSet cs;
  cs.equality.push_back(affine1d(1.0, -2.0));
  AlmState state{{0.7}, {}, 4.0, 0};
  ObjectiveFn L = augmented_lagrangian(f, cs, state);
  std::vector<double> x = {3.0};
  EXPECT_NEAR(L(x), 3.7, 1e-15);
}

TEST(AugmentedLagrangian, InequalityTermHandComputed) {
  //  f = 0, g(x) = 0.3 constant, mu = 0.4, rho = 2:
  //  (1/(2*2)) [ max(0, 0.4 + 2*0.3)^2 - 0.4^2 ] = (1 - 0.16)/4 = 0.21
  ObjectiveFn f = constant_fn(1, 0.0);
  ConstraintSet cs;
  cs.inequality.push_back(constant_fn(1, 0.3));
  AlmState state{{}, {0.4}, 2.0, 0};
  ObjectiveFn L = augmented_lagrangian(f, cs, state);
  std::vector<double> x = {0.0};
  EXPECT_NEAR(L(x), 0.21, 1e-15);

  //  inactive inequality far inside the feasible region contributes -mu^2/(2 rho)
  ConstraintSet cs2;
  cs2.inequality.push_back(constant_fn(1, -5.0));
  ObjectiveFn L2 = augmented_lagrangian(f, cs2, state);
  EXPECT_NEAR(L2(x), -0.4 * 0.4 / 4.0, 1e-15);
}

TEST(UpdateMultipliers, FirstOrderRules) {
  ConstraintSet cs;
  cs.equality.push_back(affine1d(0.0, 0.5));    // h = 0.5 everywhere
  cs.inequality.push_back(affine1d(0.0, -0.5)); // g = -0.5 everywhere
  AlmState state{{1.0}, {0.2}, 4.0, 3};
  std::vector<double> x = {0.0};
  AlmState next = update_multipliers(state, x, cs);
  EXPECT_DOUBLE_EQ(next.lambda_eq[0], 3.0);    // 1 + 4 * 0.5
  EXPECT_DOUBLE_EQ(next.lambda_ineq[0], 0.0);  // max(0, 0.2 - 2.0)
  EXPECT_EQ(next.k, 4u);
}

TEST(UpdatePenalty, GrowsOnlyOnInsufficientDecrease) {
  AlmConfig cfg;  // gamma = 2, ratio = 0.25, rho_max = 1e9
  AlmState s{{}, {}, 8.0, 1};

  AlmState grown = update_penalty(s, 0.3, 1.0, cfg);
  EXPECT_DOUBLE_EQ(grown.rho, 16.0);  // 0.3 > 0.25

  AlmState kept = update_penalty(s, 0.2, 1.0, cfg);
  EXPECT_DOUBLE_EQ(kept.rho, 8.0);  // 0.2 <= 0.25

  AlmState zero = update_penalty(s, 0.0, 1.0, cfg);
  EXPECT_DOUBLE_EQ(zero.rho, 8.0);  // zero violation never grows rho

  AlmState capped{{}, {}, 0.75e9, 1};
  capped = update_penalty(capped, 1.0, 1.0, cfg);
  EXPECT_DOUBLE_EQ(capped.rho, 1e9);  // clamped at rho_max
}

TEST(MaxViolation, MixedConstraints) {
  ConstraintSet cs;
  cs.equality.push_back(affine1d(0.0, -0.2));  // |h| = 0.2
  cs.inequality.push_back(affine1d(0.0, -3.0));  // satisfied, contributes 0
  cs.inequality.push_back(affine1d(0.0, 0.15));  // violated by 0.15
  std::vector<double> x = {0.0};
  EXPECT_DOUBLE_EQ(max_violation(cs, x), 0.2);
  EXPECT_DOUBLE_EQ(max_violation(ConstraintSet{}, x), 0.0);
}

TEST(Solve, UnconstrainedReducesToSingleRefinement) {
  ObjectiveFn f;
  f.dim = 1;
  f.fn = [](std::span<const double> x) { return (x[0] - 1.0) * (x[0] - 1.0); };
  Schedule sch;
  sch.steps = 2000;
  ZoomConfig zoom = ZoomConfig::uniform(2, 16, 1);
  AlmConfig alm;
  AlmReport rep = solve(f, ConstraintSet{}, DomainBox::cube(1, -4.0, 4.0), zoom, alm, sch);
  EXPECT_EQ(rep.iterations, 1u);
  EXPECT_DOUBLE_EQ(rep.violation, 0.0);
  EXPECT_LE(std::fabs(rep.x[0] - 1.0), 0.2);
  EXPECT_DOUBLE_EQ(rep.rho_final, alm.rho0);
}

TEST(Solve, EqualityConstrainedQuadratic) {
  // min (x-2)^2  s.t.  x = 1  on [-4, 4]; multipliers must pull the
  // subproblem minimizer from 2 toward 1
  ObjectiveFn f;
  f.dim = 1;
  f.fn = [](std::span<const double> x) { return (x[0] - 2.0) * (x[0] - 2.0); };
  ConstraintSet cs;
  cs.equality.push_back(affine1d(1.0, -1.0));

  Schedule sch;
  sch.steps = 2000;
  ZoomConfig zoom = ZoomConfig::uniform(3, 32, 1);
  AlmConfig alm;
  alm.constraint_tol = 0.05;

  AlmReport rep = solve(f, cs, DomainBox::cube(1, -4.0, 4.0), zoom, alm, sch);
  EXPECT_LE(rep.violation, 0.05);
  EXPECT_NEAR(rep.x[0], 1.0, 0.12);
  EXPECT_LE(rep.iterations, alm.max_iterations);
  // violations across history shrink overall (first vs last recorded)
  ASSERT_GE(rep.history.size(), 2u);
  EXPECT_LT(rep.history.back().violation, rep.history.front().violation);
}

TEST(Solve, ThrowsWhenNoFeasiblePointExists) {
  ObjectiveFn f;
  f.dim = 1;
  f.fn = [](std::span<const double> x) { return x[0] * x[0]; };
  ConstraintSet cs;
  cs.equality.push_back(affine1d(1.0, -10.0));  // x = 10 unreachable in [-1, 1]

  Schedule sch;
  sch.steps = 200;
  ZoomConfig zoom = ZoomConfig::uniform(1, 16, 1);
  AlmConfig alm;
  alm.max_iterations = 5;
  EXPECT_THROW(solve(f, cs, DomainBox::cube(1, -1.0, 1.0), zoom, alm, sch), NoFeasiblePointError);
}

TEST(Solve, DeterministicRerun) {
  ObjectiveFn f;
  f.dim = 1;
  f.fn = [](std::span<const double> x) { return std::cos(3.0 * x[0]) + 0.1 * x[0] * x[0]; };
  ConstraintSet cs;
  cs.inequality.push_back(affine1d(-1.0, 0.25));  // x >= 0.25

  Schedule sch;
  sch.steps = 1000;
  ZoomConfig zoom = ZoomConfig::uniform(2, 16, 1);
  AlmConfig alm;
  alm.constraint_tol = 0.05;

  AlmReport a = solve(f, cs, DomainBox::cube(1, -4.0, 4.0), zoom, alm, sch);
  AlmReport b = solve(f, cs, DomainBox::cube(1, -4.0, 4.0), zoom, alm, sch);
  EXPECT_EQ(a.x[0], b.x[0]);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.violation, b.violation);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.rho_final, b.rho_final);
}

}  // namespace
