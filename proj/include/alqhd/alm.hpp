#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alqhd/errors.hpp"
#include "alqhd/expr.hpp"
#include "alqhd/zoom.hpp"

namespace alqhd {

/// Outer-loop parameters of the augmented-Lagrangian method.
struct AlmConfig {
  double rho0 = 1.0;
  double gamma = 2.0;
  double rho_max = 1e9;
  std::size_t max_iterations = 15;
  double constraint_tol = 1e-9;
  /// Penalty grows when violation fails to drop below this fraction of the
  /// previous one.
  double decrease_ratio = 0.25;
};

/// Multipliers and penalty weight after k outer iterations.
struct AlmState {
  std::vector<double> lambda_eq;
  std::vector<double> lambda_ineq;
  double rho = 1.0;
  std::size_t k = 0;

  static AlmState initial(const ConstraintSet& cs, const AlmConfig& cfg) {
    return AlmState{std::vector<double>(cs.equality.size(), 0.0),
                    std::vector<double>(cs.inequality.size(), 0.0), cfg.rho0, 0};
  }
};

/// Max over |h_i(x)| and positive parts of g_i(x); zero when there are no
/// constraints.
inline double max_violation(const ConstraintSet& cs, std::span<const double> x) {
  double v = 0.0;
  for (const ObjectiveFn& h : cs.equality) v = std::max(v, std::fabs(h(x)));
  for (const ObjectiveFn& g : cs.inequality) v = std::max(v, std::max(0.0, g(x)));
  return v;
}

/// The augmented Lagrangian
///
///   L(x) = f(x) + sum_i lambda_i h_i(x) + (rho/2) sum_i h_i(x)^2
///        + sum_i (1/(2 rho)) [ max(0, mu_i + rho g_i(x))^2 - mu_i^2 ]
///
/// as a plain objective. With an empty constraint set f itself is returned,
/// structured form included.
inline ObjectiveFn augmented_lagrangian(const ObjectiveFn& f, const ConstraintSet& cs,
                                        const AlmState& state) {
  if (cs.empty()) return f;
  if (state.lambda_eq.size() != cs.equality.size() ||
      state.lambda_ineq.size() != cs.inequality.size())
    throw DimensionMismatchError("augmented_lagrangian: multiplier sizes do not match constraints");
  if (!(state.rho > 0.0))
    throw std::invalid_argument("augmented_lagrangian: penalty weight must be positive");

  ObjectiveFn L;
  L.dim = f.dim;
  L.fn = [f, cs, state](std::span<const double> x) {
    double v = f(x);
    for (std::size_t i = 0; i < cs.equality.size(); ++i) {
      const double h = cs.equality[i](x);
      v += state.lambda_eq[i] * h + 0.5 * state.rho * h * h;
    }
    for (std::size_t i = 0; i < cs.inequality.size(); ++i) {
      const double g = cs.inequality[i](x);
      const double m = std::max(0.0, state.lambda_ineq[i] + state.rho * g);
      v += (m * m - state.lambda_ineq[i] * state.lambda_ineq[i]) / (2.0 * state.rho);
    }
    return v;
  };
  return L;
}

/// First-order multiplier update at the subproblem solution x:
/// lambda += rho h(x); mu = max(0, mu + rho g(x)).
inline AlmState update_multipliers(AlmState state, std::span<const double> x,
                                   const ConstraintSet& cs) {
  for (std::size_t i = 0; i < cs.equality.size(); ++i)
    state.lambda_eq[i] += state.rho * cs.equality[i](x);
  for (std::size_t i = 0; i < cs.inequality.size(); ++i)
    state.lambda_ineq[i] = std::max(0.0, state.lambda_ineq[i] + state.rho * cs.inequality[i](x));
  state.k += 1;
  return state;
}

/// Penalty growth rule: rho <- min(gamma rho, rho_max) only when the new
/// violation failed to shrink below decrease_ratio * previous violation.
/// A zero violation never grows the penalty.
inline AlmState update_penalty(AlmState state, double violation, double prev_violation,
                               const AlmConfig& cfg) {
  if (violation > cfg.decrease_ratio * prev_violation)
    state.rho = std::min(cfg.gamma * state.rho, cfg.rho_max);
  return state;
}

struct AlmIteration {
  std::vector<double> x;
  double objective = 0.0;   // true objective f(x)
  double violation = 0.0;   // max constraint violation at x
  double rho = 0.0;         // penalty weight used by this subproblem
  std::size_t zoom_levels = 0;
};

struct AlmReport {
  std::vector<double> x;
  double objective = 0.0;
  double violation = 0.0;
  std::size_t iterations = 0;
  double rho_final = 0.0;
  std::vector<AlmIteration> history;
};

/// Full outer loop: each iteration zoom-refines the current augmented
/// Lagrangian over the original box, reads off the subproblem minimizer,
/// updates multipliers and penalty, and stops once the violation tolerance
/// is met or the iteration budget runs out.
///
/// The reported point is the best one seen across all iterations, ranked by
/// feasibility first (violation <= constraint_tol), then objective. With no
/// constraints this is a single zoom refinement. Throws NoFeasiblePointError
/// if no iterate ever reached the tolerance.
inline AlmReport solve(const ObjectiveFn& f, const ConstraintSet& cs, const DomainBox& box,
                       const ZoomConfig& zoom, const AlmConfig& alm, const Schedule& schedule) {
  AlmState state = AlmState::initial(cs, alm);
  AlmReport report;
  double prev_violation = std::numeric_limits<double>::infinity();
  bool have_best = false, best_feasible = false;

  for (std::size_t k = 0; k < alm.max_iterations; ++k) {
    ObjectiveFn L = augmented_lagrangian(f, cs, state);
    ZoomTrace trace = refine(L, box, zoom, schedule);
    const std::vector<double>& x = trace.best.position;
    const double fx = f(x);
    const double viol = max_violation(cs, x);
    report.history.push_back(AlmIteration{x, fx, viol, state.rho, trace.levels.size()});

    const bool feasible = viol <= alm.constraint_tol;
    const bool better = !have_best ||
                        (feasible && !best_feasible) ||
                        (feasible == best_feasible &&
                         (feasible ? fx < report.objective : viol < report.violation));
    if (better) {
      report.x = x;
      report.objective = fx;
      report.violation = viol;
      have_best = true;
      best_feasible = feasible;
    }

    state = update_multipliers(std::move(state), x, cs);
    state = update_penalty(std::move(state), viol, prev_violation, alm);
    prev_violation = viol;
    report.iterations = k + 1;
    if (feasible) break;
  }

  report.rho_final = state.rho;
  if (!best_feasible)
    throw NoFeasiblePointError("alm::solve: no iterate met the constraint tolerance; best violation " +
                               std::to_string(report.violation));
  return report;
}

}  // namespace alqhd
