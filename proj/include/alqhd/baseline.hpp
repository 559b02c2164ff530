#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "alqhd/alm.hpp"
#include "alqhd/expr.hpp"
#include "alqhd/grid.hpp"
#include "alqhd/rng.hpp"

namespace alqhd {

struct LocalConfig {
  std::size_t max_iterations = 500;
  double grad_tol = 1e-6;
  double fd_rel_step = 1e-6;
};

struct LocalResult {
  std::vector<double> x;
  double objective = 0.0;
  double max_violation = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

namespace detail {

inline std::vector<double> clip_to_box(std::vector<double> x, const DomainBox& box) {
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], box.lower[j], box.upper[j]);
  return x;
}

/// Central finite-difference gradient with a relative step.
inline std::vector<double> fd_gradient(const ObjectiveFn& f, std::vector<double>& x,
                                       double rel_step) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = rel_step * std::max(1.0, std::fabs(x[j]));
    const double xj = x[j];
    x[j] = xj + h;
    const double fp = f(x);
    x[j] = xj - h;
    const double fm = f(x);
    x[j] = xj;
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Quasi-Newton descent inside a box: BFGS-style inverse-Hessian updates,
/// backtracking line search, bound handling by projection. Components of the
/// gradient pointing out of an active bound are zeroed for the stopping test.
inline LocalResult minimize_in_box(const ObjectiveFn& f, std::vector<double> x,
                                   const DomainBox& box, const LocalConfig& cfg) {
  const std::size_t d = x.size();
  x = clip_to_box(std::move(x), box);
  double fx = f(x);

  std::vector<double> H(d * d, 0.0);  // inverse-Hessian approximation
  auto reset_h = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t j = 0; j < d; ++j) H[j * d + j] = 1.0;
  };
  reset_h();

  std::vector<double> g = fd_gradient(f, x, cfg.fd_rel_step);
  LocalResult out;
  out.converged = false;

  std::size_t iter = 0;
  for (; iter < cfg.max_iterations; ++iter) {
    // projected gradient for the stationarity test
    double pg_norm_sq = 0.0;
    std::vector<double> pg(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double eps = 1e-12 * std::max(1.0, std::fabs(x[j]));
      const bool at_lo = x[j] <= box.lower[j] + eps && g[j] > 0.0;
      const bool at_hi = x[j] >= box.upper[j] - eps && g[j] < 0.0;
      pg[j] = (at_lo || at_hi) ? 0.0 : g[j];
      pg_norm_sq += pg[j] * pg[j];
    }
    if (std::sqrt(pg_norm_sq) <= cfg.grad_tol) {
      out.converged = true;
      break;
    }

    // direction from the inverse-Hessian model; fall back to steepest descent
    std::vector<double> dir(d, 0.0);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) dir[r] -= H[r * d + c] * pg[c];
    double slope = 0.0;
    for (std::size_t j = 0; j < d; ++j) slope += dir[j] * pg[j];
    if (!(slope < 0.0)) {
      reset_h();
      for (std::size_t j = 0; j < d; ++j) dir[j] = -pg[j];
      slope = -pg_norm_sq;
    }

    // backtracking with projection
    double alpha = 1.0;
    std::vector<double> x_new;
    double f_new = fx;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> trial(d);
      for (std::size_t j = 0; j < d; ++j) trial[j] = x[j] + alpha * dir[j];
      trial = clip_to_box(std::move(trial), box);
      const double ft = f(trial);
      // Armijo, with a plain-decrease fallback once steps are tiny (keeps
      // progress on nonsmooth objectives where the model slope is unreliable)
      if (ft <= fx + 1e-4 * alpha * slope || (alpha < 1e-8 && ft < fx)) {
        x_new = std::move(trial);
        f_new = ft;
        accepted = ft < fx;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // no progress at machine scale

    std::vector<double> g_new = fd_gradient(f, x_new, cfg.fd_rel_step);

    // BFGS inverse update with curvature guard
    std::vector<double> s(d), y(d);
    double sy = 0.0, s_norm = 0.0, y_norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      s[j] = x_new[j] - x[j];
      y[j] = g_new[j] - g[j];
      sy += s[j] * y[j];
      s_norm += s[j] * s[j];
      y_norm += y[j] * y[j];
    }
    if (sy > 1e-12 * std::sqrt(s_norm * y_norm)) {
      // H <- (I - s y^T / sy) H (I - y s^T / sy) + s s^T / sy
      std::vector<double> hy(d, 0.0);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) hy[r] += H[r * d + c] * y[c];
      double yhy = 0.0;
      for (std::size_t j = 0; j < d; ++j) yhy += y[j] * hy[j];
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          H[r * d + c] += ((sy + yhy) * s[r] * s[c]) / (sy * sy) -
                          (hy[r] * s[c] + s[r] * hy[c]) / sy;
    } else {
      reset_h();
    }

    x = std::move(x_new);
    fx = f_new;
    g = std::move(g_new);
  }

  out.x = std::move(x);
  out.objective = fx;
  out.iterations = iter;
  return out;
}

}  // namespace detail

/// Deterministic local solve. Unconstrained problems run the box-projected
/// quasi-Newton directly; constrained ones wrap it in a classical
/// augmented-Lagrangian loop (no simulation involved). `converged` requires
/// stationarity and, when constraints exist, violation <= 1e-8.
inline LocalResult local_minimize(const ObjectiveFn& f, std::span<const double> x0,
                                  const DomainBox& box, const ConstraintSet& cs = {},
                                  const LocalConfig& cfg = {}) {
  if (x0.size() != f.dim)
    throw DimensionMismatchError("local_minimize: start dimension does not match objective");
  std::vector<double> x(x0.begin(), x0.end());

  if (cs.empty()) {
    LocalResult res = detail::minimize_in_box(f, std::move(x), box, cfg);
    res.max_violation = 0.0;
    res.objective = f(res.x);
    return res;
  }

  AlmConfig outer;
  outer.rho0 = 10.0;
  outer.gamma = 10.0;
  outer.rho_max = 1e12;
  outer.constraint_tol = 1e-10;
  AlmState state = AlmState::initial(cs, outer);

  LocalResult res;
  res.x = detail::clip_to_box(std::move(x), box);
  double prev_viol = std::numeric_limits<double>::infinity();
  std::size_t total_iters = 0;
  bool stationary = false;
  for (int round = 0; round < 25; ++round) {
    ObjectiveFn L = augmented_lagrangian(f, cs, state);
    LocalResult inner = detail::minimize_in_box(L, res.x, box, cfg);
    res.x = inner.x;
    total_iters += inner.iterations;
    stationary = inner.converged;
    const double viol = max_violation(cs, res.x);
    if (viol <= outer.constraint_tol && stationary) break;
    state = update_multipliers(std::move(state), res.x, cs);
    state = update_penalty(std::move(state), viol, prev_viol, outer);
    prev_viol = viol;
  }

  res.objective = f(res.x);
  res.max_violation = max_violation(cs, res.x);
  res.iterations = total_iters;
  res.converged = stationary && res.max_violation <= 1e-8;
  return res;
}

struct MultistartRow {
  std::size_t starts = 0;
  double objective = 0.0;
  std::vector<double> x;
  double max_violation = 0.0;
  bool feasible = false;
  std::size_t best_start = 0;
};

/// Seeded multistart around local_minimize. Start i draws its point from
/// counter stream (seed, i), so the first n starts are identical for every
/// budget containing them: results for nested budgets are nested. Ranking is
/// feasibility first, then objective, ties to the lower start index.
inline std::vector<MultistartRow> multistart(const ObjectiveFn& f, const ConstraintSet& cs,
                                             const DomainBox& box,
                                             std::span<const std::size_t> budgets,
                                             std::uint64_t seed, const LocalConfig& cfg = {}) {
  std::size_t max_budget = 0;
  for (std::size_t b : budgets) max_budget = std::max(max_budget, b);

  struct StartOutcome {
    double objective;
    double violation;
    bool feasible;
    std::vector<double> x;
  };
  std::vector<StartOutcome> outcomes;
  outcomes.reserve(max_budget);
  for (std::size_t i = 0; i < max_budget; ++i) {
    CounterRng rng(seed, i);
    std::vector<double> x0(f.dim);
    for (std::size_t j = 0; j < f.dim; ++j) x0[j] = rng.uniform(box.lower[j], box.upper[j]);
    LocalResult res = local_minimize(f, x0, box, cs, cfg);
    const double viol = cs.empty() ? 0.0 : max_violation(cs, res.x);  // re-verified directly
    outcomes.push_back(StartOutcome{res.objective, viol, viol <= 1e-8, std::move(res.x)});
  }

  std::vector<MultistartRow> rows;
  rows.reserve(budgets.size());
  for (std::size_t b : budgets) {
    MultistartRow row;
    row.starts = b;
    bool have = false;
    for (std::size_t i = 0; i < b && i < outcomes.size(); ++i) {
      const StartOutcome& o = outcomes[i];
      const bool better =
          !have ||
          (o.feasible && !row.feasible) ||
          (o.feasible == row.feasible &&
           (o.feasible ? o.objective < row.objective : o.violation < row.max_violation));
      if (better) {
        row.objective = o.objective;
        row.x = o.x;
        row.max_violation = o.violation;
        row.feasible = o.feasible;
        row.best_start = i;
        have = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace alqhd
