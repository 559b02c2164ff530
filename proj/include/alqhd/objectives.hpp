#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "alqhd/expr.hpp"
#include "alqhd/grid.hpp"

namespace alqhd {

/// Default planted optimum of the shifted Ackley benchmark.
inline const std::vector<double> kAckleyShift = {0.962, 0.370};

/// Shifted Ackley function, global minimum f(shift) = 0.
///
///   f(x) = -20 exp(-0.2 sqrt(mean(z_i^2))) - exp(mean(cos(2 pi z_i))) + 20 + e
///
/// with z = x - shift. Not separable (the sqrt couples coordinates), so no
/// structured form is attached.
inline ObjectiveFn ackley_shifted(std::vector<double> shift = kAckleyShift) {
  ObjectiveFn f;
  f.dim = shift.size();
  f.fn = [shift = std::move(shift)](std::span<const double> x) {
    const double d = static_cast<double>(shift.size());
    double sq = 0.0, c = 0.0;
    for (std::size_t j = 0; j < shift.size(); ++j) {
      const double z = x[j] - shift[j];
      sq += z * z;
      c += std::cos(2.0 * std::numbers::pi * z);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(c / d) + 20.0 +
           std::numbers::e;
  };
  return f;
}

/// Frequency-scaled Rastrigin with scale alpha per coordinate:
///
///   f(x) = 10 d + sum_i [ (alpha x_i)^2 - 10 cos(2 pi alpha x_i) ]
///
/// Separable by construction; the structured form feeds the encoder.
inline ObjectiveFn rastrigin_scaled(std::size_t dim, double alpha = 3.0) {
  SeparableExpr e(dim);
  e.add_constant(10.0 * static_cast<double>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    e.add_term(alpha * alpha, {{j, Factor::power(2)}});
    e.add_term(-10.0, {{j, Factor::cosine(2.0 * std::numbers::pi * alpha)}});
  }
  return ObjectiveFn::from_expr(std::move(e));
}

/// Two curved inequality cuts for the d = 2 scaled-Rastrigin benchmark:
///
///   g1(x) = 0.5 + 0.020 (x1 - 0.5)^2 - x0 <= 0
///   g2(x) = 0.5 + 0.020 (x0 - 0.5)^2 - x1 <= 0
///
/// They remove every basin with a coordinate below ~0.5, leaving the basin
/// near (0.663, 0.663) as the best feasible one.
inline ConstraintSet rastrigin_curved_constraints(double curvature = 0.020) {
  auto cut = [curvature](std::size_t kept, std::size_t bent) {
    SeparableExpr e(2);
    // 0.5 + c (x_bent - 0.5)^2 - x_kept  =  (0.5 + 0.25 c) - c x_bent + c x_bent^2 - x_kept
    e.add_constant(0.5 + 0.25 * curvature);
    e.add_term(-curvature, {{bent, Factor::power(1)}});
    e.add_term(curvature, {{bent, Factor::power(2)}});
    e.add_term(-1.0, {{kept, Factor::power(1)}});
    collect_terms(e);
    return ObjectiveFn::from_expr(std::move(e));
  };
  ConstraintSet cs;
  cs.inequality.push_back(cut(0, 1));
  cs.inequality.push_back(cut(1, 0));
  return cs;
}

/// Shared search box of both benchmarks.
inline DomainBox benchmark_box(std::size_t dim) { return DomainBox::cube(dim, -5.0, 5.0); }

}  // namespace alqhd
