#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "alqhd/errors.hpp"
#include "alqhd/expr.hpp"
#include "alqhd/fft.hpp"
#include "alqhd/grid.hpp"

namespace alqhd {

enum class ScheduleKind { QhdC };

/// Time-dependent coefficients of H(t) = a(t) K + b(t) V with K = -laplacian/2.
/// The QhdC pair is a(t) = (2/(s+t))^3, b(t) = 2 t^3; `s` keeps a(0) finite
/// and is small against total_time so the late schedule is unaffected.
struct Schedule {
  ScheduleKind kind = ScheduleKind::QhdC;
  double total_time = 10.0;
  std::int64_t steps = 50000;
  double s = 0.01;

  double kinetic(double t) const {
    const double u = 2.0 / (s + t);
    return u * u * u;
  }
  double potential(double t) const { return 2.0 * t * t * t; }
  double dt() const { return total_time / static_cast<double>(steps); }
};

namespace detail {

inline void require_power_of_two(const Grid& grid) {
  for (std::size_t r : grid.resolution)
    if (r == 0 || (r & (r - 1)) != 0)
      throw std::invalid_argument("grid resolution " + std::to_string(r) +
                                  " is not a power of two; the transform requires one");
}

/// Squared frequency magnitude |k|^2 per sample, row-major. Axis j carries
/// k = (2 pi / L_j) * m with m = 0..r/2 then m - r for the upper half.
inline std::vector<double> frequency_sq(const Grid& grid) {
  std::vector<std::vector<double>> axis_k2(grid.dim());
  for (std::size_t j = 0; j < grid.dim(); ++j) {
    const std::size_t r = grid.resolution[j];
    const double unit = 2.0 * std::numbers::pi / grid.box.width(j);
    axis_k2[j].resize(r);
    for (std::size_t m = 0; m < r; ++m) {
      const double f = (m <= r / 2) ? static_cast<double>(m)
                                    : static_cast<double>(m) - static_cast<double>(r);
      const double k = unit * f;
      axis_k2[j][m] = k * k;
    }
  }
  std::vector<double> k2(grid.size(), 0.0);
  for (std::size_t flat = 0; flat < k2.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t j = grid.dim(); j-- > 0;) {
      k2[flat] += axis_k2[j][rem % grid.resolution[j]];
      rem /= grid.resolution[j];
    }
  }
  return k2;
}

}  // namespace detail

/// Diagonal kinetic propagator in frequency space: exp(-i dt_eff |k|^2 / 2).
inline std::vector<std::complex<double>> kinetic_phase(const Grid& grid, double dt_eff) {
  detail::require_power_of_two(grid);
  std::vector<double> k2 = detail::frequency_sq(grid);
  std::vector<std::complex<double>> phase(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    const double ang = -0.5 * dt_eff * k2[i];
    phase[i] = {std::cos(ang), std::sin(ang)};
  }
  return phase;
}

/// Diagonal potential propagator in position space: exp(-i dt_eff f(g)).
/// Throws NonFiniteObjectiveError if f is not finite anywhere on the grid.
inline std::vector<std::complex<double>> potential_phase(const Grid& grid, const ObjectiveFn& f,
                                                         double dt_eff) {
  std::vector<std::complex<double>> phase(grid.size());
  for (std::size_t flat = 0; flat < phase.size(); ++flat) {
    const double v = f(grid.position(grid.unflatten(flat)));
    if (!std::isfinite(v))
      throw NonFiniteObjectiveError("potential_phase: objective not finite at a grid sample");
    const double ang = -dt_eff * v;
    phase[flat] = {std::cos(ang), std::sin(ang)};
  }
  return phase;
}

struct Candidate {
  std::vector<std::size_t> index;
  std::vector<double> position;
  double value = 0.0;
};

struct SimResult {
  Wavefunction psi;
  Candidate best;
  double norm_drift = 0.0;
};

/// Split-step Fourier simulation of H(t) = a(t) K + b(t) V from the uniform
/// state. Each step samples the coefficients at the interval midpoint and
/// applies half potential / full kinetic / half potential:
///
///   psi <- e^{-i b(tm) dt/2 V} F^{-1} e^{-i a(tm) dt |k|^2/2} F e^{-i b(tm) dt/2 V} psi
///
/// The candidate is the argmax sample of the final density with its objective
/// value. Norm drift beyond 1e-6 aborts with NormDriftError; drift is
/// reported either way so callers can assert tighter bounds.
inline SimResult evolve(const ObjectiveFn& f, const Grid& grid, const Schedule& schedule) {
  if (schedule.steps < 1) throw std::invalid_argument("evolve: schedule needs at least one step");
  if (f.dim != grid.dim())
    throw DimensionMismatchError("evolve: objective dimension does not match grid");
  detail::require_power_of_two(grid);

  const std::size_t n = grid.size();

  // objective values per sample, fixed for the whole evolution
  std::vector<double> v(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    v[flat] = f(grid.position(grid.unflatten(flat)));
    if (!std::isfinite(v[flat]))
      throw NonFiniteObjectiveError("evolve: objective not finite at a grid sample");
  }
  const std::vector<double> k2 = detail::frequency_sq(grid);

  std::vector<detail::Radix2Plan> plans;
  plans.reserve(grid.dim());
  for (std::size_t r : grid.resolution) plans.emplace_back(r);

  Wavefunction state = uniform_state(grid);
  std::complex<double>* a = state.amp.data();
  std::vector<std::complex<double>> phase_v(n), scratch;

  const double dt = schedule.dt();
  for (std::int64_t step = 0; step < schedule.steps; ++step) {
    const double t_mid = (static_cast<double>(step) + 0.5) * dt;
    const double theta_v = 0.5 * dt * schedule.potential(t_mid);
    const double theta_k = dt * schedule.kinetic(t_mid);

    for (std::size_t i = 0; i < n; ++i) {
      const double ang = -theta_v * v[i];
      phase_v[i] = {std::cos(ang), std::sin(ang)};
    }

    for (std::size_t i = 0; i < n; ++i) a[i] *= phase_v[i];
    for (std::size_t axis = 0; axis < grid.dim(); ++axis)
      detail::transform_axis(a, grid.resolution, axis, plans[axis], false, scratch);
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = -0.5 * theta_k * k2[i];
      a[i] *= std::complex<double>{std::cos(ang), std::sin(ang)};
    }
    for (std::size_t axis = 0; axis < grid.dim(); ++axis)
      detail::transform_axis(a, grid.resolution, axis, plans[axis], true, scratch);
    for (std::size_t i = 0; i < n; ++i) a[i] *= phase_v[i];
  }

  const double drift = std::fabs(norm_sq(state) - 1.0);
  if (drift > 1e-6)
    throw NormDriftError("evolve: norm drift " + std::to_string(drift) + " exceeds 1e-6");

  std::vector<double> density = probability_density(state);
  GridPoint peak = argmax_point(density, grid);
  Candidate best{peak.index, peak.position, f(peak.position)};
  return SimResult{std::move(state), std::move(best), drift};
}

}  // namespace alqhd
