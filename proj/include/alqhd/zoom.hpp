#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alqhd/errors.hpp"
#include "alqhd/grid.hpp"
#include "alqhd/qhd.hpp"

namespace alqhd {

/// Zoom-loop parameters. `resolution` is reused at every level; `polish` is
/// an optional classical refinement of the final incumbent and stays off
/// unless a caller wires one in.
struct ZoomConfig {
  std::size_t levels = 1;
  double eta = 0.99;
  std::vector<std::size_t> resolution;
  std::function<Candidate(const ObjectiveFn&, const DomainBox&, const Candidate&)> polish;

  static ZoomConfig uniform(std::size_t levels, std::size_t res_per_axis, std::size_t dim,
                            double eta = 0.99) {
    return ZoomConfig{levels, eta, std::vector<std::size_t>(dim, res_per_axis), nullptr};
  }
};

/// Smallest index window around the marginal's argmax whose mass reaches
/// `eta`. Growth is greedy one cell at a time toward the side with more
/// mass; ties prefer the lower side, an exhausted side defers to the other.
inline std::pair<std::size_t, std::size_t> interval_from_marginal(std::span<const double> m,
                                                                  double eta) {
  if (m.empty()) throw DimensionMismatchError("interval_from_marginal: empty marginal");
  std::size_t lo = 0;
  for (std::size_t k = 1; k < m.size(); ++k)
    if (m[k] > m[lo]) lo = k;
  std::size_t hi = lo;
  double mass = m[lo];
  while (mass < eta && (lo > 0 || hi + 1 < m.size())) {
    const double left = lo > 0 ? m[lo - 1] : -std::numeric_limits<double>::infinity();
    const double right = hi + 1 < m.size() ? m[hi + 1] : -std::numeric_limits<double>::infinity();
    if (left >= right)
      mass += m[--lo];
    else
      mass += m[++hi];
  }
  return {lo, hi};
}

namespace detail {

/// Minimum admissible width of a zoom box on one axis: 64 machine epsilons
/// at the magnitude of the interval's center. Below that, cell coordinates
/// are no longer distinguishable in double precision.
inline double min_box_width(double center) {
  return 64.0 * (std::numeric_limits<double>::epsilon() * std::fabs(center) +
                 std::numeric_limits<double>::denorm_min());
}

/// Objective range (max - min) over the grid lattice, ignoring non-finite
/// samples; 0 when the lattice is flat.
inline double lattice_range(const ObjectiveFn& f, const Grid& grid) {
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const double v = f(grid.position(grid.unflatten(flat)));
    if (!std::isfinite(v)) continue;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  return vmin <= vmax ? vmax - vmin : 0.0;
}

/// Per-axis shrink applied to the level-1 box to form the reference frame
/// for deeper levels. A narrower frame amplifies the kinetic term (by the
/// inverse square of the factor), which keeps the state mobile long enough
/// to flush probability mass out of secondary basins and out of the spurious
/// wells the periodic wrap-around creates when a zoomed box cuts through a
/// basin; the potential keeps its level-1 variation, so late-time funneling
/// stays as strong as at level 1. The ground width this balance allows is
/// still far below one grid cell, so boxes keep shrinking geometrically.
inline constexpr double kDeepFrameShrink = 0.125;

/// Evolve on `grid`'s box expressed in the coordinates of `frame` (the
/// deep-level reference grid): the box is mapped affinely onto the frame's
/// domain and the objective is shifted to its lattice minimum and scaled so
/// its variation over the lattice matches `frame_range`. Evolving a
/// shrinking box directly would let the kinetic term (growing as 1/width^2)
/// dominate the shrinking potential variation, so the density would stop
/// localizing after a few levels; in the frame the balance is the same at
/// every depth. The shift is a global phase and does not affect the density;
/// the returned candidate is expressed in physical coordinates with the raw
/// objective.
inline SimResult evolve_in_frame(const ObjectiveFn& f, const Grid& grid, const Grid& frame,
                                 double frame_range, const Schedule& schedule) {
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const double v = f(grid.position(grid.unflatten(flat)));
    if (!std::isfinite(v))
      throw NonFiniteObjectiveError("refine: objective not finite at a grid sample");
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  double scale = (frame_range > 0.0 && vmax > vmin) ? frame_range / (vmax - vmin) : 1.0;
  if (!std::isfinite(scale) || scale <= 0.0) scale = 1.0;

  const DomainBox& inner = grid.box;
  const DomainBox& outer = frame.box;
  ObjectiveFn mapped;
  mapped.dim = f.dim;
  mapped.fn = [&f, &inner, &outer, vmin, scale](std::span<const double> u) {
    std::vector<double> x(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
      x[j] = inner.lower[j] + (u[j] - outer.lower[j]) * (inner.width(j) / outer.width(j));
    return scale * (f(x) - vmin);
  };
  SimResult sim = evolve(mapped, frame, schedule);
  sim.best.position = grid.position(sim.best.index);
  sim.best.value = f(sim.best.position);
  return sim;
}

}  // namespace detail

/// Next zoom box: per axis, the eta-mass index window of the marginal,
/// converted to coordinates and clipped to `outer`. Sample k owns its
/// nearest-point region [g_k - dx/2, g_k + dx/2]: when the final density
/// collapses onto a single sample, that sample only pins the minimizer to
/// within half a spacing either side, so the box must bracket the sample
/// symmetrically or risk excluding the minimizer for every later level.
/// Throws DegenerateBoxError once an axis collapses below the representable
/// minimum width.
inline DomainBox next_box(std::span<const double> density, const Grid& grid, double eta,
                          const DomainBox& outer) {
  if (outer.dim() != grid.dim())
    throw DimensionMismatchError("next_box: outer box dimension mismatch");
  std::vector<double> lo(grid.dim()), hi(grid.dim());
  for (std::size_t j = 0; j < grid.dim(); ++j) {
    const std::vector<double> m = marginal(density, grid, j);
    const auto [l, u] = interval_from_marginal(m, eta);
    // full-cover windows snap to the exact box bounds
    lo[j] = (l == 0) ? grid.box.lower[j] : grid.coord(j, l) - 0.5 * grid.spacing[j];
    hi[j] = (u + 1 == grid.resolution[j]) ? grid.box.upper[j]
                                          : grid.coord(j, u) + 0.5 * grid.spacing[j];
    lo[j] = std::max(lo[j], outer.lower[j]);
    hi[j] = std::min(hi[j], outer.upper[j]);
    const double width = hi[j] - lo[j];
    if (!(width > detail::min_box_width(0.5 * (lo[j] + hi[j]))))
      throw DegenerateBoxError("next_box: axis " + std::to_string(j) +
                               " collapsed to width " + std::to_string(width));
  }
  return DomainBox(std::move(lo), std::move(hi));
}

struct ZoomLevel {
  DomainBox box;
  Candidate candidate;
  double norm_drift = 0.0;
  double wall_time_s = 0.0;
};

struct ZoomTrace {
  std::vector<ZoomLevel> levels;
  Candidate best;
  std::size_t best_level = 0;  // 1-based level that produced `best`

  /// Incumbent after the first `z` levels (clamped to what actually ran).
  const Candidate& best_by_level(std::size_t z) const {
    std::size_t cap = std::min(z, levels.size());
    std::size_t arg = 0;
    for (std::size_t i = 1; i < cap; ++i)
      if (levels[i].candidate.value < levels[arg].candidate.value) arg = i;
    return levels[arg].candidate;
  }
};

/// Adaptive-zoom refinement: evolve on the current box, shrink the box around
/// the density mass, repeat. Boxes are nested; the returned best candidate is
/// the minimum-objective one across levels (earlier level wins ties), so the
/// incumbent never degrades when a later level fails to improve. The loop
/// ends early if the next box would be degenerate.
///
/// Level 1 is a plain evolve on box0. Deeper levels evolve in the level-1
/// frame (affine box map plus objective shift/scale, see evolve_in_frame) so
/// localization quality is independent of how small the box has become;
/// reported positions and objective values are always physical.
inline ZoomTrace refine(const ObjectiveFn& f, const DomainBox& box0, const ZoomConfig& cfg,
                        const Schedule& schedule) {
  if (cfg.levels == 0) throw std::invalid_argument("refine: need at least one level");
  if (cfg.resolution.size() != box0.dim())
    throw DimensionMismatchError("refine: resolution dimension does not match box");

  ZoomTrace trace;
  DomainBox box = box0;
  double frame_range = 0.0;
  std::optional<Grid> frame;
  if (cfg.levels > 1) {
    std::vector<double> lo(box0.dim()), hi(box0.dim());
    for (std::size_t j = 0; j < box0.dim(); ++j) {
      const double center = 0.5 * (box0.lower[j] + box0.upper[j]);
      const double half = 0.5 * detail::kDeepFrameShrink * box0.width(j);
      lo[j] = center - half;
      hi[j] = center + half;
    }
    frame = Grid::regular(DomainBox(std::move(lo), std::move(hi)), cfg.resolution);
  }
  for (std::size_t z = 1; z <= cfg.levels; ++z) {
    Grid grid = Grid::regular(box, cfg.resolution);
    // The frame normalization target is the objective range over the first
    // deep level's lattice, not over the full level-1 box: penalty-augmented
    // objectives can vary thousands of times more over the full box than
    // near the minimizer, and amplifying the local structure by that ratio
    // freezes the deep-level state before it can settle into the lowest
    // basin. Anchoring at level 2 keeps every deeper level at the same
    // effective strength as the first level that runs in the frame.
    if (z == 2) frame_range = detail::lattice_range(f, grid);
    const auto t0 = std::chrono::steady_clock::now();
    SimResult sim = z == 1 ? evolve(f, grid, schedule)
                           : detail::evolve_in_frame(f, grid, *frame, frame_range, schedule);
    const auto t1 = std::chrono::steady_clock::now();
    trace.levels.push_back(ZoomLevel{box, sim.best, sim.norm_drift,
                                     std::chrono::duration<double>(t1 - t0).count()});
    if (trace.levels.size() == 1 || sim.best.value < trace.best.value) {
      trace.best = sim.best;
      trace.best_level = z;
    }
    if (z == cfg.levels) break;
    try {
      box = next_box(probability_density(sim.psi), grid, cfg.eta, box);
    } catch (const DegenerateBoxError&) {
      break;  // boxes are as small as doubles allow; keep the incumbent
    }
  }
  if (cfg.polish) {
    Candidate polished = cfg.polish(f, box0, trace.best);
    if (polished.value < trace.best.value) trace.best = polished;
  }
  return trace;
}

}  // namespace alqhd
