#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alqhd/errors.hpp"

namespace alqhd {

/// Axis-aligned box; the search domain for one problem or zoom level.
struct DomainBox {
  std::vector<double> lower;
  std::vector<double> upper;

  DomainBox(std::vector<double> lo, std::vector<double> hi)
      : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.empty())
      throw DimensionMismatchError("DomainBox: bound vectors must be non-empty and equally sized");
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || !(lower[j] < upper[j]))
        throw DegenerateBoxError("DomainBox: need finite lower < upper on axis " + std::to_string(j));
    }
  }

  /// Cube [lo, hi]^dim.
  static DomainBox cube(std::size_t dim, double lo, double hi) {
    return DomainBox(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
  }

  std::size_t dim() const noexcept { return lower.size(); }
  double width(std::size_t axis) const { return upper[axis] - lower[axis]; }

  std::vector<double> center() const {
    std::vector<double> c(dim());
    for (std::size_t j = 0; j < dim(); ++j) c[j] = 0.5 * (lower[j] + upper[j]);
    return c;
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t j = 0; j < dim(); ++j)
      if (x[j] < lower[j] || x[j] > upper[j]) return false;
    return true;
  }
};

/// Regular product grid over a DomainBox.
///
/// Samples on axis j sit at lower[j] + k * spacing[j], k = 0 .. resolution[j]-1,
/// i.e. the standard periodic-FFT lattice: the right endpoint is excluded, so
/// box edges are never double-counted. Multi-indices map to flat storage in
/// row-major order (last axis fastest).
struct Grid {
  DomainBox box;
  std::vector<std::size_t> resolution;
  std::vector<double> spacing;

  static Grid regular(DomainBox box, std::vector<std::size_t> res) {
    if (res.size() != box.dim())
      throw DimensionMismatchError("Grid: resolution vector must match box dimension");
    std::vector<double> dx(res.size());
    for (std::size_t j = 0; j < res.size(); ++j) {
      if (res[j] == 0) throw DimensionMismatchError("Grid: zero resolution on axis " + std::to_string(j));
      dx[j] = box.width(j) / static_cast<double>(res[j]);
    }
    return Grid{std::move(box), std::move(res), std::move(dx)};
  }

  std::size_t dim() const noexcept { return resolution.size(); }

  std::size_t size() const noexcept {
    std::size_t n = 1;
    for (std::size_t r : resolution) n *= r;
    return n;
  }

  /// Sample coordinate on one axis.
  double coord(std::size_t axis, std::size_t k) const {
    return box.lower[axis] + static_cast<double>(k) * spacing[axis];
  }

  std::vector<double> position(std::span<const std::size_t> index) const {
    if (index.size() != dim()) throw DimensionMismatchError("Grid::position: index dimension mismatch");
    std::vector<double> x(dim());
    for (std::size_t j = 0; j < dim(); ++j) x[j] = coord(j, index[j]);
    return x;
  }

  std::size_t flatten(std::span<const std::size_t> index) const {
    if (index.size() != dim()) throw DimensionMismatchError("Grid::flatten: index dimension mismatch");
    std::size_t flat = 0;
    for (std::size_t j = 0; j < dim(); ++j) flat = flat * resolution[j] + index[j];
    return flat;
  }

  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> index(dim());
    for (std::size_t j = dim(); j-- > 0;) {
      index[j] = flat % resolution[j];
      flat /= resolution[j];
    }
    return index;
  }
};

/// Discretized state: one complex amplitude per grid sample, row-major.
struct Wavefunction {
  Grid grid;
  std::vector<std::complex<double>> amp;
};

/// Equal-amplitude state, 1/sqrt(N) everywhere; norm is exactly 1 by construction.
inline Wavefunction uniform_state(const Grid& grid) {
  const std::size_t n = grid.size();
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  return Wavefunction{grid, std::vector<std::complex<double>>(n, {a, 0.0})};
}

inline double norm_sq(const Wavefunction& psi) {
  double s = 0.0;
  for (const auto& a : psi.amp) s += std::norm(a);
  return s;
}

/// |psi|^2 normalized to unit total mass. Throws ZeroNormError on a null state.
inline std::vector<double> probability_density(const Wavefunction& psi) {
  std::vector<double> p(psi.amp.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::norm(psi.amp[i]);
    total += p[i];
  }
  if (!(total > 0.0)) throw ZeroNormError("probability_density: state has zero norm");
  const double inv = 1.0 / total;
  for (double& v : p) v *= inv;
  return p;
}

/// Marginal of a density along `axis`: sum over every other axis.
inline std::vector<double> marginal(std::span<const double> density, const Grid& grid,
                                    std::size_t axis) {
  if (axis >= grid.dim())
    throw AxisOutOfRangeError("marginal: axis " + std::to_string(axis) + " out of range");
  if (density.size() != grid.size())
    throw DimensionMismatchError("marginal: density size does not match grid");
  // stride of `axis` in row-major storage; samples along the axis are
  // `stride` apart and blocks repeat every `stride * r` entries.
  std::size_t stride = 1;
  for (std::size_t j = grid.dim(); j-- > axis + 1;) stride *= grid.resolution[j];
  const std::size_t r = grid.resolution[axis];
  std::vector<double> m(r, 0.0);
  const std::size_t block = stride * r;
  for (std::size_t base = 0; base < density.size(); base += block)
    for (std::size_t k = 0; k < r; ++k) {
      const std::size_t off = base + k * stride;
      for (std::size_t s = 0; s < stride; ++s) m[k] += density[off + s];
    }
  return m;
}

struct GridPoint {
  std::vector<std::size_t> index;
  std::vector<double> position;
};

/// First multi-index (row-major order) attaining the maximum density.
/// Strict comparison makes the tie-break deterministic everywhere.
inline GridPoint argmax_point(std::span<const double> density, const Grid& grid) {
  if (density.size() != grid.size())
    throw DimensionMismatchError("argmax_point: density size does not match grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < density.size(); ++i)
    if (density[i] > density[best]) best = i;
  GridPoint out;
  out.index = grid.unflatten(best);
  out.position = grid.position(out.index);
  return out;
}

}  // namespace alqhd
