#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "alqhd/errors.hpp"
#include "alqhd/pauli.hpp"

namespace alqhd {

/// Two-qubit entanglers are the expensive ("hard") operations on near-term
/// hardware; diagonal single-qubit phases are cheap frame updates.
struct NisqCost {
  std::uint64_t hard_two_qubit = 0;
  std::uint64_t easy_single_qubit = 0;

  std::uint64_t total() const noexcept { return hard_two_qubit + easy_single_qubit; }
};

/// Fault-tolerant budget for one Trotter step: exact T gates, generic
/// rotations awaiting Clifford+T synthesis, and the Clifford overhead.
struct FtCost {
  std::uint64_t exact_t = 0;             // N_tK
  std::uint64_t rotations_kinetic = 0;   // N_rK
  std::uint64_t rotations_potential = 0; // N_rV
  std::uint64_t clifford = 0;
  double epsilon = 0.0;     // per-rotation synthesis tolerance
  double r_eps = 0.0;       // T gates per synthesized rotation
  std::uint64_t t_total = 0;
};

/// T-count per rotation synthesized to tolerance eps:
/// r(eps) = max(0, a*log2(1/eps) + b).
struct SynthesisModel {
  double a = 3.0;
  double b = 4.0;

  double operator()(double eps) const {
    if (a <= 0.0) throw InvalidArgumentError("SynthesisModel: slope must be positive");
    if (!(eps > 0.0)) throw InvalidArgumentError("SynthesisModel: tolerance must be positive");
    return std::max(0.0, a * std::log2(1.0 / eps) + b);
  }
};

/// Kinetic Trotter-step template: 44 hard two-qubit gates per variable, easy
/// single-qubit count configurable (unknown for the template, default 0).
inline NisqCost kinetic_nisq(std::size_t n_vars, std::uint64_t easy_per_var = 0) {
  return NisqCost{44ull * n_vars, easy_per_var * n_vars};
}

/// Fault-tolerant kinetic template: (exact T, generic rotations) = (2n, 42n).
inline std::pair<std::uint64_t, std::uint64_t> kinetic_ft(std::size_t n_vars) {
  return {2ull * n_vars, 42ull * n_vars};
}

/// Each non-identity Z-string of weight k costs 2(k-1) CNOTs plus one Rz;
/// the identity is a global phase and costs nothing.
inline std::pair<std::uint64_t, std::uint64_t> potential_cost(const ZStringHamiltonian& h) {
  std::uint64_t two_qubit = 0, rotations = 0;
  for (const auto& [support, c] : h.terms) {
    if (support.empty()) continue;
    two_qubit += 2ull * (support.size() - 1);
    rotations += 1;
  }
  return {two_qubit, rotations};
}

/// Per-rotation tolerance so that N_r rotations jointly stay within the run
/// accuracy: eps = accuracy / N_r.
inline double rotation_tolerance(std::uint64_t n_rotations, double run_accuracy = 1e-6) {
  if (n_rotations < 1)
    throw InvalidArgumentError("rotation_tolerance: need at least one rotation");
  if (!(run_accuracy > 0.0))
    throw InvalidArgumentError("rotation_tolerance: accuracy must be positive");
  return run_accuracy / static_cast<double>(n_rotations);
}

struct ResourceEstimate {
  std::size_t n_vars = 0;
  NisqCost nisq;
  FtCost ft;
};

/// Full per-Trotter-step estimate. NISQ: kinetic entanglers plus potential
/// CNOTs are hard; diagonal Rz rotations are easy. FT: those same rotations
/// must be synthesized, so the total T count is
/// N_tK + ceil(r(eps) * (N_rK + N_rV)) with eps spread over all rotations;
/// the entanglers reappear as Clifford overhead.
inline ResourceEstimate estimate(const ZStringHamiltonian& h, std::size_t n_vars,
                                 const SynthesisModel& model = {}, double run_accuracy = 1e-6,
                                 std::uint64_t kinetic_easy_per_var = 0) {
  ResourceEstimate out;
  out.n_vars = n_vars;

  const auto [pot_2q, pot_rot] = potential_cost(h);
  const NisqCost kin = kinetic_nisq(n_vars, kinetic_easy_per_var);
  out.nisq.hard_two_qubit = kin.hard_two_qubit + pot_2q;
  out.nisq.easy_single_qubit = kin.easy_single_qubit + pot_rot;

  const auto [n_tk, n_rk] = kinetic_ft(n_vars);
  out.ft.exact_t = n_tk;
  out.ft.rotations_kinetic = n_rk;
  out.ft.rotations_potential = pot_rot;
  out.ft.clifford = pot_2q + kin.hard_two_qubit;

  const std::uint64_t n_rot = n_rk + pot_rot;
  if (n_rot == 0) {
    out.ft.t_total = n_tk;
    return out;
  }
  out.ft.epsilon = rotation_tolerance(n_rot, run_accuracy);
  out.ft.r_eps = model(out.ft.epsilon);
  out.ft.t_total =
      n_tk + static_cast<std::uint64_t>(std::ceil(out.ft.r_eps * static_cast<double>(n_rot)));
  return out;
}

struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of count ~ c * n^p on log-log axes. R^2 is reported in
/// log space; an exactly constant series has zero variance to explain and is
/// reported as a perfect fit of a flat line.
inline PowerLawFit fit_power_law(std::span<const std::pair<double, double>> series) {
  if (series.size() < 3)
    throw DegenerateSeriesError("fit_power_law: need at least three points");
  std::vector<double> lx(series.size()), ly(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!(series[i].first > 0.0) || !(series[i].second > 0.0))
      throw DegenerateSeriesError("fit_power_law: sizes and counts must be positive");
    lx[i] = std::log(series[i].first);
    ly[i] = std::log(series[i].second);
  }
  const double n = static_cast<double>(series.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < series.size(); ++i) sx += lx[i], sy += ly[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DegenerateSeriesError("fit_power_law: all sizes equal");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);

  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double pred = intercept + fit.exponent * lx[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - my) * (ly[i] - my);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace alqhd
