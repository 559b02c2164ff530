#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "alqhd/expr.hpp"
#include "alqhd/pauli.hpp"
#include "alqhd/powergrid.hpp"
#include "alqhd/resources.hpp"
#include "alqhd/rng.hpp"

using namespace alqhd;

namespace {

std::string read_case(const std::string& name) {
  const std::string path = std::string(ALQHD_DATA_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ZStringHamiltonian random_hamiltonian(CounterRng& rng, std::size_t n_qubits, std::size_t n_terms) {
  ZStringHamiltonian h;
  for (std::size_t t = 0; t < n_terms; ++t) {
    std::vector<std::size_t> support;
    for (std::size_t q = 0; q < n_qubits; ++q)
      if (rng.below(3) == 0) support.push_back(q);
    h.add(std::move(support), rng.uniform(-4.0, 4.0));
  }
  // random strings can collide and cancel; keep only real entries
  h.prune(1e-15);
  return h;
}

}  // namespace

TEST(KineticNisq, LinearInVariableCount) {
  EXPECT_EQ(kinetic_nisq(1).hard_two_qubit, 44u);
  EXPECT_EQ(kinetic_nisq(6).hard_two_qubit, 264u);
  EXPECT_EQ(kinetic_nisq(538).hard_two_qubit, 23672u);
  EXPECT_EQ(kinetic_nisq(6).easy_single_qubit, 0u);
  EXPECT_EQ(kinetic_nisq(6, 3).easy_single_qubit, 18u);
  EXPECT_EQ(kinetic_nisq(6, 3).total(), 264u + 18u);
}

TEST(KineticFt, ExactTAndRotationCounts) {
  EXPECT_EQ(kinetic_ft(1), (std::pair<std::uint64_t, std::uint64_t>{2, 42}));
  EXPECT_EQ(kinetic_ft(6), (std::pair<std::uint64_t, std::uint64_t>{12, 252}));
  EXPECT_EQ(kinetic_ft(0), (std::pair<std::uint64_t, std::uint64_t>{0, 0}));
}

TEST(PotentialCost, CNotsAndRotationsPerString) {
  ZStringHamiltonian h3;
  h3.add({0, 3, 7}, 1.0);
  EXPECT_EQ(potential_cost(h3), (std::pair<std::uint64_t, std::uint64_t>{4, 1}));

  ZStringHamiltonian h1;
  h1.add({2}, -0.5);
  EXPECT_EQ(potential_cost(h1), (std::pair<std::uint64_t, std::uint64_t>{0, 1}));

  ZStringHamiltonian mix;
  mix.add({0}, 1.0).add({1}, 1.0).add({2, 3}, 1.0).add({4, 5, 6}, 1.0).add({}, 9.0);
  EXPECT_EQ(potential_cost(mix), (std::pair<std::uint64_t, std::uint64_t>{6, 4}));

  ZStringHamiltonian id_only;
  id_only.add({}, 2.0);
  EXPECT_EQ(potential_cost(id_only), (std::pair<std::uint64_t, std::uint64_t>{0, 0}));
}

TEST(RotationTolerance, DividesAccuracyAcrossRotations) {
  EXPECT_DOUBLE_EQ(rotation_tolerance(1000, 1e-6), 1e-9);
  EXPECT_EQ(rotation_tolerance(1, 1e-6), 1e-6);
  EXPECT_NEAR(rotation_tolerance(294, 1e-6), 1e-6 / 294.0, 1e-20);
  double prev = rotation_tolerance(1);
  for (std::uint64_t n : {2ull, 10ull, 500ull, 12345ull}) {
    const double eps = rotation_tolerance(n);
    EXPECT_LT(eps, prev);
    prev = eps;
  }
  EXPECT_THROW(rotation_tolerance(0, 1e-6), InvalidArgumentError);
  EXPECT_THROW(rotation_tolerance(10, 0.0), InvalidArgumentError);
}

TEST(SynthesisModel, LinearInLogInverseTolerance) {
  const SynthesisModel m;  // a=3, b=4
  EXPECT_DOUBLE_EQ(m(std::pow(2.0, -10)), 3.0 * 10 + 4);
  EXPECT_DOUBLE_EQ(m(std::pow(2.0, -30)), 3.0 * 30 + 4);
  EXPECT_DOUBLE_EQ(m(1.0), 4.0);
  EXPECT_DOUBLE_EQ(m(16.0), 0.0);  // clamped
  double prev = m(1e-1);
  for (double eps : {1e-3, 1e-6, 1e-9, 1e-12}) {
    const double r = m(eps);
    EXPECT_GT(r, prev);
    prev = r;
  }
  EXPECT_THROW((SynthesisModel{-1.0, 4.0}(1e-3)), InvalidArgumentError);
  EXPECT_THROW(m(0.0), InvalidArgumentError);
}

TEST(Estimate, EmptyHamiltonianComposition) {
  const ZStringHamiltonian empty;
  const SynthesisModel model;
  const ResourceEstimate est = estimate(empty, 1, model, 1e-6);
  EXPECT_EQ(est.nisq.hard_two_qubit, 44u);
  EXPECT_EQ(est.nisq.easy_single_qubit, 0u);
  EXPECT_EQ(est.ft.exact_t, 2u);
  EXPECT_EQ(est.ft.rotations_kinetic, 42u);
  EXPECT_EQ(est.ft.rotations_potential, 0u);
  EXPECT_EQ(est.ft.clifford, 44u);
  const double eps = 1e-6 / 42.0;
  EXPECT_DOUBLE_EQ(est.ft.epsilon, eps);
  EXPECT_DOUBLE_EQ(est.ft.r_eps, model(eps));
  EXPECT_EQ(est.ft.t_total, 2u + static_cast<std::uint64_t>(std::ceil(model(eps) * 42.0)));
}

TEST(Estimate, InvariantHoldsOnRandomHamiltonians) {
  CounterRng rng(61u);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n_vars = 1 + rng.below(8);
    ZStringHamiltonian h = random_hamiltonian(rng, 4 + rng.below(10), 1 + rng.below(30));
    const ResourceEstimate est = estimate(h, n_vars);
    const std::uint64_t n_rot = est.ft.rotations_kinetic + est.ft.rotations_potential;
    EXPECT_EQ(est.ft.t_total,
              est.ft.exact_t + static_cast<std::uint64_t>(std::ceil(est.ft.r_eps *
                                                                    static_cast<double>(n_rot))));
    EXPECT_EQ(est.ft.exact_t, 2 * n_vars);
    EXPECT_EQ(est.ft.rotations_kinetic, 42 * n_vars);
    EXPECT_EQ(est.nisq.hard_two_qubit, est.ft.clifford);
  }
}

TEST(Estimate, PotentialCostMatchesSerializedResummation) {
  CounterRng rng(71u);
  for (int rep = 0; rep < 50; ++rep) {
    ZStringHamiltonian h = random_hamiltonian(rng, 4 + rng.below(8), 1 + rng.below(20));
    const auto [two_q, rot] = potential_cost(h);

    // independent re-summation from the serialized text
    std::uint64_t two_q_again = 0, rot_again = 0;
    std::istringstream in(serialize(h));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::string tail = line.substr(line.find('\t') + 1);
      if (tail.empty()) continue;  // identity
      const std::size_t weight =
          1 + static_cast<std::size_t>(std::count(tail.begin(), tail.end(), ','));
      two_q_again += 2 * (weight - 1);
      rot_again += 1;
    }
    EXPECT_EQ(two_q, two_q_again);
    EXPECT_EQ(rot, rot_again);
  }
}

TEST(Estimate, AddingTermNeverDecreasesCounts) {
  CounterRng rng(83u);
  ZStringHamiltonian h = random_hamiltonian(rng, 8, 10);
  const ResourceEstimate before = estimate(h, 3);
  h.add({0, 5}, 0.7);
  const ResourceEstimate after = estimate(h, 3);
  EXPECT_GE(after.nisq.hard_two_qubit, before.nisq.hard_two_qubit);
  EXPECT_GE(after.nisq.easy_single_qubit, before.nisq.easy_single_qubit);
  EXPECT_GE(after.ft.t_total, before.ft.t_total);
  EXPECT_GE(after.ft.clifford, before.ft.clifford);
}

TEST(FitPowerLaw, RecoversExactQuadratic) {
  std::vector<std::pair<double, double>> series;
  for (double n : {2.0, 4.0, 8.0, 16.0}) series.emplace_back(n, 5.0 * n * n);
  const PowerLawFit fit = fit_power_law(series);
  EXPECT_NEAR(fit.prefactor, 5.0, 1e-9);
  EXPECT_NEAR(fit.exponent, 2.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(FitPowerLaw, RecoversFractionalExponent) {
  std::vector<std::pair<double, double>> series;
  for (double n : {2.0, 3.0, 5.0, 8.0, 13.0})
    series.emplace_back(n, 3.48e5 * std::pow(n, 1.27));
  const PowerLawFit fit = fit_power_law(series);
  EXPECT_NEAR(fit.prefactor / 3.48e5, 1.0, 1e-6);
  EXPECT_NEAR(fit.exponent, 1.27, 1e-6);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-9);
}

TEST(FitPowerLaw, ConstantSeriesIsFlat) {
  std::vector<std::pair<double, double>> series{{2.0, 7.0}, {4.0, 7.0}, {8.0, 7.0}};
  const PowerLawFit fit = fit_power_law(series);
  EXPECT_NEAR(fit.exponent, 0.0, 1e-12);
  EXPECT_NEAR(fit.prefactor, 7.0, 1e-9);
  EXPECT_DOUBLE_EQ(fit.r_squared, 1.0);
}

TEST(FitPowerLaw, ScaleEquivariance) {
  std::vector<std::pair<double, double>> series;
  for (double n : {2.0, 5.0, 9.0, 17.0}) series.emplace_back(n, 11.0 * std::pow(n, 1.6) + 0.0);
  const PowerLawFit base = fit_power_law(series);
  for (auto& [n, c] : series) c *= 100.0;
  const PowerLawFit scaled = fit_power_law(series);
  EXPECT_NEAR(scaled.prefactor / base.prefactor, 100.0, 1e-9);
  EXPECT_NEAR(scaled.exponent, base.exponent, 1e-12);
}

TEST(Estimate, RotationSynthesisDominatesNetworkObjectives) {
  // Full pipeline on the shipped 2-bus and 3-bus networks: parse, assemble the
  // admittance matrix and dispatch model, fold the power-balance residuals into
  // a penalized objective, encode it on eight samples per variable, and cost
  // the circuit. The squared residuals make the potential dense in multi-qubit
  // Z strings, so synthesizing its rotations should dominate the T budget.
  for (const char* name : {"case2.m", "case3.m"}) {
    SCOPED_TRACE(name);
    const PowerCase pc = parse_case(read_case(name));
    const AcopfModel m = build_acopf(pc, build_ybus(pc));
    // one slack angle is pinned, so 2*buses - 1 network variables plus two
    // setpoints per generator always gives an odd variable count
    ASSERT_EQ(m.n % 2, 1u);
    const SeparableExpr obj = penalized_objective(m, 1.0);

    constexpr std::size_t r = 8;
    std::vector<std::vector<double>> grids(m.n);
    for (std::size_t j = 0; j < m.n; ++j) {
      grids[j].resize(r);
      const double w = m.variables[j].upper - m.variables[j].lower;
      for (std::size_t k = 0; k < r; ++k)
        grids[j][k] = m.variables[j].lower + static_cast<double>(k) * w / static_cast<double>(r);
    }
    const QubitLayout layout = QubitLayout::from_resolutions(std::vector<std::size_t>(m.n, r));
    EncodeConfig enc;
    enc.max_term_width = 8;  // squared residuals couple up to eight variables
    const ZStringHamiltonian h = encode_expr(obj, grids, layout, enc);
    const ResourceEstimate est = estimate(h, m.n);

    const double share = est.ft.r_eps * static_cast<double>(est.ft.rotations_potential) /
                         static_cast<double>(est.ft.t_total);
    EXPECT_GE(share, 0.95);
    EXPECT_LT(share, 1.0);
  }
}

TEST(FitPowerLaw, RejectsDegenerateInput) {
  std::vector<std::pair<double, double>> two{{2.0, 4.0}, {3.0, 9.0}};
  EXPECT_THROW(fit_power_law(two), DegenerateSeriesError);
  std::vector<std::pair<double, double>> same_n{{2.0, 4.0}, {2.0, 5.0}, {2.0, 6.0}};
  EXPECT_THROW(fit_power_law(same_n), DegenerateSeriesError);
  std::vector<std::pair<double, double>> nonpos{{2.0, 4.0}, {3.0, -1.0}, {4.0, 2.0}};
  EXPECT_THROW(fit_power_law(nonpos), DegenerateSeriesError);
}
