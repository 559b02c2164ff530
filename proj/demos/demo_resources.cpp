// Resource-estimation tour: generate a small synthetic power network, assemble
// its dispatch model, fold the power-balance residuals into a penalized
// objective, encode that objective as diagonal Pauli-Z strings on one-hot
// registers, and price one Trotter step under both gate cost models.
#include <cstdio>

#include "alqhd/alqhd.hpp"

int main() {
  std::printf("buses  vars  terms   NISQ hard   FT T total   potential share\n");
  for (std::size_t n_buses : {2, 3, 4, 5}) {
    const alqhd::PowerCase pc = alqhd::generate_synthetic_case(n_buses, 11);
    const alqhd::AcopfModel m = alqhd::build_acopf(pc, alqhd::build_ybus(pc));
    const alqhd::SeparableExpr obj = alqhd::penalized_objective(m, 1.0);

    constexpr std::size_t r = 4;  // samples per variable
    std::vector<std::vector<double>> grids(m.n);
    for (std::size_t j = 0; j < m.n; ++j) {
      grids[j].resize(r);
      const double w = m.variables[j].upper - m.variables[j].lower;
      for (std::size_t k = 0; k < r; ++k)
        grids[j][k] = m.variables[j].lower + static_cast<double>(k) * w / static_cast<double>(r);
    }
    const alqhd::QubitLayout layout =
        alqhd::QubitLayout::from_resolutions(std::vector<std::size_t>(m.n, r));
    alqhd::EncodeConfig enc;
    enc.max_term_width = 8;  // squared residuals couple up to eight variables
    const alqhd::ZStringHamiltonian h = alqhd::encode_expr(obj, grids, layout, enc);
    const alqhd::ResourceEstimate est = alqhd::estimate(h, m.n);

    const double share = est.ft.r_eps * static_cast<double>(est.ft.rotations_potential) /
                         static_cast<double>(est.ft.t_total);
    std::printf("%5zu  %4zu  %5zu  %10llu  %11llu   %14.1f%%\n", n_buses, m.n, h.size(),
                static_cast<unsigned long long>(est.nisq.hard_two_qubit),
                static_cast<unsigned long long>(est.ft.t_total), 100.0 * share);
  }
  return 0;
}
