// Constrained minimization tour: the augmented-Lagrangian outer loop with the
// wave-packet refiner as inner solver, on the scaled Rastrigin objective under
// a curved equality constraint. Settings are reduced from the benchmark
// defaults so the demo finishes in a few seconds.
#include <cstdio>

#include "alqhd/alqhd.hpp"

int main() {
  const alqhd::ObjectiveFn f = alqhd::rastrigin_scaled(2);
  const alqhd::ConstraintSet cs = alqhd::rastrigin_curved_constraints();
  const alqhd::DomainBox box = alqhd::benchmark_box(2);

  alqhd::Schedule sch;
  sch.steps = 4000;  // benchmark default is 50000
  const alqhd::ZoomConfig zoom = alqhd::ZoomConfig::uniform(2, 32, 2);

  const alqhd::AlmReport rep = alqhd::solve(f, cs, box, zoom, alqhd::AlmConfig{}, sch);

  std::printf("iter   objective   violation      rho\n");
  for (std::size_t k = 0; k < rep.history.size(); ++k)
    std::printf("%4zu  %10.6f   %9.2e  %7.1f\n", k + 1, rep.history[k].objective,
                rep.history[k].violation, rep.history[k].rho);
  std::printf("solution: x = (%.6f, %.6f)  f = %.9f  violation = %.2e\n", rep.x[0], rep.x[1],
              rep.objective, rep.violation);
  return 0;
}
