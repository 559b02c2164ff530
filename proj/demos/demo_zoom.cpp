// Minimal tour: zoom-refine a 1-d quadratic and print the per-level boxes.
#include <cstdio>

#include "alqhd/alqhd.hpp"

int main() {
  alqhd::ObjectiveFn f;
  f.dim = 1;
  f.fn = [](std::span<const double> x) { return (x[0] - 0.8) * (x[0] - 0.8); };

  alqhd::Schedule sch;
  sch.steps = 5000;
  alqhd::ZoomConfig cfg = alqhd::ZoomConfig::uniform(4, 32, 1);
  alqhd::ZoomTrace trace = alqhd::refine(f, alqhd::DomainBox::cube(1, -5.0, 5.0), cfg, sch);

  for (std::size_t z = 0; z < trace.levels.size(); ++z) {
    const alqhd::ZoomLevel& lvl = trace.levels[z];
    std::printf("level %zu: box [%.6g, %.6g]  candidate %.9g  objective %.3e\n", z + 1,
                lvl.box.lower[0], lvl.box.upper[0], lvl.candidate.position[0],
                lvl.candidate.value);
  }
  std::printf("best: x = %.12g  f = %.3e (level %zu)\n", trace.best.position[0],
              trace.best.value, trace.best_level);
  return 0;
}
