// Energy sequences for g = 1, a = 2 under both boundary conditions, next to
// the finite-difference reference.

#include <cstdio>

#include "dwell/dwell.hpp"

int main() {
  const dwell::PotentialParams p(1.0, 2.0);
  const auto grid = dwell::make_grid(4.0, 2000);

  dwell::SolveOptions opt;
  opt.max_iter = 8;
  opt.tol = 0.0;
  for (auto bc : {dwell::BoundaryCondition::unit_at_infinity, dwell::BoundaryCondition::unit_at_origin}) {
    const auto rep = dwell::solve(p, grid, bc, opt);
    std::printf("%-2s", dwell::to_string(bc).c_str());
    for (double e : rep.energies) std::printf(" %.6f", e);
    std::printf("\n");
  }

  const auto ref = dwell::oracle_ground_state(p);
  std::printf("reference E = %.10f (+- %.1e)\n", ref.energy, ref.error_estimate);
  return 0;
}
