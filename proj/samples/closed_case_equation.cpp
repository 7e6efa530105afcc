// p = q = 2, omega1 = 1, omega2 = 1/x: y = sqrt(x) solves the equation at
// lambda = 2, and the successive approximation from 4x creeps down to 2x.
#include <cmath>
#include <cstdio>

#include "varlp/varlp.hpp"

using namespace varlp;

int main() {
  GurkaProblem prob;
  const auto y = RadialProfile::power(0.5);
  std::printf("residual of sqrt x: %.3e\n", equation_residual(y, prob, prob.grid).residual);

  const auto P = source_P(y, prob, prob.grid);
  const auto st = picard_iterate(RadialProfile::power(1.0, 4.0), prob, y, P, 200, 1e-13);
  for (int n : {1, 10, 25, 50, 100})
    if (n <= static_cast<int>(st.max_change.size())) std::printf("  iteration %3d  max change %.3e\n", n, st.max_change[n - 1]);
  std::printf("w(1) = %.10f after %d iterations\n", st.w(1.0), st.iteration);

  const auto y0 = reconstruct_y0(st.w, prob.anchor, prob.grid);
  std::printf("y0(4) = %.8f, y0(0.01) = %.8f\n", y0(4.0), y0(0.01));

  std::vector<RadialProfile> family;
  for (double c = 1.25; c <= 8.0; c += 0.25) family.push_back(RadialProfile::power(1.0, c));
  std::printf("threshold estimate K <= %.6f\n", compute_k(family, y, P, prob).value);
}
