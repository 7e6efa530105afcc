// Bounds for the best constant of the geometric mean inequality with unit
// weights in one dimension, and an extremal family creeping up to e.
#include <cstdio>

#include "varlp/varlp.hpp"

using namespace varlp;

int main() {
  const auto one = RadialProfile::constant(1.0);
  const auto b = gmean_constant_bounds(one, one, 1.0, ExponentSpec::fixed(1.0), 1);
  std::printf("constant in [%.9f, %.9f], upper attained at s = %.6f\n", b.lower, b.upper, b.upper_parameter);

  InequalitySetup s;
  s.kind = InequalityKind::gmean;
  s.p = 1.0;
  s.q = ExponentSpec::fixed(1.0);
  s.bounds = std::make_pair(b.lower, b.upper);
  const auto fam = TestFamily::knopp();
  const auto est = estimate_constant(s, fam);
  for (std::size_t i = 0; i < fam.size(); ++i)
    std::printf("  delta = %-6g ratio %.9f\n", fam.parameters[i][0], est.ratios[i]);
  std::printf("empirical sup %.9f: %s\n", est.empirical_sup, est.verdict().c_str());
}
