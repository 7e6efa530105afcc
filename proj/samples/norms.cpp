// Luxemburg norms with variable exponents: closed forms next to plain bisection.
#include <cstdio>

#include "varlp/varlp.hpp"

using namespace varlp;

int main() {
  const auto one = RadialProfile::constant(1.0);

  // p(x) = x on [1, inf): the modular is 1/(lambda ln lambda)
  const auto linear = ExponentSpec::variable(RadialProfile::identity());
  const auto r = norm(one, one, linear, RadialDomain::half_line(1.0));
  std::printf("||1||, p(x) = x on [1,inf): %.12f (%s)\n", r.norm, to_string(r.method));

  // exponents 2 and 3 on two unit pieces, masses a1 and a2
  std::printf("two-valued norm (3, 2):      %.12f\n", norm_two_valued(3.0, 2.0));
  std::printf("two-valued norm (1, 5):      %.12f\n", norm_two_valued(1.0, 5.0));

  // e^{-|x|} in the plane with a two-step exponent, solved by bisection
  const auto step = ExponentSpec::variable(RadialProfile::two_step(1.5, 3.0, 1.0));
  NormOptions opt;
  opt.fast_paths = false;
  const auto e = norm(RadialProfile::exponential(-1.0), one, step, RadialDomain::whole_space(2), opt);
  std::printf("||e^-|x|||, R^2, two-step:   %.12f after %d iterations\n", e.norm, e.iterations);
}
