#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "varlp/harness.hpp"

using namespace varlp;
using Catch::Approx;

namespace {

const double e = std::numbers::e;

InequalitySetup knopp_setup() {
  InequalitySetup s;
  s.kind = InequalityKind::gmean;
  s.n = 1;
  s.p = 1.0;
  s.q = ExponentSpec::fixed(1.0);
  s.bounds = std::make_pair(e, e);  // sharp constant in the unweighted scalar case
  return s;
}

// the ratio for the knopp member with parameter delta, in closed form:
// Gf = e^{1-delta} r^{-1+delta} on (0,1) and e^4 r^-4 exp(-(3+delta)/r) beyond
double knopp_ratio(double d) {
  const double c = 3.0 + d;
  const double tail = std::exp(4.0) * (2.0 - std::exp(-c) * (c * c + 2.0 * c + 2.0)) / (c * c * c);
  return (std::exp(1.0 - d) / d + tail) / (1.0 / d + 1.0 / 3.0);
}

}  // namespace

TEST_CASE("knopp family approaches e from below") {
  const auto fam = TestFamily::knopp();
  const auto est = estimate_constant(knopp_setup(), fam);
  REQUIRE_FALSE(est.violation);
  for (std::size_t i = 0; i < fam.size(); ++i)
    CHECK(est.ratios[i] == Approx(knopp_ratio(fam.parameters[i][0])).epsilon(1e-7));
  CHECK(est.empirical_sup >= e - 0.05);
  CHECK(est.empirical_sup <= e * (1.0 + 1e-6));
  CHECK(est.best_parameters.at(0) == 0.001);
}

TEST_CASE("estimates are invariant under scaling of the family") {
  auto fam = TestFamily::random_splines(7, 4);
  auto scaled = fam;
  for (auto& m : scaled.members) m = m.scaled(37.5);
  const auto a = estimate_constant(knopp_setup(), fam);
  const auto b = estimate_constant(knopp_setup(), scaled);
  for (std::size_t i = 0; i < fam.size(); ++i) CHECK(b.ratios[i] == Approx(a.ratios[i]).epsilon(1e-9));
}

TEST_CASE("random splines are reproducible from the seed") {
  const auto a = TestFamily::random_splines(2024, 3);
  const auto b = TestFamily::random_splines(2024, 3);
  const auto c = TestFamily::random_splines(2025, 3);
  REQUIRE(a.parameters == b.parameters);
  CHECK(a.parameters != c.parameters);
  for (double r : {1e-3, 0.3, 1.0, 7.0, 400.0}) CHECK(a.members[1](r) == b.members[1](r));
  const auto ea = estimate_constant(knopp_setup(), a);
  const auto eb = estimate_constant(knopp_setup(), b);
  CHECK(ea.ratios == eb.ratios);
}

TEST_CASE("no family member beats the sharp constants") {
  SECTION("geometric mean, splines and exponentials") {
    for (auto fam : {TestFamily::random_splines(11, 6), TestFamily::exponentials({0.5, 1.0, 3.0})}) {
      const auto est = estimate_constant(knopp_setup(), fam);
      CHECK_FALSE(est.violation);
      CHECK(est.empirical_sup > 0.0);
      CHECK(est.empirical_sup < e);
    }
  }
  SECTION("hardy with power weights uses the computed sandwich") {
    // v = 1, w = |x|^-1, p = q = 2 in one dimension; A(alpha) = 2/sqrt(alpha)
    InequalitySetup s;
    s.kind = InequalityKind::hardy;
    s.n = 1;
    s.p = 2.0;
    s.q = ExponentSpec::fixed(2.0);
    s.w = RadialProfile::power(-1.0);
    const auto est = estimate_constant(s, TestFamily::power_cutoff({-1.2, -0.45, -0.25, 0.0, 1.0}, 1.0));
    CHECK(est.theoretical_upper == Approx(4.0).epsilon(1e-6));
    CHECK(est.theoretical_lower <= est.theoretical_upper);
    CHECK_FALSE(est.violation);
    CHECK(est.best_member != 0);
    CHECK(est.notes.front().find("member 0 skipped") == 0);  // r^-1.2 is not square integrable
  }
  SECTION("members without a geometric mean are skipped") {
    auto fam = TestFamily::power_cutoff({-0.5, 0.0}, 1.0);
    CHECK_THROWS_AS(estimate_constant(knopp_setup(), fam), domain_error);
    fam.members.push_back(RadialProfile::exponential(-1.0));
    fam.parameters.push_back({});
    const auto est = estimate_constant(knopp_setup(), fam);
    CHECK(est.best_member == 2);
    CHECK(est.ratios[2] == Approx(2.0).epsilon(1e-9));  // G e^{-r} = e^{-r/2} in one dimension
  }
}

TEST_CASE("a deliberately small bound is reported as a violation") {
  auto s = knopp_setup();
  s.bounds = std::make_pair(0.0, 1.0);
  const auto est = estimate_constant(s, TestFamily::knopp({0.1}));
  CHECK(est.violation);
  CHECK(est.verdict() == "violation");
  CHECK_FALSE(est.details.empty());
}

TEST_CASE("mixed norm inequality on the unit square") {
  SECTION("1 + xy with p = 1 and q = 2") {
    const auto rep = verify_theorem1([](double x, double y) { return 1.0 + x * y; }, ExponentSpec::fixed(1.0),
                                     ExponentSpec::fixed(2.0));
    CHECK(rep.factor == 1.0);  // constant exponents: the factor collapses to 1
    CHECK(theorem1_factor(1.0, 1.0, 1.0, 2.0) == Approx(2.25));
    CHECK(rep.holds);
    CHECK(rep.lhs <= 2.25 * rep.rhs);
    CHECK(rep.lhs < rep.rhs);
  }
  SECTION("equal constant exponents agree") {
    for (double p : {1.0, 1.7, 3.0}) {
      const auto rep = verify_theorem1([](double x, double y) { return std::exp(x - 2.0 * y) + x; },
                                       ExponentSpec::fixed(p), ExponentSpec::fixed(p));
      CHECK(rep.factor == 1.0);
      CHECK(rep.lhs == Approx(rep.rhs).epsilon(1e-6));
    }
  }
  SECTION("variable exponents") {
    const auto p = ExponentSpec::variable(RadialProfile::custom("1+x/2", [](double x) { return 1.0 + 0.5 * x; }));
    const auto q = ExponentSpec::variable(RadialProfile::custom("2+x", [](double x) { return 2.0 + x; }));
    const auto rep = verify_theorem1([](double x, double y) { return std::sin(3.0 * x + y) + 1.5; }, p, q, 48, 40);
    CHECK(rep.holds);
    CHECK(rep.factor > 1.0);
    CHECK(rep.ratio <= rep.factor);
  }
  SECTION("zero function") {
    const auto rep = verify_theorem1([](double, double) { return 0.0; }, ExponentSpec::fixed(1.5), ExponentSpec::fixed(2.0));
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs == 0.0);
    CHECK(rep.holds);
  }
  SECTION("exponent order is enforced") {
    CHECK_THROWS_AS(verify_theorem1([](double, double) { return 1.0; }, ExponentSpec::fixed(3.0),
                                    ExponentSpec::fixed(2.0)),
                    domain_error);
  }
}

TEST_CASE("equivalence demo on the closed case") {
  GurkaProblem prob;  // p = q = 2, omega1 = 1, omega2 = 1/x, lambda = 2
  const auto rep = theorem4_demo(prob);
  CHECK(rep.k_estimate < 2.0);
  CHECK(rep.lambda_above_k);
  REQUIRE(rep.solver_ok);
  CHECK(rep.equation_residual <= 1e-5);
  CHECK(rep.solution_direction);
  CHECK(rep.inequality_direction);
  REQUIRE(rep.estimate);
  CHECK(rep.estimate->theoretical_upper == Approx(2.0));
  CHECK(rep.estimate->empirical_sup > 1.0);
  CHECK(rep.passed());
}

TEST_CASE("equivalence demo below the threshold fails in the solver") {
  GurkaProblem probe;
  const auto k = theorem4_demo(probe).k_estimate;
  GurkaProblem prob;
  prob.lambda = 0.5 * k;
  const auto rep = theorem4_demo(prob);
  CHECK_FALSE(rep.lambda_above_k);
  CHECK_FALSE(rep.solver_ok);
  CHECK_FALSE(rep.passed());
  CHECK_FALSE(rep.solver_message.empty());
}

TEST_CASE("equivalence demo without a left weight") {
  GurkaProblem prob;
  prob.omega2 = RadialProfile::constant(0.0);
  Theorem4Options opt;
  opt.y_start = RadialProfile::identity();
  const auto rep = theorem4_demo(prob, opt);
  // the inequality is trivial, but the reconstructed y = t leaves residual lambda
  CHECK(rep.inequality_direction);
  CHECK(rep.equation_residual == Approx(prob.lambda).epsilon(1e-6));
  CHECK_FALSE(rep.solution_direction);
}

TEST_CASE("smooth u family satisfies the side conditions") {
  const auto fam = TestFamily::smooth_u();
  for (const auto& u : fam.members) {
    CHECK(std::abs(u(1e-12)) < 1e-11);
    for (double x : {0.01, 0.5, 2.0, 9.0}) {
      const double h = 1e-6 * x;
      CHECK(u.derivative(x) == Approx((u(x + h) - u(x - h)) / (2.0 * h)).epsilon(1e-6).margin(1e-9));
    }
  }
}
