#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "varlp/quadrature.hpp"

using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;
using varlp::integrate;
using varlp::QuadConfig;

namespace {

// Composite midpoint rule; crude but independent of the adaptive code.
template <class F>
double midpoint(F g, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += g(a + (i + 0.5) * h);
  return s * h;
}

}  // namespace

TEST_CASE("polynomial on the unit interval") {
  auto r = integrate([](double x) { return x; }, 0.0, 1.0);
  CHECK_THAT(r.value, WithinAbs(0.5, 1e-14));
  CHECK(r.error <= 1e-10);
}

TEST_CASE("exponential tail to infinity") {
  const double lambda = std::numbers::e;
  auto r = integrate([&](double x) { return std::pow(lambda, -x); }, 1.0, std::numeric_limits<double>::infinity());
  CHECK_THAT(r.value, WithinRel(1.0 / (lambda * std::log(lambda)), 1e-9));
}

TEST_CASE("logarithmic endpoint singularity") {
  auto r = integrate([](double x) { return std::log(x); }, 0.0, 1.0, QuadConfig::precise());
  const double crude = midpoint([](double x) { return std::log(x); }, 0.0, 1.0, 2'000'000);
  CHECK_THAT(r.value, WithinAbs(-1.0, 1e-10));
  CHECK_THAT(r.value, WithinAbs(crude, 1e-5));
}

TEST_CASE("power singularities close to the integrability limit") {
  for (double a : {-0.5, -0.9, -0.99, -0.999}) {
    auto r = integrate([a](double x) { return std::pow(x, a); }, 0.0, 1.0, QuadConfig::precise());
    CHECK_THAT(r.value, WithinRel(1.0 / (a + 1.0), 1e-8));
  }
}

TEST_CASE("non-integrable singularities are reported as divergence") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), varlp::divergence_error);
  CHECK_THROWS_AS(integrate([](double x) { return std::pow(x, -1.5); }, 0.0, 1.0), varlp::divergence_error);
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 1.0, INFINITY), varlp::divergence_error);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, INFINITY), varlp::divergence_error);
}

TEST_CASE("algebraic tails") {
  auto r = integrate([](double x) { return std::pow(x, -1.5); }, 1.0, INFINITY, QuadConfig::precise());
  CHECK_THAT(r.value, WithinRel(2.0, 1e-10));
  auto s = integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, INFINITY, QuadConfig::precise());
  CHECK_THAT(s.value, WithinRel(std::numbers::pi / 2, 1e-11));
}

TEST_CASE("NaN integrand raises an evaluation error") {
  CHECK_THROWS_AS(integrate([](double x) { return x > 0.5 ? std::nan("") : 1.0; }, 0.0, 1.0), varlp::evaluation_error);
}

TEST_CASE("subdivision budget exhaustion carries the partial value") {
  QuadConfig cfg;
  cfg.max_subdivisions = 2;
  cfg.rel_tol = 1e-14;
  cfg.abs_tol = 0.0;
  try {
    integrate([](double x) { return std::sin(50.0 * x) / (1.0 + x); }, 0.0, 10.0, cfg);
    FAIL("expected an integration error");
  } catch (const varlp::integration_error& e) {
    CHECK(std::isfinite(e.partial_value()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("breakpoints handle jumps") {
  auto step = [](double x) { return x < std::numbers::pi / 3 ? 1.0 : 3.0; };
  const double bp[] = {std::numbers::pi / 3};
  auto r = integrate(step, 0.0, 2.0, QuadConfig::precise(), bp);
  CHECK_THAT(r.value, WithinRel(std::numbers::pi / 3 + 3.0 * (2.0 - std::numbers::pi / 3), 1e-12));
}

TEST_CASE("linearity and splitting invariance") {
  auto f = [](double x) { return std::exp(-x) * std::sqrt(x); };
  auto g = [](double x) { return 1.0 / (1.0 + x * x * x); };
  const QuadConfig cfg;
  for (double c : {0.1, 1.0, 3.7}) {
    const double whole = integrate(f, 0.0, INFINITY, cfg).value;
    const double split = integrate(f, 0.0, c, cfg).value + integrate(f, c, INFINITY, cfg).value;
    CHECK(std::abs(whole - split) <= 10.0 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(whole)));
  }
  const double lhs = integrate([&](double x) { return 2.0 * f(x) - 3.0 * g(x); }, 0.0, 5.0, cfg).value;
  const double rhs = 2.0 * integrate(f, 0.0, 5.0, cfg).value - 3.0 * integrate(g, 0.0, 5.0, cfg).value;
  CHECK_THAT(lhs, WithinAbs(rhs, 1e-8));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -3.0, 2.0, cfg).value > 0.0);
}

TEST_CASE("invalid configuration and limits") {
  QuadConfig bad;
  bad.max_subdivisions = 0;
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, bad), varlp::domain_error);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), varlp::domain_error);
  CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
}
