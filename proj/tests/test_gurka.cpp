#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "varlp/gurka.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace varlp;

namespace {

// p = q = 2, w1 = 1, w2 = x^-1, lambda = 2: y = sqrt(x) solves the equation exactly
GurkaProblem closed_case() {
  GurkaProblem g;
  g.grid = log_grid(1e-6, 1e2, 200);
  return g;
}

const auto sqrt_x = RadialProfile::power(0.5);
const auto P_exact = RadialProfile::power(-1.25, std::sqrt(2.0) / 4.0);

double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// c_{n+1} = 1 + (sqrt2/4) c_n^{3/2}: the iteration restricted to w = c x
double scalar_iterate(double c, int n) {
  for (int i = 0; i < n; ++i) c = 1.0 + std::sqrt(2.0) / 4.0 * std::pow(c, 1.5);
  return c;
}

}  // namespace

TEST_CASE("tail functional closed forms") {
  const auto prob = closed_case();
  for (double t : {1e-4, 0.3, 2.0, 50.0})
    CHECK_THAT(tail_norm_L(t, prob.omega2, sqrt_x, prob), WithinRel(std::sqrt(2.0) * std::pow(t, -0.25), 1e-10));
  const std::vector<double> ts = {1e-3, 1e-1, 10.0};
  const auto sweep = tail_norm_L(ts, prob.omega2, sqrt_x, prob);
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK_THAT(sweep[i], WithinRel(std::sqrt(2.0) * std::pow(ts[i], -0.25), 1e-10));
  // unit mass: y = 1 on (t, t+1) and 0 beyond
  for (double t : {0.5, 3.0})
    CHECK_THAT(tail_norm_L(t, RadialProfile::constant(1.0), RadialProfile::two_step(1.0, 0.0, t + 1.0), prob),
               WithinRel(1.0, 1e-10));
  CHECK(tail_norm_L(1.0, RadialProfile::constant(0.0), sqrt_x, prob) == 0.0);
}

TEST_CASE("tail functional is nonincreasing in t") {
  std::mt19937_64 rng(314);
  const auto ts = log_grid(1e-3, 1e2, 30);
  for (int k = 0; k < 20; ++k) {
    GurkaProblem prob;
    const double a = uniform(rng, -1.6, -0.9), b = uniform(rng, 0.2, 1.5), q0 = uniform(rng, 2.0, 3.0);
    prob.p = 2.0;
    prob.q = k % 2 ? ExponentSpec::fixed(q0)
                   : ExponentSpec::variable(RadialProfile::custom("q", [=](double r) { return q0 + 0.5 * r / (1.0 + r); }));
    prob.omega2 = RadialProfile::power(a) * RadialProfile::exponential(-uniform(rng, 0.0, 0.5));
    const auto y = RadialProfile::power(b);
    const auto L = k % 2 ? tail_norm_L(ts, prob.omega2, y, prob) : std::vector<double>{};
    double prev = INFINITY;
    for (std::size_t i = 0; i < ts.size(); i += (k % 2 ? 1 : 5)) {
      const double l = k % 2 ? L[i] : tail_norm_L(ts[i], prob.omega2, y, prob);
      CHECK(l <= prev * (1.0 + 1e-12));
      prev = l;
    }
  }
}

TEST_CASE("equation residual") {
  auto prob = closed_case();
  CHECK(equation_residual(sqrt_x, prob, prob.grid).residual <= 1e-6);
  prob.lambda = 1.0;
  CHECK(equation_residual(sqrt_x, prob, prob.grid).residual >= 0.2);
  prob.lambda = 2.0;
  auto bump = RadialProfile::custom("bump", [](double r) { return 1.0 + std::exp(-(r - 1.0) * (r - 1.0)); });
  CHECK_THROWS_AS(equation_residual(bump, prob, prob.grid), side_condition_error);
  CHECK_THROWS_AS(equation_residual(RadialProfile::power(-0.5), prob, prob.grid), side_condition_error);
}

TEST_CASE("source term") {
  const auto prob = closed_case();
  const auto P = source_P(sqrt_x, prob, prob.grid);
  for (double t : {1e-5, 1e-2, 0.7, 30.0}) CHECK_THAT(P(t), WithinRel(P_exact(t), 1e-6));

  // against centered differences of L on a problem with no closed form
  GurkaProblem g;
  g.q = ExponentSpec::variable(RadialProfile::custom("q", [](double r) { return 2.0 + r / (1.0 + r); }));
  g.omega2 = RadialProfile::exponential(-1.0) * RadialProfile::power(-0.5);
  g.grid = log_grid(0.05, 5.0, 12);
  const auto y = RadialProfile::power(0.7);
  const auto Pn = source_P(y, g, g.grid);
  for (double t : {g.grid[2], g.grid[6], g.grid[9]}) {
    const double h = 1e-4 * t;
    const double fd = -(tail_norm_L(t + h, g.omega2, y, g) - tail_norm_L(t - h, g.omega2, y, g)) / (2.0 * h);
    CHECK_THAT(Pn(t), WithinRel(fd, 1e-4));
  }

  GurkaProblem zero = closed_case();
  zero.omega2 = RadialProfile::constant(0.0);
  const auto P0 = source_P(sqrt_x, zero, zero.grid);
  CHECK(P0(1.0) == 0.0);

  GurkaProblem integrable = closed_case();
  integrable.omega2 = RadialProfile::exponential(-2.0);
  integrable.grid = log_grid(1e-3, 10.0, 40);
  const auto Pc = source_P(RadialProfile::constant(1.0), integrable, integrable.grid);
  for (double t : integrable.grid) CHECK(Pc(t) >= 0.0);
}

TEST_CASE("iteration with no source is one step") {
  auto prob = closed_case();
  auto st = picard_iterate(RadialProfile::power(1.0, 3.0), prob, sqrt_x, RadialProfile::constant(0.0), 10);
  CHECK(st.converged);
  CHECK(st.iteration == 2);
  for (std::size_t i = 0; i < prob.grid.size(); ++i) CHECK_THAT(st.values[i], WithinRel(prob.grid[i], 1e-12));
}

TEST_CASE("closed-form iteration from 4x") {
  const auto prob = closed_case();
  auto st = picard_iterate(RadialProfile::power(1.0, 4.0), prob, sqrt_x, P_exact, 50);
  CHECK(st.iteration == 50);
  CHECK(st.max_decrease_violation <= 1e-9);
  // every node follows the scalar recursion for the slope
  const double c50 = scalar_iterate(4.0, 50);
  for (std::size_t i = 0; i < prob.grid.size(); i += 17) CHECK_THAT(st.values[i] / prob.grid[i], WithinRel(c50, 1e-9));
  // step sizes grow at first (the slope map has derivative > 1 near c = 4) and contract near c = 2
  for (std::size_t n = 30; n < st.max_change.size(); ++n) CHECK(st.max_change[n] <= st.max_change[n - 1]);

  auto longer = picard_iterate(RadialProfile::power(1.0, 4.0), prob, sqrt_x, P_exact, 200, 1e-13);
  CHECK(longer.converged);
  double worst = 0.0;
  for (std::size_t i = 0; i < prob.grid.size(); ++i)
    worst = std::max(worst, std::abs(longer.values[i] / (2.0 * prob.grid[i]) - 1.0));
  CHECK(worst <= 1e-10);

  // fixed-point and differential consistency of the limit
  CHECK(longer.residual <= 1e-10);
  const double pc = prob.pc();
  for (double x : {1e-4, 0.01, 1.0, 20.0}) {
    const double h = 1e-4 * x;
    const double dw = (longer.w(x + h) - longer.w(x - h)) / (2.0 * h);
    const double rhs = 1.0 + pc / prob.lambda * std::pow(longer.w(x), 1.0 / pc + 1.0) * P_exact(x) / std::pow(sqrt_x(x), 1.0 / pc);
    CHECK_THAT(dw, WithinAbs(rhs, 1e-4));
  }
  // and the reconstructed y passes the equation
  const auto y0 = reconstruct_y0(longer.w, 1.0, prob.grid);
  CHECK(equation_residual(y0, prob, prob.grid).residual <= 1e-5);
}

TEST_CASE("iteration below the threshold is rejected") {
  auto prob = closed_case();
  prob.lambda = 1.0;
  CHECK_THROWS_AS(picard_iterate(RadialProfile::power(1.0, 4.0), prob, sqrt_x, P_exact, 50), rejected_seed_error);
  prob.lambda = 2.0;
  // 1.5x is below the fixed point: T(1.5x) > 1.5x
  CHECK_THROWS_AS(picard_iterate(RadialProfile::power(1.0, 1.5), prob, sqrt_x, P_exact, 50), rejected_seed_error);
}

TEST_CASE("reconstruction of y0") {
  const auto grid = log_grid(1e-6, 1e2, 200);
  const auto y1 = reconstruct_y0(RadialProfile::power(1.0), 1.0, grid);
  const auto y2 = reconstruct_y0(RadialProfile::power(1.0, 2.0), 1.0, grid);
  const auto y3 = reconstruct_y0(RadialProfile::constant(3.0), 1.0, grid);
  for (double x : {1e-5, 0.2, 1.0, 7.0, 90.0}) {
    CHECK_THAT(y1(x), WithinRel(x, 1e-10));
    CHECK_THAT(y2(x), WithinRel(std::sqrt(x), 1e-10));
    CHECK_THAT(y3(x), WithinRel(std::exp((x - 1.0) / 3.0), 1e-10));
    CHECK_THAT(y2.derivative(x), WithinRel(0.5 / std::sqrt(x), 1e-10));
  }
  CHECK(y2(1.0) == 1.0);
  CHECK_THROWS_AS(reconstruct_y0(RadialProfile::power(1.0, -1.0), 1.0, grid), domain_error);
  CHECK_THROWS_AS(reconstruct_y0(RadialProfile::power(1.0), 1e3, grid), domain_error);
}

TEST_CASE("threshold estimates") {
  auto prob = closed_case();
  std::vector<RadialProfile> family;
  for (double c = 1.25; c <= 8.0; c += 0.25) family.push_back(RadialProfile::power(1.0, c));
  auto k = compute_k(family, sqrt_x, P_exact, prob);
  // K_c = (sqrt2/2) c^{3/2} / (c - 1), smallest at c = 3
  for (std::size_t m = 0; m < family.size(); ++m) {
    const double c = 1.25 + 0.25 * static_cast<double>(m);
    CHECK_THAT(2.0 * k.member_sup[m], WithinRel(std::sqrt(2.0) / 2.0 * std::pow(c, 1.5) / (c - 1.0), 1e-8));
  }
  CHECK(k.value <= 2.0);
  CHECK_THAT(k.value, WithinRel(std::sqrt(2.0) / 2.0 * std::pow(3.0, 1.5) / 2.0, 1e-8));
  CHECK(family[k.best_member](1.0) == 3.0);

  auto zero = compute_k(family, sqrt_x, RadialProfile::constant(0.0), prob);
  CHECK(zero.value == 0.0);
  CHECK_THROWS_AS(compute_k({RadialProfile::power(1.0)}, sqrt_x, P_exact, prob), domain_error);
}

TEST_CASE("Lemma-type inequality on smooth functions") {
  const auto prob = closed_case();
  const auto u1 = RadialProfile::power(1.0) * RadialProfile::exponential(-1.0);
  const auto u2 = RadialProfile::custom("smooth min(x,1)", [](double x) { return x / std::pow(1.0 + std::pow(x, 8), 0.125); });
  auto rep = verify_lemma1({RadialProfile::constant(0.0), u1, u2}, sqrt_x, prob);
  CHECK(rep.holds);
  CHECK(rep.prefactor == 1.0);
  CHECK(rep.bound == 2.0);
  CHECK(rep.lhs[0] == 0.0);
  CHECK_THAT(rep.ratio[1], WithinRel(std::sqrt(2.0), 1e-8));
  CHECK(rep.ratio[2] <= 2.0);
  CHECK_THROWS_AS(verify_lemma1({RadialProfile::constant(1.0)}, sqrt_x, prob), domain_error);
}

TEST_CASE("outer loop recovers the solution from a wrong y") {
  // lambda = 3: y = x^b solves the equation iff b(1 - b) = 1/9
  auto prob = closed_case();
  prob.lambda = 3.0;
  prob.grid = log_grid(1e-4, 1e2, 80);
  auto rep = solve_gurka(RadialProfile::power(1.0, 4.0), prob, RadialProfile::power(0.6), 60, 200, 1e-11);
  CHECK(rep.outer_converged);
  const double b = (1.0 + std::sqrt(5.0) / 3.0) / 2.0;
  for (double x : {1e-3, 0.5, 10.0}) CHECK_THAT(rep.y0(x), WithinRel(std::pow(x, b), 1e-7));
  CHECK(rep.equation_residual <= 1e-8);
}

TEST_CASE("monotone decrease with a varying omega1") {
  // omega1 = 2 - e^{-x}: omega1(0) = 1, increasing, so the drift term is active
  auto prob = closed_case();
  prob.grid = log_grid(1e-4, 50.0, 400);
  prob.lambda = 3.0;
  prob.omega1 = RadialProfile::custom(
      "2-e^-x", [](double x) { return 2.0 - std::exp(-x); }, [](double x) { return std::exp(-x); });
  const auto P = source_P(sqrt_x, prob, prob.grid);
  auto st = picard_iterate(RadialProfile::power(1.0, 8.0), prob, sqrt_x, P, 400, 1e-12);
  CHECK(st.converged);
  CHECK(st.max_decrease_violation <= 1e-9);
  CHECK(st.residual <= 1e-9);
  // the limit solves the derivative form
  const double pc = prob.pc();
  for (std::size_t i : {80u, 250u, 330u}) {
    // centered differences on the grid
    const double x = prob.grid[i];
    const double dw = (st.values[i + 1] - st.values[i - 1]) / (prob.grid[i + 1] - prob.grid[i - 1]);
    const double rhs = 1.0 + pc * prob.omega1.derivative(x) * st.w(x) / prob.omega1(x) +
                       pc / prob.lambda * std::pow(st.w(x), 1.0 / pc + 1.0) * P(x) / (prob.omega1(x) * std::pow(sqrt_x(x), 1.0 / pc));
    CHECK_THAT(dw, WithinAbs(rhs, 1e-4 * (1.0 + rhs)));
  }
  GurkaProblem bad = prob;
  bad.omega1 = RadialProfile::custom("1-x/200", [](double x) { return 1.0 - x / 200.0; }, [](double) { return -1.0 / 200.0; });
  CHECK_THROWS_AS(picard_iterate(RadialProfile::power(1.0, 8.0), bad, sqrt_x, P), domain_error);
  bad.omega1 = RadialProfile::custom("no derivative", [](double) { return 1.0; });
  CHECK_THROWS_AS(picard_iterate(RadialProfile::power(1.0, 8.0), bad, sqrt_x, P), domain_error);
}
