#pragma once

// Empirical checks of the inequalities: ratio sups over parametric test
// families (one-sided, "≥-certified" evidence), the mixed-norm inequality on a
// discretized square, and both directions of the ODE / inequality equivalence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "varlp/core_types.hpp"
#include "varlp/criteria.hpp"
#include "varlp/errors.hpp"
#include "varlp/gurka.hpp"
#include "varlp/luxemburg.hpp"
#include "varlp/operators.hpp"
#include "varlp/parallel.hpp"

namespace varlp {

struct TestFamily {
  std::string name;
  std::vector<RadialProfile> members;
  std::vector<std::vector<double>> parameters;
  std::uint64_t seed = 0;

  std::size_t size() const { return members.size(); }

  // r^{-1+delta} on (0,1) with an r^-4 tail: the extremal sequence for the
  // geometric mean inequality as delta -> 0
  static TestFamily knopp(std::vector<double> deltas = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001}) {
    TestFamily f;
    f.name = "knopp";
    for (double d : deltas) {
      if (!(d > 0.0 && d < 1.0)) throw domain_error("knopp family: delta must lie in (0, 1)");
      f.members.push_back(RadialProfile::piecewise({1.0}, {RadialProfile::power(-1.0 + d), RadialProfile::power(-4.0)}));
      f.parameters.push_back({d});
    }
    return f;
  }

  static TestFamily power_cutoff(std::vector<double> exponents, double cutoff = 1.0) {
    TestFamily f;
    f.name = "power-cutoff";
    for (double a : exponents) {
      f.members.push_back(RadialProfile::power_cutoff(a, cutoff));
      f.parameters.push_back({a, cutoff});
    }
    return f;
  }

  static TestFamily exponentials(std::vector<double> rates) {
    TestFamily f;
    f.name = "exponential";
    for (double c : rates) {
      if (!(c > 0.0)) throw domain_error("exponential family: rates must be positive");
      f.members.push_back(RadialProfile::exponential(-c));
      f.parameters.push_back({c});
    }
    return f;
  }

  // r^a (1+r)^{-(a+decay)} exp(s(ln r)) with s piecewise linear through random
  // knot values on [-3, 3] (constant outside); a and the knots are seeded
  static TestFamily random_splines(std::uint64_t seed, int count, double a_lo = -0.5, double a_hi = 1.0,
                                   double decay = 2.5, int knots = 7, double amplitude = 1.0) {
    if (count < 1 || knots < 2) throw domain_error("random spline family: need count >= 1 and knots >= 2");
    TestFamily f;
    f.name = "random-spline";
    f.seed = seed;
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int m = 0; m < count; ++m) {
      const double a = uniform(a_lo, a_hi);
      std::vector<double> vals(static_cast<std::size_t>(knots));
      for (auto& v : vals) v = uniform(-amplitude, amplitude);
      std::vector<double> params = {a, decay};
      params.insert(params.end(), vals.begin(), vals.end());
      const double b = a + decay;
      auto s = [vals, knots](double r) {
        const double L = std::clamp(std::log(r), -3.0, 3.0);
        const double pos = (L + 3.0) / 6.0 * (knots - 1);
        const auto k = std::min(static_cast<std::size_t>(pos), vals.size() - 2);
        const double t = pos - static_cast<double>(k);
        return vals[k] * (1.0 - t) + vals[k + 1] * t;
      };
      std::vector<double> breaks;
      for (int k = 0; k < knots; ++k) breaks.push_back(std::exp(-3.0 + 6.0 * k / (knots - 1)));
      f.members.push_back(RadialProfile::custom(
          "spline#" + std::to_string(m), [a, b, s](double r) { return std::pow(r, a) * std::pow(1.0 + r, -b) * std::exp(s(r)); },
          {}, breaks));
      f.parameters.push_back(params);
    }
    return f;
  }

  // u with u(0) = 0 and closed-form derivatives
  static TestFamily smooth_u() {
    TestFamily f;
    f.name = "smooth-u";
    auto add = [&](std::string label, RadialProfile::Fn u, RadialProfile::Fn du, double param) {
      f.members.push_back(RadialProfile::custom(std::move(label), std::move(u), std::move(du)));
      f.parameters.push_back({param});
    };
    for (double c : {0.25, 1.0, 4.0})
      add("x e^{-cx}", [c](double x) { return x * std::exp(-c * x); },
          [c](double x) { return (1.0 - c * x) * std::exp(-c * x); }, c);
    add("x/(1+x)^2", [](double x) { return x / ((1.0 + x) * (1.0 + x)); },
        [](double x) { return (1.0 - x) / std::pow(1.0 + x, 3); }, 0.0);
    add("x e^{-x^2}", [](double x) { return x * std::exp(-x * x); },
        [](double x) { return (1.0 - 2.0 * x * x) * std::exp(-x * x); }, 0.0);
    for (double k : {2.0, 8.0})
      add("smooth min(x,1)", [k](double x) { return x * std::pow(1.0 + std::pow(x, k), -1.0 / k - 1.0 / k); },
          [k](double x) {
            const double s = 1.0 + std::pow(x, k);
            const double e = -2.0 / k;
            return std::pow(s, e) + x * e * std::pow(s, e - 1.0) * k * std::pow(x, k - 1.0);
          },
          k);
    return f;
  }
};

enum class InequalityKind { hardy, gmean, derivative };

inline std::string to_string(InequalityKind k) {
  switch (k) {
    case InequalityKind::hardy: return "hardy";
    case InequalityKind::gmean: return "gmean";
    case InequalityKind::derivative: return "derivative";
  }
  return "?";
}

struct ConstantEstimate {
  InequalityKind kind = InequalityKind::gmean;
  std::string family;
  double empirical_sup = 0.0;  // a lower estimate of the best constant ("≥-certified")
  std::size_t best_member = 0;
  std::vector<double> best_parameters;
  double theoretical_lower = 0.0;
  double theoretical_upper = kInf;
  bool violation = false;
  std::string details;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> ratios;
  bool unbounded_witness = false;  // RHS = 0 with LHS > 0
  std::vector<std::string> notes;

  std::string verdict() const { return violation ? "violation" : "consistent"; }
};

struct InequalitySetup {
  InequalityKind kind = InequalityKind::gmean;
  int n = 1;
  RadialProfile v = RadialProfile::constant(1.0);  // right weight (omega1 for kind = derivative)
  RadialProfile w = RadialProfile::constant(1.0);  // left weight (omega2 for kind = derivative)
  double p = 1.0;
  ExponentSpec q = ExponentSpec::fixed(1.0);
  double lambda = 0.0;  // kind = derivative: the lambda of a solved equation
  CriterionOptions criteria{};
  // when set, skips the sandwich computation (e.g. when it is already known)
  std::optional<std::pair<double, double>> bounds{};
  // looser than the inner operator quadrature, whose error would otherwise stall the outer one
  NormOptions outer = [] {
    NormOptions o;
    o.quad.rel_tol = 1e-10;
    o.rel_tol = 1e-10;
    return o;
  }();
};

namespace detail {

inline std::pair<double, double> theoretical_bounds(const InequalitySetup& s) {
  if (s.bounds) return *s.bounds;
  const auto qr = s.q.range(0.0, kInf);
  switch (s.kind) {
    case InequalityKind::hardy: {
      const auto b = hardy_constant_bounds(s.v, s.w, s.p, s.q, s.n, s.criteria);
      return {b.lower, b.upper};
    }
    case InequalityKind::gmean: {
      const auto b = gmean_constant_bounds(s.v, s.w, s.p, s.q, s.n, s.criteria);
      return {b.lower, b.upper};
    }
    case InequalityKind::derivative:
      if (!(s.lambda > 0.0)) throw domain_error("derivative estimate needs the lambda of a solved equation");
      return {0.0, s.lambda * theorem1_factor(s.p, s.p, qr.lower, qr.upper)};
  }
  return {0.0, kInf};
}

inline double safe_norm(const RadialProfile& f, const RadialProfile& w, const ExponentSpec& q, const RadialDomain& dom,
                        const NormOptions& opt) {
  try {
    return norm(f, w, q, dom, opt).norm;
  } catch (const not_in_space_error&) {
    return kInf;
  }
}

}  // namespace detail

inline ConstantEstimate estimate_constant(const InequalitySetup& s, const TestFamily& family) {
  if (family.members.empty()) throw domain_error("estimate_constant: family is empty");
  ConstantEstimate est;
  est.kind = s.kind;
  est.family = family.name;
  const auto [lo, hi] = detail::theoretical_bounds(s);
  est.theoretical_lower = lo;
  est.theoretical_upper = hi;
  const std::size_t m = family.members.size();
  est.lhs.assign(m, 0.0);
  est.rhs.assign(m, 0.0);
  std::vector<std::string> skipped(m);
  parallel_for(m, [&](std::size_t i) {
    const auto& f = family.members[i];
    const bool derivative = s.kind == InequalityKind::derivative;
    const auto dom = derivative ? RadialDomain::half_line(0.0) : RadialDomain::whole_space(s.n);
    try {
      if (derivative) {
        const auto du = RadialProfile::custom("u'", [f](double t) { return detail::derivative_at(f, t); });
        est.rhs[i] = detail::safe_norm(du, s.v, ExponentSpec::fixed(s.p), dom, s.outer);
      } else {
        est.rhs[i] = detail::safe_norm(f, s.v, ExponentSpec::fixed(s.p), dom, s.outer);
      }
      if (!std::isfinite(est.rhs[i])) {
        skipped[i] = "not in the right-hand space";
        return;
      }
      if (derivative) {
        est.lhs[i] = detail::safe_norm(f, s.w, s.q, dom, s.outer);
      } else {
        const RadialProfile Tf = s.kind == InequalityKind::hardy ? hardy_profile(f, s.n) : geometric_mean_profile(f, s.n);
        est.lhs[i] = detail::safe_norm(Tf, s.w, s.q, dom, s.outer);
      }
    } catch (const divergence_error&) {
      est.lhs[i] = kInf;
    } catch (const std::exception& e) {
      skipped[i] = e.what();
    }
  });
  est.ratios.assign(m, 0.0);
  bool any = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (!skipped[i].empty()) {
      est.notes.push_back("member " + std::to_string(i) + " skipped: " + skipped[i]);
      continue;
    }
    if (est.rhs[i] == 0.0) {
      est.ratios[i] = est.lhs[i] > 0.0 ? kInf : 0.0;
      if (est.lhs[i] > 0.0) est.unbounded_witness = true;
    } else {
      est.ratios[i] = est.lhs[i] / est.rhs[i];
    }
    if (!any || est.ratios[i] > est.empirical_sup) {
      est.empirical_sup = est.ratios[i];
      est.best_member = i;
      any = true;
    }
  }
  if (!any) throw domain_error("estimate_constant: no family member could be evaluated");
  est.best_parameters = family.parameters.empty() ? std::vector<double>{} : family.parameters[est.best_member];
  if (est.empirical_sup > est.theoretical_upper * (1.0 + 1e-6)) {
    est.violation = true;
    est.details = "member " + std::to_string(est.best_member) + " (" + family.members[est.best_member].label() +
                  ") has ratio " + detail::fmt(est.empirical_sup) + " above the upper bound " +
                  detail::fmt(est.theoretical_upper);
  }
  est.notes.push_back("empirical sup over a finite family: a lower estimate of the best constant (≥-certified)");
  return est;
}

struct MixedNormReport {
  int nx = 0, ny = 0;
  double lhs = 0.0;  // || ||f||_{p(.), x} ||_{q(.), y}
  double rhs = 0.0;  // || ||f||_{q(.), y} ||_{p(.), x}
  double factor = 1.0;
  double ratio = 0.0;
  bool holds = true;
  double p_lo = 0.0, p_hi = 0.0, q_lo = 0.0, q_hi = 0.0;
};

// Mixed-norm inequality on [0,1]^2 with midpoint nodes; p acts in x and q in y.
inline MixedNormReport verify_theorem1(const std::function<double(double, double)>& f, const ExponentSpec& p,
                                       const ExponentSpec& q, int nx = 64, int ny = 64) {
  if (nx < 1 || ny < 1) throw domain_error("verify_theorem1: grid sizes must be positive");
  MixedNormReport rep;
  rep.nx = nx;
  rep.ny = ny;
  std::vector<double> xs(static_cast<std::size_t>(nx)), ys(static_cast<std::size_t>(ny)), px(xs.size()), qy(ys.size());
  for (int i = 0; i < nx; ++i) {
    xs[i] = (i + 0.5) / nx;
    px[i] = p(xs[i]);
  }
  for (int j = 0; j < ny; ++j) {
    ys[j] = (j + 0.5) / ny;
    qy[j] = q(ys[j]);
  }
  rep.p_lo = *std::min_element(px.begin(), px.end());
  rep.p_hi = *std::max_element(px.begin(), px.end());
  rep.q_lo = *std::min_element(qy.begin(), qy.end());
  rep.q_hi = *std::max_element(qy.begin(), qy.end());
  if (!(rep.p_lo >= 1.0) || !(rep.p_hi <= rep.q_lo))
    throw domain_error("verify_theorem1: needs 1 <= p(x) <= q(y) on the sample grids");
  rep.factor = theorem1_factor(rep.p_lo, rep.p_hi, rep.q_lo, rep.q_hi);
  const std::vector<double> mx(xs.size(), 1.0 / nx), my(ys.size(), 1.0 / ny);

  std::vector<double> inner_lhs(ys.size()), inner_rhs(xs.size());
  parallel_for(ys.size(), [&](std::size_t j) {
    std::vector<double> col(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) col[i] = f(xs[i], ys[j]);
    inner_lhs[j] = norm_discrete(col, mx, px).norm;
  });
  parallel_for(xs.size(), [&](std::size_t i) {
    std::vector<double> row(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) row[j] = f(xs[i], ys[j]);
    inner_rhs[i] = norm_discrete(row, my, qy).norm;
  });
  rep.lhs = norm_discrete(inner_lhs, my, qy).norm;
  rep.rhs = norm_discrete(inner_rhs, mx, px).norm;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  rep.holds = rep.lhs <= rep.factor * rep.rhs * (1.0 + 1e-12) + 1e-300;
  return rep;
}

struct Theorem4Options {
  RadialProfile y_start = RadialProfile::power(0.5);
  RadialProfile f0 = RadialProfile::power(1.0, 4.0);
  std::vector<RadialProfile> k_family{};  // defaults to {c x : c = 1.25, 1.5, ..., 8}
  TestFamily u_family = TestFamily::smooth_u();
  int outer_max = 20;
  int inner_max = 400;
  double tol = 1e-10;
  double residual_tol = 1e-5;
};

struct Theorem4Report {
  double k_estimate = kInf;
  double lambda = 0.0;
  bool lambda_above_k = false;
  bool solver_ok = false;
  std::string solver_message;
  double equation_residual = kInf;
  int outer_iterations = 0;
  bool solution_direction = false;    // solved y0 passes the equation (b => a)
  bool inequality_direction = false;  // the inequality holds with C0 <= lambda * factor (a => b)
  std::optional<ConstantEstimate> estimate;
  std::vector<std::string> notes;

  bool passed() const { return solution_direction && inequality_direction; }
};

inline Theorem4Report theorem4_demo(const GurkaProblem& prob, Theorem4Options opt = {}) {
  prob.validate();
  Theorem4Report rep;
  rep.lambda = prob.lambda;
  if (opt.k_family.empty())
    for (double c = 1.25; c <= 8.0; c += 0.25) opt.k_family.push_back(RadialProfile::power(1.0, c));

  try {
    const auto P = source_P(opt.y_start, prob, prob.grid);
    rep.k_estimate = compute_k(opt.k_family, opt.y_start, P, prob).value;
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("threshold estimate failed: ") + e.what());
  }
  rep.lambda_above_k = prob.lambda > rep.k_estimate;
  if (!rep.lambda_above_k)
    rep.notes.push_back("lambda = " + detail::fmt(prob.lambda) + " does not exceed the threshold estimate " +
                        detail::fmt(rep.k_estimate));

  // solve the equation
  RadialProfile y0;
  try {
    auto sol = solve_gurka(opt.f0, prob, opt.y_start, opt.outer_max, opt.inner_max, opt.tol);
    y0 = sol.y0;
    rep.equation_residual = sol.equation_residual;
    rep.outer_iterations = sol.outer_iterations;
    rep.solver_ok = true;
  } catch (const std::exception& e) {
    rep.solver_message = e.what();
    rep.notes.push_back(std::string("solver failed: ") + e.what());
    return rep;
  }
  rep.solution_direction = rep.equation_residual <= opt.residual_tol;
  if (!rep.solution_direction)
    rep.notes.push_back("reconstructed y0 leaves residual " + detail::fmt(rep.equation_residual));

  // the inequality with the constant lambda * factor
  InequalitySetup s;
  s.kind = InequalityKind::derivative;
  s.p = prob.p;
  s.q = prob.q;
  s.v = prob.omega1;
  s.w = prob.omega2;
  s.lambda = prob.lambda;
  rep.estimate = estimate_constant(s, opt.u_family);
  rep.inequality_direction = !rep.estimate->violation;
  return rep;
}

}  // namespace varlp
