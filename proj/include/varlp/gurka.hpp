#pragma once

// The one-dimensional weighted inequality ||u||_{q(.),w2} <= C ||u'||_{p,w1} on
// (0, inf) and its equivalent nonlinear problem
//
//   L(t, w2, y) - lambda w1(t) y'(t)^{1/p'} = 0,   y > 0, y' > 0,
//   L(t, w, y)  = || w y^{1/p'} ||_{L_{q(.)}(t, inf)},
//
// solved through w = y/y' and the monotone iteration
//
//   w_n(x) = x + p' int_0^x w1'/w1 w_{n-1} + (p'/lambda) int_0^x w_{n-1}^{1/p'+1} P / (w1 y^{1/p'}).

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "varlp/core_types.hpp"
#include "varlp/criteria.hpp"
#include "varlp/errors.hpp"
#include "varlp/luxemburg.hpp"
#include "varlp/parallel.hpp"
#include "varlp/quadrature.hpp"

namespace varlp {

inline std::vector<double> default_gurka_grid(double r_max = 1e2, int count = 200) {
  return log_grid(1e-6, r_max, count);
}

struct GurkaProblem {
  double p = 2.0;
  ExponentSpec q = ExponentSpec::fixed(2.0);
  RadialProfile omega1 = RadialProfile::constant(1.0);
  RadialProfile omega2 = RadialProfile::power(-1.0);
  double lambda = 2.0;
  double anchor = 1.0;
  std::vector<double> grid = default_gurka_grid();
  NormOptions norm{};

  double pc() const { return conjugate(p); }

  void validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) throw domain_error("gurka: p must lie in (1, inf)");
    if (!(lambda > 0.0)) throw domain_error("gurka: lambda must be positive");
    if (!(anchor > 0.0)) throw domain_error("gurka: anchor must be positive");
    if (!omega1.has_derivative()) throw domain_error("gurka: omega1 needs a closed-form derivative");
    if (grid.size() < 3) throw domain_error("gurka: grid needs at least 3 radii");
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (!(grid[i] > 0.0) || (i && !(grid[i] > grid[i - 1])))
        throw domain_error("gurka: grid radii must be positive and increasing");
    const double w0 = omega1(0.0);
    if (!(w0 > 0.0) || !std::isfinite(w0)) throw domain_error("gurka: omega1(0) must be positive and finite");
    for (double t : grid)
      if (omega1(t) < w0 * (1.0 - 1e-14)) throw domain_error("gurka: omega1(t) >= omega1(0) fails at t = " + detail::fmt(t));
  }
};

struct GurkaState {
  RadialProfile w;
  std::vector<double> nodes;
  std::vector<double> values;
  int iteration = 0;
  double max_decrease_violation = 0.0;  // max over iterations and nodes of w_{n+1} - w_n (relative)
  double residual = 0.0;                 // fixed-point residual of the last iterate
  bool converged = false;
  std::vector<double> max_change;  // per iteration
  RadialProfile P;
  RadialProfile y;
};

namespace detail {

inline RadialDomain half_line_from(double t) { return RadialDomain::half_line(t); }

inline RadialProfile lifted(const RadialProfile& omega, const RadialProfile& y, double pc) {
  return omega * y.pow(1.0 / pc);
}

// tabulates positive or identically zero values as a profile
inline RadialProfile tabulated(const std::vector<double>& nodes, const std::vector<double>& values) {
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) return RadialProfile::constant(0.0);
  return RadialProfile::sampled(nodes, values);
}

inline double derivative_at(const RadialProfile& f, double t) {
  if (f.has_derivative()) return f.derivative(t);
  const double h = 1e-5 * t;
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace detail

// L(t, omega, y)
inline double tail_norm_L(double t, const RadialProfile& omega, const RadialProfile& y, const GurkaProblem& prob) {
  if (!(t >= 0.0)) throw domain_error("tail_norm_L: t must be >= 0");
  try {
    return norm(detail::lifted(omega, y, prob.pc()), RadialProfile::constant(1.0), prob.q, detail::half_line_from(t),
                prob.norm)
        .norm;
  } catch (const not_in_space_error&) {
    return kInf;
  }
}

inline std::vector<double> tail_norm_L(const std::vector<double>& t, const RadialProfile& omega, const RadialProfile& y,
                                       const GurkaProblem& prob) {
  const TailNormSweep sweep(detail::lifted(omega, y, prob.pc()), RadialProfile::constant(1.0), prob.q,
                            RadialDomain::half_line(0.0), prob.norm);
  return sweep.evaluate(t);
}

struct ResidualReport {
  double residual = 0.0;  // max |L - lambda w1 y'^{1/p'}| / (1 + L)
  double worst_t = 0.0;
  std::vector<double> nodes;
  std::vector<double> L;
  std::vector<double> rhs;
};

// Residual of the nonlinear equation for a candidate y, with the side
// conditions y > 0, y' > 0 checked on the grid.
inline ResidualReport equation_residual(const RadialProfile& y, const GurkaProblem& prob,
                                        const std::vector<double>& grid) {
  const double pc = prob.pc();
  ResidualReport r;
  r.nodes = grid;
  for (double t : grid) {
    if (!(y(t) > 0.0)) throw side_condition_error("y must be positive (fails at t = " + detail::fmt(t) + ")");
    if (!(detail::derivative_at(y, t) > 0.0))
      throw side_condition_error("y' must be positive (fails at t = " + detail::fmt(t) + ")");
  }
  r.L = tail_norm_L(grid, prob.omega2, y, prob);
  r.rhs.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.rhs[i] = prob.lambda * prob.omega1(grid[i]) * std::pow(detail::derivative_at(y, grid[i]), 1.0 / pc);
    const double e = std::isfinite(r.L[i]) ? std::abs(r.L[i] - r.rhs[i]) / (1.0 + r.L[i]) : kInf;
    if (e > r.residual || std::isinf(e)) {
      r.residual = e;
      r.worst_t = grid[i];
    }
  }
  return r;
}

// P(t) = -dL/dt. Differentiating the unit-modular identity
// int_t^inf (g/L)^{q} = 1 gives -L' = L (g(t)/L)^{q(t)} / int_t^inf q (g/L)^{q},
// which is nonnegative by construction and free of differencing noise.
inline RadialProfile source_P(const RadialProfile& y, const GurkaProblem& prob, const std::vector<double>& grid) {
  const RadialProfile g = detail::lifted(prob.omega2, y, prob.pc());
  const auto L = tail_norm_L(grid, prob.omega2, y, prob);
  std::vector<double> P(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    const double l = L[i];
    if (!std::isfinite(l)) throw numerical_error("source_P: L is infinite at t = " + detail::fmt(t));
    if (l == 0.0) return;
    auto integrand = [&](double x) {
      const double v = detail::weighted_power(g(x), 1.0, l, prob.q(x));
      return v == 0.0 ? 0.0 : prob.q(x) * v;
    };
    const double denom = integrate_relaxed(integrand, t, kInf, prob.norm.quad, g.breakpoints()).value;
    if (!(denom > 0.0)) return;
    P[i] = l * detail::weighted_power(g(t), 1.0, l, prob.q(t)) / denom;
  });
  return detail::tabulated(grid, P);
}

namespace detail {

struct PicardIntegrals {
  std::vector<double> drift;   // p' int_0^x w1'/w1 f
  std::vector<double> source;  // int_0^x f^{1/p'+1} P / (w1 y^{1/p'})
};

inline PicardIntegrals picard_integrals(const RadialProfile& f, const RadialProfile& y, const RadialProfile& P,
                                        const GurkaProblem& prob) {
  const auto& grid = prob.grid;
  const double pc = prob.pc();
  const auto& w1 = prob.omega1;
  auto drift = [&](double t) {
    const double d = w1.derivative(t);
    return d == 0.0 ? 0.0 : d * f(t) / w1(t);
  };
  auto source = [&](double t) {
    const double pt = P(t);
    if (pt == 0.0) return 0.0;
    return std::pow(f(t), 1.0 / pc + 1.0) * pt / (w1(t) * std::pow(y(t), 1.0 / pc));
  };
  std::vector<double> s1(grid.size()), s2(grid.size());
  const QuadConfig cfg = prob.norm.quad;
  parallel_for(grid.size(), [&](std::size_t i) {
    const double a = i == 0 ? 0.0 : grid[i - 1];
    s1[i] = integrate_relaxed(drift, a, grid[i], cfg).value;
    s2[i] = integrate_relaxed(source, a, grid[i], cfg).value;
  });
  PicardIntegrals out;
  out.drift.resize(grid.size());
  out.source.resize(grid.size());
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    c1 += s1[i];
    c2 += s2[i];
    out.drift[i] = pc * c1;
    out.source[i] = c2;
  }
  return out;
}

// one application of the iteration map to f
inline std::vector<double> picard_map(const RadialProfile& f, const RadialProfile& y, const RadialProfile& P,
                                      const GurkaProblem& prob) {
  const auto I = picard_integrals(f, y, P, prob);
  const double k = prob.pc() / prob.lambda;
  std::vector<double> out(prob.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = prob.grid[i] + I.drift[i] + k * I.source[i];
  return out;
}

inline double relative_gap(double next, double prev) { return (next - prev) / std::max(1.0, std::abs(prev)); }

}  // namespace detail

// Monotone iteration from f0 with fixed y and P (P_n = P for every n).
inline GurkaState picard_iterate(const RadialProfile& f0, const GurkaProblem& prob, const RadialProfile& y,
                                 const RadialProfile& P, int max_iter = 50, double tol = 1e-10) {
  prob.validate();
  const auto& grid = prob.grid;
  GurkaState st;
  st.nodes = grid;
  st.P = P;
  st.y = y;
  st.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    st.values[i] = f0(grid[i]);
    if (!(st.values[i] > 0.0)) throw domain_error("picard_iterate: f0 must be positive on the grid");
  }
  st.w = RadialProfile::sampled(grid, st.values);

  // the seed must satisfy f0 >= T f0, the first step of the monotone decrease
  auto next = detail::picard_map(f0, y, P, prob);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (detail::relative_gap(next[i], st.values[i]) > 1e-9)
      throw rejected_seed_error("picard_iterate: the seed fails f0 >= T f0 at x = " + detail::fmt(grid[i]) +
                                " (T f0 = " + detail::fmt(next[i]) + ", f0 = " + detail::fmt(st.values[i]) + ")");

  for (int n = 1; n <= max_iter; ++n) {
    double change = 0.0, violation = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(next[i] > 0.0) || !std::isfinite(next[i]))
        throw numerical_error("picard_iterate: iterate degenerates at x = " + detail::fmt(grid[i]));
      const double gap = detail::relative_gap(next[i], st.values[i]);
      violation = std::max(violation, gap);
      change = std::max(change, std::abs(gap));
    }
    st.max_decrease_violation = std::max(st.max_decrease_violation, violation);
    if (violation > 1e-9)
      throw iteration_fault("picard_iterate: monotone decrease violated by " + detail::fmt(violation) +
                            " at iteration " + std::to_string(n));
    st.values = next;
    st.w = RadialProfile::sampled(grid, st.values);
    st.iteration = n;
    st.max_change.push_back(change);
    next = detail::picard_map(st.w, y, P, prob);
    if (change <= tol) {
      st.converged = true;
      break;
    }
  }
  st.residual = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    st.residual = std::max(st.residual, std::abs(next[i] - st.values[i]) / (1.0 + st.values[i]));
  return st;
}

// y0(x) = exp(int_a^x dt / w(t)); y0(a) = 1 and y0' = y0 / w exactly.
inline RadialProfile reconstruct_y0(const RadialProfile& w, double a, const std::vector<double>& grid,
                                    const QuadConfig& cfg = QuadConfig::precise()) {
  if (grid.size() < 2) throw domain_error("reconstruct_y0: grid needs at least 2 radii");
  if (!(a >= grid.front() && a <= grid.back())) throw domain_error("reconstruct_y0: anchor must lie in the grid range");
  for (double t : grid)
    if (!(w(t) > 0.0)) throw domain_error("reconstruct_y0: w must be positive (fails at t = " + detail::fmt(t) + ")");
  auto inv = [w](double t) { return 1.0 / w(t); };
  struct Table {
    std::vector<double> nodes, I;
  };
  auto tab = std::make_shared<Table>();
  tab->nodes = grid;
  tab->I.resize(grid.size());
  const auto k0 = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), a) - grid.begin()) - 1;
  tab->I[k0] = -integrate_relaxed(inv, grid[k0], a, cfg).value;
  for (std::size_t i = k0 + 1; i < grid.size(); ++i) tab->I[i] = tab->I[i - 1] + integrate_relaxed(inv, grid[i - 1], grid[i], cfg).value;
  for (std::size_t i = k0; i-- > 0;) tab->I[i] = tab->I[i + 1] - integrate_relaxed(inv, grid[i], grid[i + 1], cfg).value;
  auto log_y = [tab, inv, cfg](double x) {
    const auto& nd = tab->nodes;
    if (x <= nd.front()) return tab->I.front() - integrate_relaxed(inv, x, nd.front(), cfg).value;
    const auto k = static_cast<std::size_t>(std::upper_bound(nd.begin(), nd.end(), x) - nd.begin()) - 1;
    return tab->I[k] + (x > nd[k] ? integrate_relaxed(inv, nd[k], x, cfg).value : 0.0);
  };
  return RadialProfile::custom(
      "y0[" + w.label() + "]", [log_y](double x) { return std::exp(log_y(x)); },
      [log_y, w](double x) { return std::exp(log_y(x)) / w(x); });
}

struct SolveReport {
  GurkaState state;
  RadialProfile y0;
  double equation_residual = 0.0;
  int outer_iterations = 0;
  std::vector<double> outer_change;  // max relative change of y between outer rounds
  bool outer_converged = false;
};

// Outer loop for an unknown y: y <- reconstruct(w), P <- source(y), inner iteration.
inline SolveReport solve_gurka(const RadialProfile& f0, const GurkaProblem& prob, RadialProfile y_init,
                               int outer_max = 20, int inner_max = 50, double tol = 1e-8) {
  SolveReport rep;
  RadialProfile y = std::move(y_init);
  std::vector<double> prev_y(prob.grid.size());
  for (std::size_t i = 0; i < prob.grid.size(); ++i) prev_y[i] = y(prob.grid[i]);
  RadialProfile seed = f0;
  for (int k = 1; k <= outer_max; ++k) {
    const RadialProfile P = source_P(y, prob, prob.grid);
    rep.state = picard_iterate(seed, prob, y, P, inner_max, tol);
    rep.y0 = reconstruct_y0(rep.state.w, prob.anchor, prob.grid, prob.norm.quad);
    double change = 0.0;
    std::vector<double> now(prob.grid.size());
    for (std::size_t i = 0; i < prob.grid.size(); ++i) {
      now[i] = rep.y0(prob.grid[i]);
      change = std::max(change, std::abs(now[i] - prev_y[i]) / std::max(1.0, std::abs(prev_y[i])));
    }
    prev_y = now;
    // each evaluation of the exact y0 is a quadrature; the inner rounds use its table
    y = RadialProfile::sampled(prob.grid, now);
    rep.outer_iterations = k;
    rep.outer_change.push_back(change);
    seed = f0;
    if (change <= tol * 100.0) {
      rep.outer_converged = true;
      break;
    }
  }
  rep.equation_residual = equation_residual(rep.y0, prob, prob.grid).residual;
  return rep;
}

struct KEstimate {
  double value = kInf;  // p' times the smallest per-member sup: an upper estimate of K
  std::size_t best_member = 0;
  std::vector<double> member_sup;  // +inf for inadmissible members
  std::vector<std::string> warnings;
  bool anchor_unused = true;
};

inline KEstimate compute_k(const std::vector<RadialProfile>& family, const RadialProfile& y, const RadialProfile& P,
                           const GurkaProblem& prob) {
  prob.validate();
  if (family.empty()) throw domain_error("compute_k: family is empty");
  KEstimate k;
  const double pc = prob.pc();
  for (std::size_t m = 0; m < family.size(); ++m) {
    const auto& f = family[m];
    const auto I = detail::picard_integrals(f, y, P, prob);
    double sup = 0.0;
    bool admissible = true;
    for (std::size_t i = 0; i < prob.grid.size(); ++i) {
      const double x = prob.grid[i];
      const double denom = f(x) - x - I.drift[i];
      if (!(denom > 1e-12 * std::max(1.0, std::abs(f(x))))) {
        admissible = false;
        k.warnings.push_back("member " + std::to_string(m) + " (" + f.label() + ") inadmissible at x = " + detail::fmt(x));
        break;
      }
      sup = std::max(sup, I.source[i] / denom);
    }
    k.member_sup.push_back(admissible ? sup : kInf);
    if (admissible && pc * sup < k.value) {
      k.value = pc * sup;
      k.best_member = m;
    }
  }
  if (!std::isfinite(k.value)) throw domain_error("compute_k: no admissible member in the family");
  return k;
}

struct Lemma1Report {
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> ratio;
  double bound = 0.0;  // lambda * prefactor
  double prefactor = 1.0;
  double y_residual = 0.0;
  bool holds = true;
};

// ||u w2||_{L_q} <= lambda (p/q_lo + (q_hi - p)/q_hi)^{2/p} ||u' w1||_{L_p}
inline Lemma1Report verify_lemma1(const std::vector<RadialProfile>& family, const RadialProfile& y,
                                  const GurkaProblem& prob, double y_tol = 1e-5) {
  prob.validate();
  Lemma1Report rep;
  rep.y_residual = equation_residual(y, prob, prob.grid).residual;
  if (!(rep.y_residual <= y_tol))
    throw domain_error("verify_lemma1: y does not solve the equation (residual " + detail::fmt(rep.y_residual) + ")");
  const auto qr = prob.q.range(0.0, kInf);
  rep.prefactor = theorem1_factor(prob.p, prob.p, qr.lower, qr.upper);
  rep.bound = prob.lambda * rep.prefactor;
  const auto dom = RadialDomain::half_line(0.0);
  for (const auto& u : family) {
    if (std::abs(u(1e-12)) > 1e-8) throw domain_error("verify_lemma1: u(0) must vanish (" + u.label() + ")");
    double lhs;
    try {
      lhs = norm(u, prob.omega2, prob.q, dom, prob.norm).norm;
    } catch (const not_in_space_error&) {
      lhs = kInf;
    }
    const auto du = RadialProfile::custom("u'", [u](double t) { return detail::derivative_at(u, t); });
    const double rhs = norm(du, prob.omega1, ExponentSpec::fixed(prob.p), dom, prob.norm).norm;
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.ratio.push_back(rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInf : 0.0));
    if (lhs > rep.bound * rhs + 1e-8) rep.holds = false;
  }
  return rep;
}

}  // namespace varlp
