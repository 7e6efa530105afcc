#pragma once

// Two-weight criteria for the Hardy and geometric mean operators, their
// power-weight specializations, and the best-constant sandwich bounds.
//
//   A(alpha,p,q) = sup_t V(t)^{alpha/p'} || V(|.|)^{(1-alpha)/p'} ||_{L_{q(.),w}(|x|>t)},
//                  V(t) = int_{|y|<t} v^{-p'}
//   D(s,p,q)     = sup_t |B_t|^{(s-1)/p} || w |B_|.||^{-s/p} G(1/v) ||_{L_{q(.)}(|x|>t)}

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "varlp/core_types.hpp"
#include "varlp/errors.hpp"
#include "varlp/luxemburg.hpp"
#include "varlp/operators.hpp"
#include "varlp/parallel.hpp"

namespace varlp {

struct CriterionOptions {
  double t_lo = 1e-6;
  double t_hi = 1e6;  // R_max
  int t_count = 400;
  bool refine = true;
  NormOptions norm{};
};

struct CriterionReport {
  std::string criterion;
  double value = 0.0;  // +inf when the criterion is infinite
  bool finite = true;
  double argsup_t = 0.0;
  std::vector<double> t_grid;
  std::vector<double> values;
  double parameter = 0.0;  // alpha or s
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double optimizing_parameter_lower = 0.0;
  double optimizing_parameter_upper = 0.0;
  bool tail_warning = false;
  double tail_share = 0.0;
  bool sup_at_grid_edge = false;
  std::vector<std::string> notes;
};

struct ConstantBounds {
  double lower = 0.0;
  double upper = 0.0;
  double lower_parameter = 0.0;  // optimizing alpha or s
  double upper_parameter = 0.0;
  bool bounded = true;  // criterion finite for at least one parameter
  double prefactor = 1.0;
  double range_lo = 0.0;
  double range_hi = 0.0;
  std::string range_note;
  std::vector<double> parameters;
  std::vector<double> criterion_values;
  std::vector<double> lower_terms;
  std::vector<double> upper_terms;
  bool tail_warning = false;
  std::vector<std::string> notes;
};

// (p_hi/q_lo + (q_hi - p_lo)/q_hi)^(2/p_lo), the constant of the mixed-norm
// (Minkowski-type) inequality for variable exponents.
inline double theorem1_factor(double p_lo, double p_hi, double q_lo, double q_hi) {
  if (!(1.0 <= p_lo && p_lo <= p_hi && p_hi <= q_lo && q_lo <= q_hi && std::isfinite(q_hi)))
    throw domain_error("mixed-norm factor needs 1 <= p_lo <= p_hi <= q_lo <= q_hi < inf");
  return std::pow(p_hi / q_lo + (q_hi - p_lo) / q_hi, 2.0 / p_lo);
}

// (p/q_lo + (q_hi - p)/q_hi)^(2/p), the prefactor of the upper constant bounds.
inline double upper_prefactor(double p, double q_lo, double q_hi) {
  if (!(0.0 < p && p <= q_lo && q_lo <= q_hi && std::isfinite(q_hi)))
    throw domain_error("upper prefactor needs 0 < p <= q_lo <= q_hi < inf");
  if (p == q_lo && q_lo == q_hi) return 1.0;
  return std::pow(p / q_lo + (q_hi - p) / q_hi, 2.0 / p);
}

namespace detail {

// Golden-section maximization of f on [a, b].
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
  constexpr double g = 0.6180339887498949;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

struct SupResult {
  double value = 0.0;
  double argsup = 0.0;
  bool finite = true;
  bool at_edge = false;
  bool growing_at_edge = false;
  std::vector<double> t;
  std::vector<double> values;
};

// sup over t of `point(t)`, starting from `grid_values` on the log grid and
// refining around the best node by golden section in ln t.
template <class Point>
SupResult sup_over_t(std::vector<double> grid, std::vector<double> grid_values, Point&& point, bool refine) {
  SupResult s;
  s.t = std::move(grid);
  s.values = std::move(grid_values);
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (std::isnan(s.values[i])) throw numerical_error("criterion value is NaN at t = " + std::to_string(s.t[i]));
    if (std::isinf(s.values[i])) {
      s.value = kInf;
      s.argsup = s.t[i];
      s.finite = false;
      return s;
    }
    if (s.values[i] > s.values[best]) best = i;
  }
  s.value = s.values[best];
  s.argsup = s.t[best];
  const std::size_t last = s.values.size() - 1;
  s.at_edge = best == 0 || best == last;
  if (s.at_edge && s.values.size() > 8 && s.value > 0.0) {
    // log-log slope over the last decade toward the edge; growth like t^-g
    // with g > 1e-3 means the sup is not attained inside (0, inf)
    const double span = std::log(s.t[last] / s.t[0]) / static_cast<double>(last);
    const auto k = std::min<std::size_t>(last, static_cast<std::size_t>(std::ceil(std::log(10.0) / span)));
    const std::size_t inner = best == 0 ? k : last - k;
    if (s.values[inner] > 0.0) {
      const double slope = std::log(s.value / s.values[inner]) / std::abs(std::log(s.t[best] / s.t[inner]));
      s.growing_at_edge = slope > 1e-3;
    } else {
      s.growing_at_edge = true;
    }
  }
  if (refine && s.values.size() >= 3 && s.value > 0.0) {
    const double a = std::log(s.t[best == 0 ? 0 : best - 1]);
    const double b = std::log(s.t[best == last ? last : best + 1]);
    auto [x, fx] = golden_max([&](double lt) { return point(std::exp(lt)); }, a, b);
    if (fx > s.value) {
      s.value = fx;
      s.argsup = std::exp(x);
    }
  }
  return s;
}

inline std::vector<double> criterion_grid(const CriterionOptions& opt) {
  if (!(opt.t_lo > 0.0) || !(opt.t_hi > opt.t_lo) || opt.t_count < 3)
    throw domain_error("criterion grid needs 0 < t_lo < t_hi and at least 3 points");
  return log_grid(opt.t_lo, opt.t_hi, opt.t_count);
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void attach_sup(CriterionReport& r, SupResult&& s) {
  r.value = s.value;
  r.finite = s.finite;
  r.argsup_t = s.argsup;
  r.t_grid = std::move(s.t);
  r.values = std::move(s.values);
  r.sup_at_grid_edge = s.at_edge;
  if (s.finite && s.growing_at_edge) {
    r.finite = false;
    r.notes.push_back("criterion keeps growing at the edge of the t-grid (t = " + fmt(s.argsup) +
                      "); reported as unbounded");
  }
}

inline ExponentSpec::Range global_range(const ExponentSpec& q) { return q.range(0.0, kInf); }

}  // namespace detail

// A(alpha, p, q) for the Hardy operator.
inline CriterionReport criterion_a(const RadialProfile& v, const RadialProfile& w, double p, const ExponentSpec& q,
                                   double alpha, int n, const CriterionOptions& opt = {}) {
  if (!(p > 1.0) || !std::isfinite(p)) throw domain_error("criterion A needs 1 < p < inf");
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("criterion A needs alpha in (0, 1)");
  if (n < 1) throw domain_error("dimension must be >= 1");
  const double pc = conjugate(p);
  CriterionReport r;
  r.criterion = "A";
  r.parameter = r.optimizing_parameter_lower = r.optimizing_parameter_upper = alpha;
  const auto qr = detail::global_range(q);
  if (p > qr.lower) r.notes.push_back("p exceeds ess inf q; outside the hypotheses of the Hardy criterion");

  std::shared_ptr<const BallIntegral> V;
  try {
    V = std::make_shared<const BallIntegral>(n, v.pow(-pc), opt.norm.quad, opt.t_lo * 0.5, opt.t_hi * 2.0);
  } catch (const divergence_error&) {
    r.value = kInf;
    r.finite = false;
    r.lower_bound = r.upper_bound = kInf;
    r.notes.push_back("integral of v^{-p'} diverges on a ball");
    return r;
  }
  const double e_tail = (1.0 - alpha) / pc;
  RadialProfile F = RadialProfile::custom("V^" + detail::fmt(e_tail), [V, e_tail](double rho) {
    return std::pow((*V)(rho), e_tail);
  });
  if (auto pv = v.power_law(); pv && pv->coeff > 0.0 && pv->exponent * -pc + n > 0.0) {
    // V(t) = c t^m exactly, so F is a power law as well
    const PowerLaw vp{std::pow(pv->coeff, -pc), -pc * pv->exponent};
    const double m = vp.exponent + n;
    const double c = vp.coeff * n * unit_ball_volume(n) / m;
    F = RadialProfile::power(m * e_tail, std::pow(c, e_tail));
  }

  const auto grid = detail::criterion_grid(opt);
  const TailNormSweep sweep(F, w, q, RadialDomain::whole_space(n), opt.norm);
  auto point = [&](double t) {
    double Vt;
    try {
      Vt = (*V)(t);
    } catch (const divergence_error&) {
      return kInf;
    }
    if (Vt == 0.0) return 0.0;
    const double N = sweep.at(t);
    if (N == 0.0) return 0.0;
    return std::pow(Vt, alpha / pc) * N;
  };
  std::vector<double> vals(grid.size());
  try {
    std::vector<double> N = sweep.evaluate(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double Vt = (*V)(grid[i]);
      vals[i] = (Vt == 0.0 || N[i] == 0.0) ? 0.0 : std::pow(Vt, alpha / pc) * N[i];
    }
  } catch (const divergence_error&) {
    r.value = kInf;
    r.finite = false;
    r.t_grid = grid;
    r.notes.push_back("integral of v^{-p'} diverges on a ball");
    return r;
  }
  detail::attach_sup(r, detail::sup_over_t(grid, std::move(vals), point, opt.refine));
  if (r.finite && r.value > 0.0) {
    r.tail_share = sweep.tail_share(r.argsup_t);
    r.tail_warning = r.tail_share > 0.01;
    const double pre = p <= qr.lower ? upper_prefactor(p, qr.lower, qr.upper) : kInf;
    r.lower_bound = pc * r.value /
                    ((1.0 - alpha) * std::pow(std::pow(pc / (1.0 - alpha), p) + 1.0 / (alpha * (p - 1.0)), 1.0 / p));
    r.upper_bound = pre * r.value / std::pow(1.0 - alpha, 1.0 / pc);
  } else if (!r.finite) {
    r.lower_bound = kInf;
    r.upper_bound = kInf;
  }
  return r;
}

namespace detail {

// Optimizes the two sandwich expressions over a parameter range (lo, hi).
// `lower_term(x, C)` and `upper_term(x, C)` map a criterion value C at
// parameter x to the corresponding bound; `eval(x)` returns the criterion.
template <class Eval, class Lower, class Upper>
ConstantBounds optimize_bounds(Eval&& eval, Lower&& lower_term, Upper&& upper_term, std::vector<double> params,
                               double lo, double hi, bool log_scale_near_lo) {
  ConstantBounds b;
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  b.parameters = params;
  b.criterion_values.resize(params.size());
  b.lower_terms.resize(params.size());
  b.upper_terms.resize(params.size());
  bool any_finite = false;
  std::size_t il = 0, iu = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const CriterionReport rep = eval(params[i]);
    b.criterion_values[i] = rep.finite ? rep.value : kInf;
    b.tail_warning = b.tail_warning || rep.tail_warning;
    if (rep.finite) {
      any_finite = true;
      b.lower_terms[i] = lower_term(params[i], rep.value);
      b.upper_terms[i] = upper_term(params[i], rep.value);
    } else {
      b.lower_terms[i] = kInf;
      b.upper_terms[i] = kInf;
    }
  }
  if (!any_finite) {
    b.bounded = false;
    b.lower = b.upper = kInf;
    b.notes.push_back("criterion infinite for every parameter tried: unbounded");
    return b;
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (std::isfinite(b.lower_terms[i]) && (!std::isfinite(b.lower_terms[il]) || b.lower_terms[i] > b.lower_terms[il]))
      il = i;
    if (b.upper_terms[i] < b.upper_terms[iu]) iu = i;
  }
  b.lower = b.lower_terms[il];
  b.lower_parameter = params[il];
  b.upper = b.upper_terms[iu];
  b.upper_parameter = params[iu];

  // golden refinement between the neighbours of the best node, in ln(x - lo)
  // near the lower end of the range so that x -> lo+ is resolved
  auto to_x = [&](double u) { return log_scale_near_lo ? lo + std::exp(u) : u; };
  auto to_u = [&](double x) { return log_scale_near_lo ? std::log(x - lo) : x; };
  auto refine = [&](std::size_t i, bool maximize) {
    const double a = to_u(params[i == 0 ? 0 : i - 1]);
    const double c = to_u(params[i + 1 == params.size() ? i : i + 1]);
    if (!(c > a)) return std::pair{params[i], maximize ? b.lower : b.upper};
    auto objective = [&](double u) {
      const double x = to_x(u);
      if (!(x > lo && x < hi) && !(x == hi)) return maximize ? -kInf : -kInf;
      const CriterionReport rep = eval(x);
      if (!rep.finite) return -kInf;
      return maximize ? lower_term(x, rep.value) : -upper_term(x, rep.value);
    };
    auto [u, fu] = golden_max(objective, a, c, 1e-9);
    return std::pair{to_x(u), maximize ? fu : -fu};
  };
  if (std::isfinite(b.lower) && b.lower > 0.0) {
    auto [x, v] = refine(il, true);
    if (v > b.lower) {
      b.lower = v;
      b.lower_parameter = x;
    }
  }
  if (std::isfinite(b.upper) && b.upper > 0.0) {
    auto [x, v] = refine(iu, false);
    if (v < b.upper) {
      b.upper = v;
      b.upper_parameter = x;
    }
  }
  return b;
}

}  // namespace detail

// Sandwich for the best constant of the Hardy inequality.
inline ConstantBounds hardy_constant_bounds(const RadialProfile& v, const RadialProfile& w, double p,
                                            const ExponentSpec& q, int n, const CriterionOptions& opt = {},
                                            std::vector<double> alpha_grid = {}) {
  const auto qr = detail::global_range(q);
  const double pre = upper_prefactor(p, qr.lower, qr.upper);
  const double pc = conjugate(p);
  if (alpha_grid.empty()) {
    for (int k = 1; k <= 19; ++k) alpha_grid.push_back(0.05 * k);
    for (double d : {1e-2, 1e-3, 1e-4}) {
      alpha_grid.push_back(d);
      alpha_grid.push_back(1.0 - d);
    }
  }
  for (double a : alpha_grid)
    if (!(a > 0.0 && a < 1.0)) throw domain_error("alpha grid must lie in (0, 1)");
  auto eval = [&](double a) { return criterion_a(v, w, p, q, a, n, opt); };
  auto lower = [&](double a, double A) {
    return pc * A / ((1.0 - a) * std::pow(std::pow(pc / (1.0 - a), p) + 1.0 / (a * (p - 1.0)), 1.0 / p));
  };
  auto upper = [&](double a, double A) { return pre * A / std::pow(1.0 - a, 1.0 / pc); };
  // alpha is refined on a linear scale; the boundary offsets are grid nodes
  ConstantBounds b = detail::optimize_bounds(eval, lower, upper, alpha_grid, 0.0, 1.0, false);
  b.prefactor = pre;
  b.range_lo = 0.0;
  b.range_hi = 1.0;
  b.range_note = "alpha in (0, 1)";
  return b;
}

// D(s, p, q) for the geometric mean operator.
inline CriterionReport criterion_d(const RadialProfile& v, const RadialProfile& w, double p, const ExponentSpec& q,
                                   double s, int n, const CriterionOptions& opt = {}) {
  if (!(p > 0.0) || !std::isfinite(p)) throw domain_error("criterion D needs 0 < p < inf");
  if (!(s > 1.0) || !std::isfinite(s)) throw domain_error("criterion D needs s > 1");
  if (n < 1) throw domain_error("dimension must be >= 1");
  CriterionReport r;
  r.criterion = "D";
  r.parameter = r.optimizing_parameter_lower = r.optimizing_parameter_upper = s;
  if (!(s < p)) r.notes.push_back("s outside (1, p): evaluated on the extended range s > 1");
  const auto qr = detail::global_range(q);
  if (p > qr.lower) r.notes.push_back("p exceeds ess inf q; outside the hypotheses of the geometric mean criterion");

  const auto inv_v = v.pow(-1.0);
  RadialProfile gm;
  try {
    gm = geometric_mean_profile(inv_v, n, opt.norm.quad);
  } catch (const evaluation_error& e) {
    r.value = kInf;
    r.finite = false;
    r.notes.push_back(e.what());
    return r;
  }
  const double b1 = unit_ball_volume(n);
  const auto ball_factor = RadialProfile::power(-n * s / p, std::pow(b1, -s / p));
  const RadialProfile F = w * ball_factor * gm;

  const auto grid = detail::criterion_grid(opt);
  const TailNormSweep sweep(F, RadialProfile::constant(1.0), q, RadialDomain::whole_space(n), opt.norm);
  auto lead = [&](double t) { return std::pow(ball_volume(n, t), (s - 1.0) / p); };
  auto point = [&](double t) {
    const double N = sweep.at(t);
    return N == 0.0 ? 0.0 : lead(t) * N;
  };
  std::vector<double> vals(grid.size());
  try {
    const auto N = sweep.evaluate(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = N[i] == 0.0 ? 0.0 : lead(grid[i]) * N[i];
  } catch (const evaluation_error& e) {
    r.value = kInf;
    r.finite = false;
    r.t_grid = grid;
    r.notes.push_back(e.what());
    return r;
  }
  detail::attach_sup(r, detail::sup_over_t(grid, std::move(vals), point, opt.refine));
  if (r.finite && r.value > 0.0) {
    r.tail_share = sweep.tail_share(r.argsup_t);
    r.tail_warning = r.tail_share > 0.01;
    const double pre = p <= qr.lower ? upper_prefactor(p, qr.lower, qr.upper) : kInf;
    r.lower_bound = std::exp(s / p) / std::pow(std::exp(s) + 1.0 / (s - 1.0), 1.0 / p) * r.value;
    r.upper_bound = pre * std::exp((s - 1.0) / p) * r.value;
  } else if (!r.finite) {
    r.lower_bound = kInf;
    r.upper_bound = kInf;
  }
  return r;
}

// Sandwich for the best constant of the geometric mean inequality. The
// parameter range is (1, p) when p > 1 and (1, s_max] otherwise.
inline ConstantBounds gmean_constant_bounds(const RadialProfile& v, const RadialProfile& w, double p,
                                            const ExponentSpec& q, int n, const CriterionOptions& opt = {},
                                            std::vector<double> s_grid = {}, double s_max = 9.0) {
  const auto qr = detail::global_range(q);
  const double pre = upper_prefactor(p, qr.lower, qr.upper);
  const bool restricted = p > 1.0;
  const double hi = restricted ? p : s_max;
  if (s_grid.empty()) {
    // log-spaced in s - 1, with the boundary approach points 1 + {1e-4, 1e-3, 1e-2}
    const int count = 48;
    const double top = restricted ? std::log(hi - 1.0) + std::log1p(-1e-3) : std::log(hi - 1.0);
    const double bottom = std::log(1e-4);
    for (int k = 0; k < count; ++k) s_grid.push_back(std::min(hi, 1.0 + std::exp(bottom + (top - bottom) * k / (count - 1))));
    for (double d : {1e-4, 1e-3, 1e-2}) s_grid.push_back(1.0 + d);
  }
  for (double s : s_grid)
    if (!(s > 1.0) || (restricted && !(s < hi)) || (!restricted && s > hi))
      throw domain_error("s grid must lie in the parameter range");
  auto eval = [&](double s) { return criterion_d(v, w, p, q, s, n, opt); };
  auto lower = [&](double s, double D) { return std::exp(s / p) / std::pow(std::exp(s) + 1.0 / (s - 1.0), 1.0 / p) * D; };
  auto upper = [&](double s, double D) { return pre * std::exp((s - 1.0) / p) * D; };
  ConstantBounds b = detail::optimize_bounds(eval, lower, upper, s_grid, 1.0, hi, true);
  b.prefactor = pre;
  b.range_lo = 1.0;
  b.range_hi = hi;
  b.range_note = restricted ? "s in (1, p)" : "s in (1, " + detail::fmt(hi) + "] (p <= 1: extended range s > 1)";
  return b;
}

enum class Balance { literal, dimensional };

struct Corollary1Result {
  bool compatible = false;               // under the selected balance mode
  bool compatible_literal = false;       // gamma + n/q = beta/n + n/p
  bool compatible_dimensional = false;   // gamma + n/q = beta + n/p
  Balance mode = Balance::literal;
  double lower = 0.0;
  double upper = 0.0;
  double lower_argsup_s = 0.0;
  bool sharp = false;  // p == q: the bounds meet
  double sharp_constant = 0.0;
  std::vector<std::string> notes;
};

// Power weights |x|^{gamma q} and |x|^{beta p} with constant exponents.
inline Corollary1Result corollary1_check(double beta, double gamma, double p, double q, int n,
                                         Balance mode = Balance::literal) {
  if (!(0.0 < p && p <= q && std::isfinite(q))) throw domain_error("corollary check needs 0 < p <= q < inf");
  if (n < 1) throw domain_error("dimension must be >= 1");
  Corollary1Result r;
  r.mode = mode;
  const double dn = n;
  const double lhs = gamma + dn / q;
  const double lit = beta / dn + dn / p;
  const double dim = beta + dn / p;
  r.compatible_literal = std::abs(lhs - lit) <= 1e-12 * (1.0 + std::abs(lit));
  r.compatible_dimensional = std::abs(lhs - dim) <= 1e-12 * (1.0 + std::abs(dim));
  r.compatible = mode == Balance::literal ? r.compatible_literal : r.compatible_dimensional;
  if (n > 1 && r.compatible_literal != r.compatible_dimensional)
    r.notes.push_back("literal and dimensional balance conditions disagree for n > 1");

  const double b1 = unit_ball_volume(n);
  const double scale = std::pow(b1, 1.0 / q - 1.0 / p);
  r.upper = scale * std::exp(beta / (dn * dn) + 1.0 / q) / std::pow(dn, 1.0 / q);

  // sup over s > 1 of e^{s/p} (s-1)^{1/p-1/q} / ((s-1) e^s + 1)^{1/p}, in u = ln(s-1)
  auto term = [&](double u) {
    const double sm1 = std::exp(u);
    const double s = 1.0 + sm1;
    const double log_val = s / p + (1.0 / p - 1.0 / q) * u - std::log(sm1 * std::exp(s) + 1.0) / p;
    return log_val;
  };
  double best_u = -30.0, best = term(best_u);
  for (double u = -30.0; u <= 5.0; u += 0.05) {
    const double v = term(u);
    if (v > best) {
      best = v;
      best_u = u;
    }
  }
  auto [u, val] = detail::golden_max(term, best_u - 0.05, best_u + 0.05, 1e-12);
  if (val > best) {
    best = val;
    best_u = u;
  }
  r.lower_argsup_s = 1.0 + std::exp(best_u);
  r.lower = std::pow(p / (dn * q), 1.0 / q) * std::exp(beta / (dn * dn)) * scale * std::exp(best);
  if (p == q) {
    r.sharp = true;
    r.sharp_constant = std::exp(beta / (dn * dn) + 1.0 / p) / std::pow(dn, 1.0 / p);
    r.notes.push_back("p = q: the supremum is approached as s -> 1+ and the bounds coincide");
  }
  return r;
}

struct Corollary2Result {
  CriterionReport report;
  bool condition_holds = false;  // n(s/p - 1) <= beta <= n(1/p - 1/2)
};

namespace detail {

// int_{a < |x| < b} |x|^e dx in R^n
inline double power_shell(int n, double e, double a, double b) {
  if (!(b > a)) return 0.0;
  const double m = e + n;
  const double c = n * unit_ball_volume(n);
  if (std::isinf(b)) {
    if (m >= 0.0) return kInf;
    return c * std::pow(a, m) / -m;
  }
  if (a == 0.0) {
    if (m <= 0.0) return kInf;
    return c * std::pow(b, m) / m;
  }
  if (m == 0.0) return c * std::log(b / a);
  return c * (std::pow(b, m) - std::pow(a, m)) / m;
}

}  // namespace detail

// D'(s,p,q) for v = 1, w = |x|^beta and the exponent equal to 1 on the unit
// ball and 2 outside it.
inline Corollary2Result corollary2_dprime(double beta, double p, double s, int n, const CriterionOptions& opt = {}) {
  if (!(p > 0.0 && p <= 1.0)) throw domain_error("this exponent needs 0 < p <= 1 (p <= q(x) with q = 1 near 0)");
  if (!(s > 1.0 && s <= 1.0 + p / 2.0)) throw domain_error("s must lie in (1, 1 + p/2]");
  if (n < 1) throw domain_error("dimension must be >= 1");
  Corollary2Result out;
  CriterionReport& r = out.report;
  r.criterion = "D'";
  r.parameter = r.optimizing_parameter_lower = r.optimizing_parameter_upper = s;
  const double dn = n;
  out.condition_holds = dn * (s / p - 1.0) <= beta + 1e-12 && beta <= dn * (1.0 / p - 0.5) + 1e-12;
  const double e = beta - dn * s / p;
  const double b1 = unit_ball_volume(n);
  auto point = [&](double t) {
    const double a1 = detail::power_shell(n, e, t, std::max(t, 1.0));
    const double a2 = detail::power_shell(n, 2.0 * e, std::max(t, 1.0), kInf);
    if (!std::isfinite(a1) || !std::isfinite(a2)) return kInf;
    return std::pow(b1, -1.0 / p) * std::pow(t, dn * (s - 1.0) / p) * norm_one_two(a1, a2);
  };
  const auto grid = detail::criterion_grid(opt);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = point(grid[i]);
  detail::attach_sup(r, detail::sup_over_t(grid, std::move(vals), point, opt.refine));
  if (!r.finite && r.notes.empty()) r.notes.push_back("tail integral with exponent 2 diverges");
  if (r.finite) {
    r.lower_bound = std::exp(s / p) / std::pow(std::exp(s) + 1.0 / (s - 1.0), 1.0 / p) * r.value;
    r.upper_bound = upper_prefactor(p, 1.0, 2.0) * std::exp((s - 1.0) / p) * r.value;
  } else {
    r.lower_bound = r.upper_bound = kInf;
  }
  if (!out.condition_holds) r.notes.push_back("beta outside [n(s/p - 1), n(1/p - 1/2)]");
  return out;
}

}  // namespace varlp
