#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature on (a, b) with
//  - an improper upper limit b = +inf,
//  - integrable power-type endpoint singularities,
//  - user breakpoints where the integrand is not smooth.
//
// Panels that touch an endpoint and shrink below `min_width` are closed with a
// power-law extrapolation g(x) ~ C |x - e|^k fitted from two samples; k <= -1
// means the integral diverges.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "varlp/errors.hpp"

namespace varlp {

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  // R_max: finite stand-in for infinity in grids and tail diagnostics.
  double tail_cutoff = 1e6;
  double min_width = 1e-14;

  // Pure relative tolerance used by the toolkit internals.
  static QuadConfig precise() {
    QuadConfig c;
    c.abs_tol = 0.0;
    c.rel_tol = 1e-12;
    c.max_subdivisions = 4000;
    return c;
  }

  void validate() const {
    if (!(abs_tol >= 0.0) || !(rel_tol > 0.0) || (abs_tol == 0.0 && rel_tol == 0.0))
      throw domain_error("QuadConfig: tolerances must be positive");
    if (max_subdivisions < 1) throw domain_error("QuadConfig: max_subdivisions must be >= 1");
    if (!(min_width > 0.0)) throw domain_error("QuadConfig: min_width must be positive");
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
  bool extrapolated = false;  // an endpoint panel was closed by power-law extrapolation
};

namespace detail {

// QUADPACK qk21 tables, abscissae in decreasing order.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452125, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double magnitude = 0.0;  // integral of |g| over the panel
  bool at_left = false;   // a is an endpoint of the integration range
  bool at_right = false;  // b is an endpoint of the integration range
  bool modelled = false;  // value comes from the endpoint power-law model

  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
double checked_eval(F& g, double x, int& evals) {
  ++evals;
  const double v = g(x);
  if (std::isnan(v)) throw evaluation_error("integrand returned NaN at x = " + std::to_string(x));
  if (std::isinf(v)) throw divergence_error("integrand is infinite at x = " + std::to_string(x), v);
  return v;
}

template <class F>
Panel gauss_kronrod_21(F& g, double a, double b, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked_eval(g, center, evals);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked_eval(g, center - dx, evals);
    f2[j] = checked_eval(g, center + dx, evals);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double scale = std::abs(half);
  resabs *= scale;
  resasc *= scale;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);

  Panel p;
  p.a = a;
  p.b = b;
  p.value = resk * half;
  p.error = err;
  p.magnitude = resabs;
  return p;
}

// Power-law model g ~ C d^k of a panel [a, b] touching an endpoint, where d is
// the distance to that endpoint (`toward_left`: d measured from a). In strict
// mode a local exponent k <= -1 means divergence; otherwise the fit is only
// accepted when it looks like a clean power law.
template <class F>
std::optional<Panel> extrapolate_endpoint(F& g, const Panel& p, bool toward_left, bool strict, int& evals) {
  const double h = p.b - p.a;
  auto at = [&](double d) { return checked_eval(g, toward_left ? p.a + d : p.b - d, evals); };
  const double g1 = at(h);
  const double g2 = at(0.5 * h);
  const double g4 = at(0.25 * h);
  const bool usable = g1 != 0.0 && g2 != 0.0 && g4 != 0.0 && std::signbit(g1) == std::signbit(g2) &&
                      std::signbit(g2) == std::signbit(g4);
  if (!usable) return std::nullopt;

  const double k1 = std::log2(g1 / g2);
  const double k2 = std::log2(g2 / g4);
  if (k1 <= -1.0 + 1e-9 || k2 <= -1.0 + 1e-9) {
    if (strict)
      throw divergence_error("non-integrable endpoint singularity (local exponent " + std::to_string(k2) + ")",
                             std::numeric_limits<double>::infinity());
    return std::nullopt;
  }
  if (!strict && std::abs(k1 - k2) > 1e-3 * (1.0 + std::abs(k2))) return std::nullopt;

  const double whole = h * g1 / (k1 + 1.0);
  const double inner_half = 0.5 * h * g2 / (k2 + 1.0);
  const Panel outer = toward_left ? gauss_kronrod_21(g, p.a + 0.5 * h, p.b, evals)
                                  : gauss_kronrod_21(g, p.a, p.b - 0.5 * h, evals);
  Panel out = p;
  out.value = whole;
  out.error = std::abs(whole - (inner_half + outer.value)) + outer.error;
  return out;
}

template <class F>
QuadResult adaptive_finite(F& g, double a, double b, std::span<const double> breaks, const QuadConfig& cfg) {
  QuadResult res;
  std::vector<double> cuts{a};
  for (double c : breaks)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::priority_queue<Panel> heap;
  std::vector<Panel> closed;
  // a breakpoint a few ulps from an endpoint leaves a sliver the rule cannot
  // resolve; its error is an abscissa-resolution floor, not a convergence target
  double sliver_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gauss_kronrod_21(g, cuts[i], cuts[i + 1], res.evaluations);
    p.at_left = (i == 0);
    p.at_right = (i + 2 == cuts.size());
    const double floor_width = std::max(cfg.min_width, 64.0 * eps * std::max(std::abs(p.a), std::abs(p.b)));
    if (cuts.size() > 2 && p.b - p.a < floor_width) {
      closed.push_back(p);
      sliver_error += p.error;
      continue;
    }
    heap.push(p);
  }

  double magnitude = 0.0;
  auto totals = [&](double& value, double& error) {
    value = 0.0;
    error = 0.0;
    magnitude = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      magnitude += copy.top().magnitude;
      copy.pop();
    }
    for (const auto& p : closed) {
      value += p.value;
      error += p.error;
      magnitude += p.magnitude;
    }
  };

  double value = 0.0, error = 0.0;
  totals(value, error);
  // A cancelling integrand cannot be resolved relative to |value|; the floor
  // is set by the rounding level of the integral of |g|.
  auto tolerance = [&] {
    return std::max({cfg.abs_tol, cfg.rel_tol * std::abs(value), 100.0 * eps * magnitude}) + sliver_error;
  };
  int since_resum = 0;

  while (!heap.empty()) {
    const double tol = tolerance();
    if (error <= tol) break;
    if (res.subdivisions >= cfg.max_subdivisions) {
      throw integration_error("quadrature did not converge after " + std::to_string(res.subdivisions) +
                                  " subdivisions",
                              value, error);
    }
    Panel worst = heap.top();
    heap.pop();
    const double width = worst.b - worst.a;
    const double floor_width = std::max(cfg.min_width, 64.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b)));

    const bool endpoint = worst.at_left || worst.at_right;
    if (0.5 * width < floor_width) {
      Panel fixed = worst;
      if (endpoint) {
        if (auto ex = extrapolate_endpoint(g, worst, worst.at_left, true, res.evaluations)) fixed = *ex;
        res.extrapolated = true;
      }
      closed.push_back(fixed);
      value += fixed.value - worst.value;
      error += fixed.error - worst.error;
      continue;
    }

    // A clean power law at the endpoint is integrated in closed form; if the
    // panel comes back as the worst one it is bisected as usual.
    if (endpoint && !worst.modelled) {
      auto ex = extrapolate_endpoint(g, worst, worst.at_left, false, res.evaluations);
      if (ex && ex->error < worst.error) {
        ex->modelled = true;
        value += ex->value - worst.value;
        error += ex->error - worst.error;
        heap.push(*ex);
        res.extrapolated = true;
        continue;
      }
    }

    const double mid = worst.a + 0.5 * width;
    Panel left = gauss_kronrod_21(g, worst.a, mid, res.evaluations);
    Panel right = gauss_kronrod_21(g, mid, worst.b, res.evaluations);
    left.at_left = worst.at_left;
    right.at_right = worst.at_right;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++res.subdivisions;
    if (++since_resum == 64) {
      totals(value, error);
      since_resum = 0;
    }
  }

  totals(value, error);
  const double tol = tolerance();
  if (error > tol && error > 1e3 * eps * magnitude)
    throw integration_error("quadrature stalled at the minimum panel width", value, error);
  res.value = value;
  res.error = error;
  return res;
}

}  // namespace detail

// Integral of g over (a, b). b may be +infinity; breakpoints inside (a, b)
// become panel boundaries.
template <class F>
QuadResult integrate(F&& g, double a, double b, const QuadConfig& cfg = {}, std::span<const double> breakpoints = {}) {
  cfg.validate();
  if (std::isnan(a) || std::isnan(b) || !std::isfinite(a)) throw domain_error("integrate: invalid limits");
  if (!(a < b)) {
    if (a == b) return {};
    throw domain_error("integrate: requires a < b");
  }
  auto& fn = g;
  if (std::isfinite(b)) {
    // Wide ranges start from geometrically growing panels so that features
    // near a are not missed by the first rule.
    const double h = std::max(1.0, std::abs(a));
    if (b - a <= 16.0 * h) return detail::adaptive_finite(fn, a, b, breakpoints, cfg);
    std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
    for (double d = h; a + d < b; d *= 4.0) cuts.push_back(a + d);
    return detail::adaptive_finite(fn, a, b, cuts, cfg);
  }

  // (a, c] directly, (c, inf) through rho = c + h (1 - v) / v with v in (0, 1]
  // and h = c - a, so that the transition region sits at v of order one.
  // Parametrising by v (rather than u = 1 - v) keeps full resolution near infinity.
  const double h = std::max(1.0, std::abs(a));
  const double c = a + h;
  std::vector<double> near, far;
  for (double x : breakpoints) {
    if (x > a && x < c) near.push_back(x);
    if (x > c && std::isfinite(x)) far.push_back(h / (h + (x - c)));
  }
  const QuadResult head = detail::adaptive_finite(fn, a, c, near, cfg);
  auto mapped = [&](double v) {
    const double rho = c + h * (1.0 - v) / v;
    const double gv = fn(rho);
    return gv == 0.0 ? 0.0 : h * gv / (v * v);
  };
  QuadResult tail;
  try {
    tail = detail::adaptive_finite(mapped, 0.0, 1.0, far, cfg);
  } catch (const divergence_error&) {
    throw;
  } catch (const integration_error& e) {
    throw integration_error(e.what(), head.value + e.partial_value(), head.error + e.error_estimate());
  }
  QuadResult out;
  out.value = head.value + tail.value;
  out.error = head.error + tail.error;
  out.subdivisions = head.subdivisions + tail.subdivisions;
  out.evaluations = head.evaluations + tail.evaluations;
  out.extrapolated = head.extrapolated || tail.extrapolated;
  return out;
}

// As integrate, but a run that stalls or runs out of subdivisions is accepted
// when its error estimate is within `accept_rel` of the value.
template <class F>
QuadResult integrate_relaxed(F&& g, double a, double b, const QuadConfig& cfg = {},
                             std::span<const double> breakpoints = {}, double accept_rel = 1e-8) {
  try {
    return integrate(g, a, b, cfg, breakpoints);
  } catch (const divergence_error&) {
    throw;
  } catch (const integration_error& e) {
    if (std::isfinite(e.partial_value()) && e.error_estimate() <= accept_rel * std::abs(e.partial_value())) {
      QuadResult r;
      r.value = e.partial_value();
      r.error = e.error_estimate();
      return r;
    }
    throw;
  }
}

template <class F>
double integrate_value(F&& g, double a, double b, const QuadConfig& cfg = {}, std::span<const double> breakpoints = {}) {
  return integrate(std::forward<F>(g), a, b, cfg, breakpoints).value;
}

}  // namespace varlp
