#pragma once

// Modular  rho(lambda) = int (|f| w / lambda)^p(|x|) dx  and the Luxemburg norm
// inf{lambda > 0 : rho(lambda) <= 1}.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "varlp/core_types.hpp"
#include "varlp/errors.hpp"
#include "varlp/parallel.hpp"
#include "varlp/quadrature.hpp"

namespace varlp {

enum class NormMethod { bisection, cardano, constant_p, transcendental };

inline const char* to_string(NormMethod m) {
  switch (m) {
    case NormMethod::bisection: return "bisection";
    case NormMethod::cardano: return "cardano";
    case NormMethod::constant_p: return "constant-p";
    case NormMethod::transcendental: return "transcendental";
  }
  return "unknown";
}

struct LuxemburgResult {
  double norm = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double modular_at_norm = 0.0;
  int iterations = 0;
  NormMethod method = NormMethod::bisection;
  // Share of the modular at the norm coming from radii beyond r_max.
  double tail_share = 0.0;
  bool tail_warning = false;
};

struct NormOptions {
  QuadConfig quad = QuadConfig::precise();
  double rel_tol = 1e-12;
  double lambda_cap = 1e12;
  bool fast_paths = true;
  int max_iterations = 400;
};

namespace detail {

inline std::vector<double> merged_breaks(std::initializer_list<std::span<const double>> lists) {
  std::vector<double> out;
  for (auto l : lists) out.insert(out.end(), l.begin(), l.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// (|f| w)^p, guarded so that a zero base never multiplies an infinite weight.
inline double weighted_power(double f, double w, double lambda, double p) {
  const double base = std::abs(f) * w / lambda;
  if (base == 0.0) return 0.0;
  return std::pow(base, p);
}

}  // namespace detail

// int over dom of (|f| w / lambda)^p. Returns +inf when the integral diverges.
inline double modular(const RadialProfile& f, const RadialProfile& w, const ExponentSpec& p, double lambda,
                      const RadialDomain& dom, const QuadConfig& quad = QuadConfig::precise()) {
  if (!(lambda > 0.0)) throw domain_error("modular: lambda must be positive");
  dom.validate();
  const auto breaks = detail::merged_breaks({f.breakpoints(), w.breakpoints(), p.profile().breakpoints()});
  auto integrand = [&](double rho) {
    const double v = detail::weighted_power(f(rho), w(rho), lambda, p(rho));
    return v == 0.0 ? 0.0 : v * dom.density(rho);
  };
  try {
    return integrate_relaxed(integrand, dom.inner, dom.outer, quad, breaks).value;
  } catch (const divergence_error&) {
    return kInf;
  }
}

// lambda^3 - a1 lambda - a2 = 0: the norm for an exponent equal to 2 on a set
// carrying a1 = int f^2 and to 3 on its complement carrying a2 = int |f|^3.
inline double norm_two_valued(double a1, double a2) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0)) throw domain_error("norm_two_valued: a1 and a2 must be >= 0");
  if (a1 == 0.0 && a2 == 0.0) return 0.0;
  const double disc = a2 * a2 / 4.0 - a1 * a1 * a1 / 27.0;
  if (disc > 0.0) {
    // one real root; the second cube root equals a1 / (3u)
    const double u = std::cbrt(a2 / 2.0 + std::sqrt(disc));
    return u + a1 / (3.0 * u);
  }
  if (disc == 0.0) return 2.0 * std::cbrt(a2 / 2.0);
  // three real roots: Newton from 2 sqrt(a1/3), which lies right of the
  // largest root on the convex branch, decreases monotonically onto it.
  double x = 2.0 * std::sqrt(a1 / 3.0);
  for (int i = 0; i < 200; ++i) {
    const double c = x * x * x - a1 * x - a2;
    const double dc = 3.0 * x * x - a1;
    if (c <= 0.0 || dc <= 0.0) break;
    const double nx = x - c / dc;
    if (!(nx < x)) break;
    x = nx;
  }
  return x;
}

// lambda^2 - a1 lambda - a2 = 0: exponent 1 on a set carrying a1 = int |f|,
// exponent 2 on its complement carrying a2 = int f^2.
inline double norm_one_two(double a1, double a2) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0)) throw domain_error("norm_one_two: a1 and a2 must be >= 0");
  return 0.5 * a1 + std::sqrt(0.25 * a1 * a1 + a2);
}

namespace detail {

// Infimum of {lambda : M(lambda) <= 1} for a nonincreasing M with values in
// [0, inf]. Bracketing by doubling/halving from 1, then regula falsi (Illinois)
// on ln M against ln lambda, with bisection whenever M is infinite.
template <class Modular>
LuxemburgResult solve_norm(Modular&& M, const NormOptions& opt) {
  LuxemburgResult r;
  r.method = NormMethod::bisection;
  double m1 = M(1.0);
  ++r.iterations;
  if (m1 == 0.0) {
    r.norm = 0.0;
    return r;
  }
  double lo, hi, mlo, mhi;
  if (m1 <= 1.0) {
    hi = 1.0;
    mhi = m1;
    lo = 0.5;
    mlo = M(lo);
    ++r.iterations;
    // tiny norms are legitimate (e.g. far tails of a decaying function), so
    // the downward search accelerates and stops only near the double range
    double step = 0.5;
    while (mlo <= 1.0) {
      if (mlo == 0.0 || lo < 1e-280) {
        r.norm = 0.0;
        r.bracket_hi = lo;
        r.modular_at_norm = mlo;
        return r;
      }
      hi = lo;
      mhi = mlo;
      lo *= step;
      step = std::max(step * step, 1e-16);
      mlo = M(lo);
      ++r.iterations;
    }
  } else {
    lo = 1.0;
    mlo = m1;
    hi = 2.0;
    mhi = M(hi);
    ++r.iterations;
    while (mhi > 1.0) {
      if (hi > opt.lambda_cap)
        throw not_in_space_error("norm: modular exceeds one for every lambda up to " + std::to_string(opt.lambda_cap));
      lo = hi;
      mlo = mhi;
      hi *= 2.0;
      mhi = M(hi);
      ++r.iterations;
    }
  }

  double x0 = std::log(lo), x1 = std::log(hi);
  double f0 = std::isfinite(mlo) ? std::log(mlo) : kInf;  // > 0
  double f1 = std::log(mhi);                              // <= 0, may be -inf only if mhi == 0
  int side = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (f1 == 0.0) break;
    if (x1 - x0 <= opt.rel_tol) break;
    double x;
    if (std::isfinite(f0) && std::isfinite(f1)) {
      x = x1 - f1 * (x1 - x0) / (f1 - f0);
      const double margin = 0.01 * (x1 - x0);
      if (!(x > x0 + margin && x < x1 - margin)) x = 0.5 * (x0 + x1);
    } else {
      x = 0.5 * (x0 + x1);
    }
    const double mx = M(std::exp(x));
    ++r.iterations;
    const double fx = std::isfinite(mx) ? (mx > 0.0 ? std::log(mx) : -kInf) : kInf;
    if (std::abs(fx) <= 1e-13) {
      x0 = x1 = x;
      mhi = mx;
      break;
    }
    if (fx > 0.0) {
      x0 = x;
      f0 = fx;
      if (side == -1 && std::isfinite(f1)) f1 *= 0.5;
      side = -1;
    } else {
      x1 = x;
      f1 = fx;
      mhi = mx;
      if (side == 1 && std::isfinite(f0)) f0 *= 0.5;
      side = 1;
    }
  }
  r.bracket_lo = std::exp(x0);
  r.bracket_hi = std::exp(x1);
  r.norm = r.bracket_hi;
  r.modular_at_norm = mhi;
  return r;
}

// mu^a ln mu = k for mu > 1 (a > 0, k > 0); the left side increases from 0.
inline double solve_power_log(double a, double k) {
  double lo = 1.0, hi = 2.0;
  while (std::pow(hi, a) * std::log(hi) < k) {
    lo = hi;
    hi *= 2.0;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double g = std::pow(x, a) * std::log(x) - k;
    if (g > 0.0) hi = x; else lo = x;
    const double dg = std::pow(x, a - 1.0) * (a * std::log(x) + 1.0);
    double nx = x - g / dg;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 4e-16 * x) {
      x = nx;
      break;
    }
    x = nx;
  }
  return x;
}

inline bool is_const(const RadialProfile& g) { return g.kind() == ProfileKind::constant; }

}  // namespace detail

// Integral of (|f| w)^p over dom, p constant, with the divergence sentinel.
inline double power_integral(const RadialProfile& f, const RadialProfile& w, double p, const RadialDomain& dom,
                             const QuadConfig& quad) {
  return modular(f, w, ExponentSpec::fixed(p), 1.0, dom, quad);
}

inline double tail_modular_share(const RadialProfile& f, const RadialProfile& w, const ExponentSpec& p,
                                 double lambda, const RadialDomain& dom, const QuadConfig& quad, double total) {
  if (!(dom.outer > dom.r_max) || !(dom.r_max > dom.inner) || !(total > 0.0) || !std::isfinite(total)) return 0.0;
  RadialDomain far = dom;
  far.inner = dom.r_max;
  const double t = modular(f, w, p, lambda, far, quad);
  return std::isfinite(t) ? t / total : 1.0;
}

// Luxemburg norm of f with weight w and exponent p over dom.
inline LuxemburgResult norm(const RadialProfile& f, const RadialProfile& w, const ExponentSpec& p,
                            const RadialDomain& dom, const NormOptions& opt = {}) {
  dom.validate();
  LuxemburgResult r;
  auto finish = [&](LuxemburgResult& res) {
    if (res.norm > 0.0) {
      res.tail_share = tail_modular_share(f, w, p, res.norm, dom, opt.quad, res.modular_at_norm);
      res.tail_warning = res.tail_share > 0.01;
    }
    return res;
  };

  if (opt.fast_paths && p.is_constant()) {
    const double q = p.constant_value();
    const double I = power_integral(f, w, q, dom, opt.quad);
    if (!std::isfinite(I)) throw not_in_space_error("norm: integral of (|f| w)^p diverges");
    r.method = NormMethod::constant_p;
    r.norm = std::pow(I, 1.0 / q);
    r.bracket_lo = r.bracket_hi = r.norm;
    r.modular_at_norm = r.norm > 0.0 ? 1.0 : 0.0;
    r.iterations = 1;
    return finish(r);
  }

  if (opt.fast_paths && p.profile().kind() == ProfileKind::two_step) {
    const auto prm = p.profile().parameters();
    const double inside = prm[0], outside = prm[1], r0 = prm[2];
    const bool two_three = (inside == 2.0 && outside == 3.0) || (inside == 3.0 && outside == 2.0);
    const bool one_two = (inside == 1.0 && outside == 2.0) || (inside == 2.0 && outside == 1.0);
    if (two_three || one_two) {
      double lower_part = 0.0, upper_part = 0.0;  // contributions of the smaller / larger exponent
      auto piece = [&](double a, double b, double e) {
        if (!(b > a)) return 0.0;
        RadialDomain d = dom;
        d.inner = a;
        d.outer = b;
        return power_integral(f, w, e, d, opt.quad);
      };
      const double split = std::clamp(r0, dom.inner, dom.outer);
      const double in_val = piece(dom.inner, split, inside);
      const double out_val = piece(split, dom.outer, outside);
      if (inside < outside) {
        lower_part = in_val;
        upper_part = out_val;
      } else {
        lower_part = out_val;
        upper_part = in_val;
      }
      if (!std::isfinite(lower_part) || !std::isfinite(upper_part))
        throw not_in_space_error("norm: modular diverges for every lambda");
      r.method = NormMethod::cardano;
      r.norm = two_three ? norm_two_valued(lower_part, upper_part) : norm_one_two(lower_part, upper_part);
      r.bracket_lo = r.bracket_hi = r.norm;
      r.modular_at_norm = r.norm > 0.0 ? modular(f, w, p, r.norm, dom, opt.quad) : 0.0;
      r.iterations = 1;
      return finish(r);
    }
  }

  // exponent p(x) = x with constant |f| w on (a, inf), a > 0:
  // modular = k (c/lambda)^a / ln(lambda/c), so mu = lambda/c solves mu^a ln mu = k.
  if (opt.fast_paths && p.profile().kind() == ProfileKind::linear && detail::is_const(f) && detail::is_const(w) &&
      std::isinf(dom.outer) && dom.inner > 0.0 &&
      (dom.measure == Measure::interval || dom.dimension == 1)) {
    const double c = std::abs(f(1.0)) * w(1.0);
    if (c == 0.0) return r;
    const double k = dom.density(1.0);
    const double mu = detail::solve_power_log(dom.inner, k);
    r.method = NormMethod::transcendental;
    r.norm = c * mu;
    r.bracket_lo = r.bracket_hi = r.norm;
    r.modular_at_norm = k * std::pow(mu, -dom.inner) / std::log(mu);
    r.iterations = 1;
    return finish(r);
  }

  auto M = [&](double lambda) { return modular(f, w, p, lambda, dom, opt.quad); };
  r = detail::solve_norm(M, opt);
  return finish(r);
}

// Luxemburg norm of a finite sequence: sum_i mass_i (|value_i| / lambda)^exponent_i.
inline LuxemburgResult norm_discrete(std::span<const double> values, std::span<const double> mass,
                                     std::span<const double> exponents, const NormOptions& opt = {}) {
  if (values.size() != mass.size() || values.size() != exponents.size())
    throw domain_error("norm_discrete: sizes differ");
  for (double e : exponents)
    if (!(e > 0.0) || !std::isfinite(e)) throw domain_error("norm_discrete: exponents must be positive and finite");
  const bool constant =
      !exponents.empty() && std::all_of(exponents.begin(), exponents.end(), [&](double e) { return e == exponents[0]; });
  if (opt.fast_paths && constant) {
    const double q = exponents[0];
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] != 0.0) s += mass[i] * std::pow(std::abs(values[i]), q);
    LuxemburgResult r;
    r.method = NormMethod::constant_p;
    r.norm = std::pow(s, 1.0 / q);
    r.bracket_lo = r.bracket_hi = r.norm;
    r.modular_at_norm = r.norm > 0.0 ? 1.0 : 0.0;
    r.iterations = 1;
    return r;
  }
  auto M = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] != 0.0) s += mass[i] * std::pow(std::abs(values[i]) / lambda, exponents[i]);
    return s;
  };
  return detail::solve_norm(M, opt);
}

// Norms of a fixed function over the tails {|x| > t} for many t. With a
// constant exponent the tail integrals are accumulated from the right, so a
// whole sweep costs one pass of quadrature.
class TailNormSweep {
 public:
  TailNormSweep(RadialProfile g, RadialProfile w, ExponentSpec q, RadialDomain dom, NormOptions opt = {})
      : g_(std::move(g)), w_(std::move(w)), q_(std::move(q)), dom_(std::move(dom)), opt_(std::move(opt)) {
    breaks_ = detail::merged_breaks({g_.breakpoints(), w_.breakpoints(), q_.profile().breakpoints()});
  }

  // Norms at increasing radii t_0 < t_1 < ...; +inf entries mark divergence.
  std::vector<double> evaluate(std::span<const double> t) const {
    std::vector<double> out(t.size(), kInf);
    if (t.empty()) return out;
    if (!q_.is_constant()) {
      parallel_for(t.size(), [&](std::size_t i) { out[i] = at(t[i]); });
      return out;
    }
    const double e = q_.constant_value();
    std::vector<double> seg(t.size());
    parallel_for(t.size(), [&](std::size_t i) {
      seg[i] = i + 1 == t.size() ? segment(t[i], dom_.outer, e) : segment(t[i], t[i + 1], e);
    });
    double acc = 0.0;
    for (std::size_t i = t.size(); i-- > 0;) {
      acc += seg[i];
      out[i] = root(acc, e);
    }
    return out;
  }

  double at(double t) const {
    if (!(t < dom_.outer)) return 0.0;
    if (q_.is_constant()) {
      const double e = q_.constant_value();
      return root(segment(t, dom_.outer, e), e);
    }
    try {
      return norm(g_, w_, q_, dom_.with_inner(t), opt_).norm;
    } catch (const not_in_space_error&) {
      return kInf;
    }
  }

  // Share of the modular at the norm carried by radii beyond r_max.
  double tail_share(double t) const {
    const double nv = at(t);
    if (!std::isfinite(nv) || nv == 0.0) return std::isfinite(nv) ? 0.0 : 1.0;
    const auto d = dom_.with_inner(t);
    const double total = modular(g_, w_, q_, nv, d, opt_.quad);
    return tail_modular_share(g_, w_, q_, nv, d, opt_.quad, total);
  }

 private:
  static double root(double integral, double e) { return std::isfinite(integral) ? std::pow(integral, 1.0 / e) : kInf; }

  double segment(double a, double b, double e) const {
    if (!(b > a)) return 0.0;
    if (auto pg = g_.power_law(), pw = w_.power_law(); pg && pw) {
      const double c = std::abs(pg->coeff) * pw->coeff;
      if (c == 0.0) return 0.0;
      if (c > 0.0) {
        const bool radial = dom_.measure == Measure::radial;
        const double k = radial ? dom_.density(1.0) : 1.0;
        const double m = e * (pg->exponent + pw->exponent) + (radial ? dom_.dimension : 1);
        return power_segment_integral(k * std::pow(c, e), m, a, b);
      }
    }
    auto integrand = [&](double rho) {
      const double v = detail::weighted_power(g_(rho), w_(rho), 1.0, e);
      return v == 0.0 ? 0.0 : v * dom_.density(rho);
    };
    try {
      return integrate_relaxed(integrand, a, b, opt_.quad, breaks_).value;
    } catch (const divergence_error&) {
      return kInf;
    }
  }

  RadialProfile g_, w_;
  ExponentSpec q_;
  RadialDomain dom_;
  NormOptions opt_;
  std::vector<double> breaks_;
};

}  // namespace varlp
