#pragma once

// Radial data model. Every function, weight and exponent depends on |x| only,
// which turns ball and shell integrals in R^n into one-dimensional ones:
//   int_{B(0,r)} g(|y|) dy = n |B(0,1)| int_0^r g(rho) rho^{n-1} drho.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varlp/errors.hpp"
#include "varlp/interpolation.hpp"
#include "varlp/quadrature.hpp"

namespace varlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// |B(0,1)| = pi^(n/2) / Gamma(n/2 + 1)
inline double unit_ball_volume(int n) {
  if (n < 1) throw domain_error("unit_ball_volume: dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

inline double ball_volume(int n, double r) {
  if (n < 1) throw domain_error("ball_volume: dimension must be >= 1");
  if (!(r >= 0.0)) throw domain_error("ball_volume: radius must be >= 0");
  return unit_ball_volume(n) * std::pow(r, n);
}

enum class Measure {
  radial,    // {inner < |x| < outer} in R^n, density n |B(0,1)| rho^(n-1)
  interval,  // plain Lebesgue measure on (inner, outer) in R
};

struct RadialDomain {
  int dimension = 1;
  double inner = 0.0;
  double outer = kInf;
  double r_max = 1e6;
  Measure measure = Measure::radial;

  static RadialDomain ball(int n, double radius) { return {n, 0.0, radius, std::min(radius, 1e6), Measure::radial}; }
  static RadialDomain exterior(int n, double t) { return {n, t, kInf, 1e6, Measure::radial}; }
  static RadialDomain shell(int n, double t, double radius) {
    return {n, t, radius, std::min(radius, 1e6), Measure::radial};
  }
  static RadialDomain whole_space(int n) { return exterior(n, 0.0); }
  static RadialDomain half_line(double a, double b = kInf) { return {1, a, b, std::min(b, 1e6), Measure::interval}; }

  void validate() const {
    if (dimension < 1) throw domain_error("RadialDomain: dimension must be >= 1");
    if (!(inner >= 0.0) || !(inner < outer)) throw domain_error("RadialDomain: need 0 <= inner < outer");
    if (!(r_max > 0.0)) throw domain_error("RadialDomain: r_max must be positive");
  }

  double density(double rho) const {
    if (measure == Measure::interval) return 1.0;
    const double c = dimension * unit_ball_volume(dimension);
    return dimension == 1 ? c : c * std::pow(rho, dimension - 1);
  }

  RadialDomain with_inner(double t) const {
    RadialDomain d = *this;
    d.inner = t;
    return d;
  }
};

enum class ProfileKind { constant, power, log_power, exponential, linear, two_step, piecewise, sampled, composite };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::power: return "power";
    case ProfileKind::log_power: return "log-power";
    case ProfileKind::exponential: return "exponential";
    case ProfileKind::linear: return "linear";
    case ProfileKind::two_step: return "two-step";
    case ProfileKind::piecewise: return "piecewise";
    case ProfileKind::sampled: return "sampled";
    case ProfileKind::composite: return "composite";
  }
  return "unknown";
}

// coeff * r^exponent
struct PowerLaw {
  double coeff = 1.0;
  double exponent = 0.0;
};

// A scalar function of the radius. Immutable; copies share state.
class RadialProfile {
 public:
  using Fn = std::function<double(double)>;

  RadialProfile() : RadialProfile(constant(0.0)) {}

  static RadialProfile constant(double c) {
    State s{ProfileKind::constant, "const:" + fmt(c), [c](double) { return c; }, [](double) { return 0.0; }};
    s.power = PowerLaw{c, 0.0};
    s.parameters = {c};
    s.log_value = [lc = std::log(c)](double) { return lc; };
    return RadialProfile(std::move(s));
  }

  static RadialProfile power(double a, double coeff = 1.0) {
    std::string label = "power:" + fmt(a);
    if (coeff != 1.0) label += ",coef:" + fmt(coeff);
    State s{ProfileKind::power, label, [a, coeff](double r) { return coeff * std::pow(r, a); },
            [a, coeff](double r) { return a == 0.0 ? 0.0 : coeff * a * std::pow(r, a - 1.0); }};
    s.power = PowerLaw{coeff, a};
    s.parameters = {a, coeff};
    s.log_value = [a, lc = std::log(coeff)](double r) { return lc + a * std::log(r); };
    return RadialProfile(std::move(s));
  }

  // r^a on (0, cutoff), zero beyond.
  static RadialProfile power_cutoff(double a, double cutoff) {
    if (!(cutoff > 0.0)) throw domain_error("power_cutoff: cutoff must be positive");
    State s{ProfileKind::power, "power:" + fmt(a) + ",cutoff:" + fmt(cutoff),
            [a, cutoff](double r) { return r < cutoff ? std::pow(r, a) : 0.0; },
            [a, cutoff](double r) { return r < cutoff && a != 0.0 ? a * std::pow(r, a - 1.0) : 0.0; }};
    s.breaks = {cutoff};
    s.parameters = {a, cutoff};
    return RadialProfile(std::move(s));
  }

  // r^a |ln r|^b
  static RadialProfile log_power(double a, double b) {
    State s{ProfileKind::log_power, "logpower:" + fmt(a) + "," + fmt(b),
            [a, b](double r) { return std::pow(r, a) * std::pow(std::abs(std::log(r)), b); },
            [a, b](double r) {
              const double L = std::log(r);
              const double aL = std::abs(L);
              double d = a * std::pow(r, a - 1.0) * std::pow(aL, b);
              if (b != 0.0 && aL > 0.0) d += std::pow(r, a - 1.0) * b * std::pow(aL, b - 1.0) * (L > 0 ? 1.0 : -1.0);
              return d;
            }};
    s.breaks = {1.0};
    s.parameters = {a, b};
    s.log_value = [a, b](double r) { return a * std::log(r) + b * std::log(std::abs(std::log(r))); };
    return RadialProfile(std::move(s));
  }

  // e^(rate r); rate < 0 for decay
  static RadialProfile exponential(double rate) {
    State s{ProfileKind::exponential, "exp:" + fmt(rate), [rate](double r) { return std::exp(rate * r); },
            [rate](double r) { return rate * std::exp(rate * r); }};
    s.parameters = {rate};
    s.log_value = [rate](double r) { return rate * r; };
    return RadialProfile(std::move(s));
  }

  // The identity r -> r (e.g. the exponent p(x) = x).
  static RadialProfile identity() {
    State s{ProfileKind::linear, "linear-x", [](double r) { return r; }, [](double) { return 1.0; }};
    s.power = PowerLaw{1.0, 1.0};
    s.log_value = [](double r) { return std::log(r); };
    return RadialProfile(std::move(s));
  }

  // `inside` for r < r0, `outside` for r >= r0.
  static RadialProfile two_step(double inside, double outside, double r0) {
    if (!(r0 > 0.0)) throw domain_error("two_step: breakpoint must be positive");
    State s{ProfileKind::two_step, "twostep:" + fmt(inside) + "," + fmt(outside) + "," + fmt(r0),
            [=](double r) { return r < r0 ? inside : outside; }, [](double) { return 0.0; }};
    s.breaks = {r0};
    s.parameters = {inside, outside, r0};
    return RadialProfile(std::move(s));
  }

  // pieces[i] on [breaks[i-1], breaks[i]).
  static RadialProfile piecewise(std::vector<double> breaks, std::vector<RadialProfile> pieces) {
    if (pieces.size() != breaks.size() + 1) throw domain_error("piecewise: need breaks.size()+1 pieces");
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      if (!(breaks[i] < breaks[i + 1])) throw domain_error("piecewise: breaks must increase");
    auto pick = [breaks](double r) {
      return static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), r) - breaks.begin());
    };
    bool all_diff = std::all_of(pieces.begin(), pieces.end(), [](const auto& p) { return p.has_derivative(); });
    std::string label = "piecewise(";
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i) label += "|" + fmt(breaks[i - 1]) + "|";
      label += pieces[i].label();
    }
    label += ")";
    State s{ProfileKind::piecewise, label, [pieces, pick](double r) { return pieces[pick(r)](r); }, {}};
    if (all_diff) s.derivative = [pieces, pick](double r) { return pieces[pick(r)].derivative(r); };
    s.breaks = breaks;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double lo = i == 0 ? 0.0 : breaks[i - 1];
      const double hi = i == breaks.size() ? kInf : breaks[i];
      for (double b : pieces[i].breakpoints())
        if (b > lo && b < hi) s.breaks.push_back(b);
    }
    return RadialProfile(std::move(s));
  }

  // Values at log-spaced positive nodes, interpolated by a monotone cubic in
  // (ln r, ln value) when all values are positive, in (ln r, value) otherwise.
  static RadialProfile sampled(std::vector<double> nodes, std::vector<double> values) {
    if (nodes.size() < 2 || nodes.size() != values.size()) throw domain_error("sampled: need >= 2 node/value pairs");
    for (double r : nodes)
      if (!(r > 0.0)) throw domain_error("sampled: nodes must be positive");
    for (double v : values)
      if (!std::isfinite(v)) throw domain_error("sampled: values must be finite");
    const bool positive = std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
    std::vector<double> lx(nodes.size()), ly(values.size());
    std::transform(nodes.begin(), nodes.end(), lx.begin(), [](double r) { return std::log(r); });
    if (positive)
      std::transform(values.begin(), values.end(), ly.begin(), [](double v) { return std::log(v); });
    else
      ly = values;
    auto interp = std::make_shared<const MonotoneCubic>(lx, ly);
    const double lo = lx.front(), hi = lx.back();
    const double vlo = values.front(), vhi = values.back();
    State s{ProfileKind::sampled, "grid[" + std::to_string(nodes.size()) + "]", {}, {}};
    if (positive) {
      s.value = [interp](double r) { return std::exp((*interp)(std::log(r))); };
      s.log_value = [interp](double r) { return (*interp)(std::log(r)); };
      s.derivative = [interp](double r) {
        const double L = std::log(r);
        return std::exp((*interp)(L)) * interp->derivative(L) / r;
      };
    } else {
      s.value = [interp, lo, hi, vlo, vhi](double r) {
        const double L = std::log(r);
        if (L <= lo) return vlo;
        if (L >= hi) return vhi;
        return (*interp)(L);
      };
      s.derivative = [interp, lo, hi](double r) {
        const double L = std::log(r);
        if (L <= lo || L >= hi) return 0.0;
        return interp->derivative(L) / r;
      };
    }
    s.nodes = std::move(nodes);
    s.node_values = std::move(values);
    return RadialProfile(std::move(s));
  }

  static RadialProfile custom(std::string label, Fn value, Fn derivative = {}, std::vector<double> breaks = {}) {
    State s{ProfileKind::composite, std::move(label), std::move(value), std::move(derivative)};
    s.breaks = std::move(breaks);
    return RadialProfile(std::move(s));
  }

  double operator()(double r) const { return s_->value(r); }

  // ln g(r); exact for structured profiles even where g under- or overflows
  double log_at(double r) const { return s_->log_value ? s_->log_value(r) : std::log(s_->value(r)); }

  bool has_derivative() const { return static_cast<bool>(s_->derivative); }
  double derivative(double r) const {
    if (!s_->derivative) throw domain_error("profile '" + s_->label + "' has no closed-form derivative");
    return s_->derivative(r);
  }

  ProfileKind kind() const { return s_->kind; }
  const std::string& label() const { return s_->label; }
  std::span<const double> breakpoints() const { return s_->breaks; }
  std::optional<PowerLaw> power_law() const { return s_->power; }
  std::span<const double> parameters() const { return s_->parameters; }
  std::span<const double> nodes() const { return s_->nodes; }
  std::span<const double> node_values() const { return s_->node_values; }

  RadialProfile scaled(double c) const {
    auto self = *this;
    State s{s_->kind == ProfileKind::constant ? ProfileKind::constant : ProfileKind::composite,
            fmt(c) + "*" + label(), [self, c](double r) { return c * self(r); }, {}};
    if (has_derivative()) s.derivative = [self, c](double r) { return c * self.derivative(r); };
    s.breaks = s_->breaks;
    if (s_->power) s.power = PowerLaw{c * s_->power->coeff, s_->power->exponent};
    if (s.kind == ProfileKind::constant) s.parameters = {c * s_->parameters[0]};
    if (c > 0.0) s.log_value = [self, lc = std::log(c)](double r) { return lc + self.log_at(r); };
    return RadialProfile(std::move(s));
  }

  // g(r)^e for g >= 0.
  RadialProfile pow(double e) const {
    auto self = *this;
    State s{ProfileKind::composite, "(" + label() + ")^" + fmt(e), [self, e](double r) { return std::pow(self(r), e); },
            {}};
    if (has_derivative())
      s.derivative = [self, e](double r) {
        const double g = self(r);
        const double dg = self.derivative(r);
        return dg == 0.0 ? 0.0 : e * std::pow(g, e - 1.0) * dg;
      };
    s.breaks = s_->breaks;
    if (s_->power) s.power = PowerLaw{std::pow(s_->power->coeff, e), s_->power->exponent * e};
    s.log_value = [self, e](double r) { return e * self.log_at(r); };
    return RadialProfile(std::move(s));
  }

  friend RadialProfile operator*(const RadialProfile& f, const RadialProfile& g) {
    State s{ProfileKind::composite, f.label() + "*" + g.label(), [f, g](double r) { return f(r) * g(r); }, {}};
    if (f.has_derivative() && g.has_derivative())
      s.derivative = [f, g](double r) { return f.derivative(r) * g(r) + f(r) * g.derivative(r); };
    s.breaks.assign(f.breakpoints().begin(), f.breakpoints().end());
    s.breaks.insert(s.breaks.end(), g.breakpoints().begin(), g.breakpoints().end());
    if (f.power_law() && g.power_law())
      s.power = PowerLaw{f.power_law()->coeff * g.power_law()->coeff,
                         f.power_law()->exponent + g.power_law()->exponent};
    s.log_value = [f, g](double r) { return f.log_at(r) + g.log_at(r); };
    return RadialProfile(std::move(s));
  }

 private:
  struct State {
    ProfileKind kind;
    std::string label;
    Fn value;
    Fn derivative;
    std::vector<double> breaks{};
    Fn log_value{};  // ln g without forming g, when the structure allows it
    std::optional<PowerLaw> power{};
    std::vector<double> parameters{};
    std::vector<double> nodes{};
    std::vector<double> node_values{};
  };

  explicit RadialProfile(State s) : s_(std::make_shared<const State>(std::move(s))) {}

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  std::shared_ptr<const State> s_;
};

inline double conjugate(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw domain_error("conjugate exponent needs 1 < p < inf");
  return p / (p - 1.0);
}

// A fixed exponent p, or a variable exponent q(|x|).
class ExponentSpec {
 public:
  struct Range {
    double lower;
    double upper;
  };

  static ExponentSpec fixed(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw domain_error("exponent must satisfy 0 < p < inf");
    ExponentSpec e;
    e.constant_ = p;
    e.profile_ = RadialProfile::constant(p);
    return e;
  }

  static ExponentSpec variable(RadialProfile q) {
    ExponentSpec e;
    if (q.kind() == ProfileKind::constant) return fixed(q(1.0));
    e.profile_ = std::move(q);
    return e;
  }

  bool is_constant() const { return constant_.has_value(); }
  double constant_value() const {
    if (!constant_) throw domain_error("exponent is not constant");
    return *constant_;
  }
  double operator()(double r) const { return constant_ ? *constant_ : profile_(r); }
  const RadialProfile& profile() const { return profile_; }

  // ess inf / ess sup over (lo, hi), estimated by dense sampling (hi = inf is
  // sampled up to max(1e6, 1e3 lo)).
  Range range(double lo, double hi) const {
    if (constant_) return {*constant_, *constant_};
    const double a = std::max(lo, 1e-12);
    const double b = std::isfinite(hi) ? hi : std::max(1e6, 1e3 * a);
    std::vector<double> pts;
    const int count = 4000;
    for (int i = 0; i <= count; ++i) pts.push_back(a * std::pow(b / a, static_cast<double>(i) / count));
    for (double br : profile_.breakpoints()) {
      if (br > a && br < b) {
        pts.push_back(br * (1.0 - 1e-12));
        pts.push_back(br);
      }
    }
    Range r{kInf, -kInf};
    for (double x : pts) {
      const double v = profile_(x);
      if (!std::isfinite(v) || !(v > 0.0)) throw domain_error("variable exponent must be finite and positive");
      r.lower = std::min(r.lower, v);
      r.upper = std::max(r.upper, v);
    }
    return r;
  }

  std::string label() const { return profile_.label(); }

 private:
  std::optional<double> constant_;
  RadialProfile profile_;
};

// Log-spaced grid of `count` radii covering [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw domain_error("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

// Ball integral of a radial power law c rho^a over B(0, r); +inf when a + n <= 0.
inline double power_ball_integral(const PowerLaw& pw, int n, double r) {
  if (r == 0.0) return 0.0;
  if (pw.coeff == 0.0) return 0.0;
  if (pw.exponent + n <= 0.0) throw divergence_error("non-integrable singularity at the origin", kInf);
  return pw.coeff * n * unit_ball_volume(n) * std::pow(r, pw.exponent + n) / (pw.exponent + n);
}

// int_{B(0,r)} g(|y|) dy
inline double radial_reduce(int n, const RadialProfile& g, double r, const QuadConfig& cfg = QuadConfig::precise()) {
  if (n < 1) throw domain_error("radial_reduce: dimension must be >= 1");
  if (!(r >= 0.0)) throw domain_error("radial_reduce: radius must be >= 0");
  if (r == 0.0) return 0.0;
  if (auto pw = g.power_law()) return power_ball_integral(*pw, n, r);
  auto integrand = [&](double rho) {
    const double v = g(rho);
    return v == 0.0 ? 0.0 : (n == 1 ? v : v * std::pow(rho, n - 1));
  };
  return n * unit_ball_volume(n) * integrate_relaxed(integrand, 0.0, r, cfg, g.breakpoints()).value;
}

// coef * int_a^b rho^(m-1) d rho, +inf when it diverges
inline double power_segment_integral(double coef, double m, double a, double b) {
  if (!(b > a) || coef == 0.0) return 0.0;
  if (std::isinf(b)) return m < 0.0 ? coef * std::pow(a, m) / -m : kInf;
  if (a == 0.0) return m > 0.0 ? coef * std::pow(b, m) / m : kInf;
  if (m == 0.0) return coef * std::log(b / a);
  // (b^m - a^m)/m without cancellation for small m
  return coef * std::pow(a, m) * std::expm1(m * std::log(b / a)) / m;
}

// r -> int_{B(0,r)} g(|y|) dy, tabulated on log-spaced radii so each query
// costs one short quadrature from the nearest node below.
class BallIntegral {
 public:
  // `noise_floor` is an absolute integrand accuracy (per unit volume) below
  // which the integrand cannot be resolved, e.g. eps for ln f with f near 1.
  BallIntegral(int n, RadialProfile g, const QuadConfig& cfg = QuadConfig::precise(), double r_lo = 1e-6,
               double r_hi = 1e6, int per_decade = 8, double noise_floor = 0.0)
      : n_(n), g_(std::move(g)), cfg_(cfg), scale_(n * unit_ball_volume(n)), noise_floor_(noise_floor) {
    if (n < 1) throw domain_error("BallIntegral: dimension must be >= 1");
    if (g_.power_law()) return;
    const int count = std::max(2, static_cast<int>(std::ceil(std::log10(r_hi / r_lo) * per_decade)) + 1);
    nodes_ = log_grid(r_lo, r_hi, count);
    cumulative_.reserve(nodes_.size());
    cumulative_.push_back(segment(0.0, nodes_[0]));
    // a profile that is invalid far out (e.g. underflows to zero under a log)
    // still serves smaller radii; queries past the last good node retry and fail there
    try {
      for (std::size_t i = 1; i < nodes_.size(); ++i)
        cumulative_.push_back(cumulative_.back() + segment(nodes_[i - 1], nodes_[i]));
    } catch (const domain_error&) {
      nodes_.resize(cumulative_.size());
    }
  }

  double operator()(double r) const {
    if (!(r >= 0.0)) throw domain_error("BallIntegral: radius must be >= 0");
    if (r == 0.0) return 0.0;
    if (auto pw = g_.power_law()) return power_ball_integral(*pw, n_, r);
    if (r < nodes_.front()) return segment(0.0, r);
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return cumulative_[k] + (r > nodes_[k] ? segment(nodes_[k], r) : 0.0);
  }

  int dimension() const { return n_; }

 private:
  double segment(double a, double b) const {
    auto integrand = [this](double rho) {
      const double v = g_(rho);
      return v == 0.0 ? 0.0 : (n_ == 1 ? v : v * std::pow(rho, n_ - 1));
    };
    QuadConfig cfg = cfg_;
    cfg.abs_tol = std::max(cfg.abs_tol, noise_floor_ * (std::pow(b, n_) - std::pow(a, n_)) / n_);
    return scale_ * integrate_relaxed(integrand, a, b, cfg, g_.breakpoints()).value;
  }

  int n_;
  RadialProfile g_;
  QuadConfig cfg_;
  double scale_;
  double noise_floor_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

}  // namespace varlp
