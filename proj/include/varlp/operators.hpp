#pragma once

// Ball operators on radial data:
//   Hf(x)   = int_{|y|<|x|} f(y) dy
//   Gf(x)   = exp( ball average of ln f over B(0,|x|) )
//   M_b f(x) = ( ball average of f^b over B(0,|x|) )^(1/b)

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "varlp/core_types.hpp"
#include "varlp/errors.hpp"
#include "varlp/parallel.hpp"
#include "varlp/quadrature.hpp"

namespace varlp {

struct OperatorOutput {
  std::vector<double> nodes;
  std::vector<double> values;
  std::vector<double> errors;

  RadialProfile profile() const { return RadialProfile::sampled(nodes, values); }
};

inline std::vector<double> default_operator_grid(double r_max = 1e6) { return log_grid(1e-4, r_max, 200); }

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw domain_error("operator grid is empty");
  if (!(grid.front() > 0.0)) throw domain_error("operator grid radii must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw domain_error("operator grid must be strictly increasing");
}

// Absolute integrand noise of ln f (per unit volume): ln of a correctly
// rounded f is only accurate to about eps in absolute terms.
inline constexpr double kLogNoise = 1e3 * std::numeric_limits<double>::epsilon();

// Cumulative radial integrals int_{B(0, r_i)} g for every grid radius. Segments
// are independent and evaluated in parallel; the prefix sum runs in order.
template <class G>
void cumulative_ball(const G& g, int n, const std::vector<double>& grid, std::span<const double> breaks,
                     const QuadConfig& cfg, std::vector<double>& value, std::vector<double>& error,
                     double noise_floor = 0.0) {
  const double scale = n * unit_ball_volume(n);
  auto integrand = [&](double rho) {
    const double v = g(rho);
    return v == 0.0 ? 0.0 : (n == 1 ? v : v * std::pow(rho, n - 1));
  };
  std::vector<QuadResult> seg(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double a = i == 0 ? 0.0 : grid[i - 1];
    QuadConfig c = cfg;
    c.abs_tol = std::max(c.abs_tol, noise_floor * (std::pow(grid[i], n) - std::pow(a, n)) / n);
    seg[i] = integrate_relaxed(integrand, a, grid[i], c, breaks);
  });
  value.assign(grid.size(), 0.0);
  error.assign(grid.size(), 0.0);
  double acc = 0.0, err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    acc += seg[i].value;
    err += seg[i].error;
    value[i] = scale * acc;
    error[i] = scale * err;
  }
}

}  // namespace detail

// Hf at each grid radius.
inline OperatorOutput hardy(const RadialProfile& f, int n, const std::vector<double>& grid,
                            const QuadConfig& cfg = QuadConfig::precise()) {
  detail::check_grid(grid);
  OperatorOutput out;
  out.nodes = grid;
  if (auto pw = f.power_law(); pw && pw->coeff >= 0.0) {
    for (double r : grid) out.values.push_back(power_ball_integral(*pw, n, r));
    out.errors.assign(grid.size(), 0.0);
    return out;
  }
  auto g = [&](double rho) {
    const double v = f(rho);
    if (v < 0.0) throw domain_error("hardy: f must be nonnegative (f(" + std::to_string(rho) + ") < 0)");
    return v;
  };
  detail::cumulative_ball(g, n, grid, f.breakpoints(), cfg, out.values, out.errors);
  return out;
}

// (1 / |B(0,|x|)|) Hf(x)
inline OperatorOutput ball_average(const RadialProfile& f, int n, const std::vector<double>& grid,
                                   const QuadConfig& cfg = QuadConfig::precise()) {
  OperatorOutput out = hardy(f, n, grid, cfg);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double vol = ball_volume(n, grid[i]);
    out.values[i] /= vol;
    out.errors[i] /= vol;
  }
  return out;
}

// Ball average of ln f over B(0, r), tabulated so that it can be queried at
// arbitrary radii (power laws are handled in closed form).
class LogBallAverage {
 public:
  LogBallAverage(const RadialProfile& f, int n, const QuadConfig& cfg = QuadConfig::precise())
      : n_(n), power_(f.power_law()) {
    if (power_ && !(power_->coeff > 0.0)) throw domain_error("geometric mean: f must be positive");
    if (power_) return;
    auto log_f = RadialProfile::custom(
        "ln(" + f.label() + ")",
        [f](double rho) {
          const double l = f.log_at(rho);
          if (!(l > -kInf)) throw domain_error("geometric mean: f must be positive (f(" + std::to_string(rho) + ") <= 0)");
          return l;
        },
        {}, std::vector<double>(f.breakpoints().begin(), f.breakpoints().end()));
    table_ = std::make_shared<const BallIntegral>(n, log_f, cfg, 1e-6, 1e6, 8, detail::kLogNoise);
  }

  double operator()(double r) const {
    if (!(r > 0.0)) throw domain_error("geometric mean: radius must be positive");
    if (power_) return std::log(power_->coeff) + power_->exponent * (std::log(r) - 1.0 / n_);
    try {
      return (*table_)(r) / ball_volume(n_, r);
    } catch (const divergence_error& e) {
      throw evaluation_error(std::string("geometric mean: ln f is not integrable on balls: ") + e.what());
    }
  }

 private:
  int n_;
  std::optional<PowerLaw> power_;
  std::shared_ptr<const BallIntegral> table_;
};

// Gf at each grid radius.
inline OperatorOutput geometric_mean(const RadialProfile& f, int n, const std::vector<double>& grid,
                                     const QuadConfig& cfg = QuadConfig::precise()) {
  detail::check_grid(grid);
  OperatorOutput out;
  out.nodes = grid;
  if (auto pw = f.power_law()) {
    const LogBallAverage avg(f, n, cfg);
    for (double r : grid) out.values.push_back(std::exp(avg(r)));
    out.errors.assign(grid.size(), 0.0);
    return out;
  }
  auto g = [&](double rho) {
    const double l = f.log_at(rho);
    if (!(l > -kInf)) throw domain_error("geometric mean: f must be positive (f(" + std::to_string(rho) + ") <= 0)");
    return l;
  };
  std::vector<double> sums, errs;
  try {
    detail::cumulative_ball(g, n, grid, f.breakpoints(), cfg, sums, errs, detail::kLogNoise);
  } catch (const divergence_error& e) {
    throw evaluation_error(std::string("geometric mean: ln f is not integrable on balls: ") + e.what());
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double vol = ball_volume(n, grid[i]);
    const double value = std::exp(sums[i] / vol);
    out.values.push_back(value);
    out.errors.push_back(value * errs[i] / vol);
  }
  return out;
}

// Power mean of order beta over balls. Written as exp(log1p(avg expm1(beta ln f)) / beta)
// so that small beta does not lose the leading digits.
inline OperatorOutput averaged_hardy_beta(const RadialProfile& f, double beta, int n, const std::vector<double>& grid,
                                          const QuadConfig& cfg = QuadConfig::precise()) {
  if (!(beta > 0.0)) throw domain_error("averaged_hardy_beta: beta must be positive");
  detail::check_grid(grid);
  auto g = [&](double rho) {
    const double v = f(rho);
    if (!(v > 0.0)) throw domain_error("averaged_hardy_beta: f must be positive");
    return std::expm1(beta * std::log(v));
  };
  OperatorOutput out;
  out.nodes = grid;
  std::vector<double> sums, errs;
  try {
    detail::cumulative_ball(g, n, grid, f.breakpoints(), cfg, sums, errs, beta * detail::kLogNoise);
  } catch (const divergence_error& e) {
    throw evaluation_error(std::string("averaged_hardy_beta: f^beta is not integrable on balls: ") + e.what());
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double vol = ball_volume(n, grid[i]);
    const double value = std::exp(std::log1p(sums[i] / vol) / beta);
    out.values.push_back(value);
    out.errors.push_back(value * errs[i] / (vol * beta));
  }
  return out;
}

// Exact (lazily evaluated) Hf and Gf as profiles.
inline RadialProfile hardy_profile(const RadialProfile& f, int n, const QuadConfig& cfg = QuadConfig::precise()) {
  auto table = std::make_shared<const BallIntegral>(n, f, cfg);
  return RadialProfile::custom(
      "H[" + f.label() + "]", [table](double r) { return (*table)(r); },
      [f, n](double r) { return f(r) * n * unit_ball_volume(n) * std::pow(r, n - 1); });
}

inline RadialProfile geometric_mean_profile(const RadialProfile& f, int n,
                                            const QuadConfig& cfg = QuadConfig::precise()) {
  if (auto pw = f.power_law(); pw && pw->coeff > 0.0)
    return RadialProfile::power(pw->exponent, pw->coeff * std::exp(-pw->exponent / n));
  auto avg = std::make_shared<const LogBallAverage>(f, n, cfg);
  return RadialProfile::custom("G[" + f.label() + "]", [avg](double r) { return std::exp((*avg)(r)); });
}

}  // namespace varlp
