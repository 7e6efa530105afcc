#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "varlp/errors.hpp"

namespace varlp {

// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Butland slopes,
// PCHIP end conditions). Outside the nodes it continues linearly with the end slope.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw domain_error("MonotoneCubic: need at least two nodes and matching values");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i] < x_[i + 1])) throw domain_error("MonotoneCubic: nodes must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    if (n == 2) {
      d_[0] = d_[1] = delta[0];
      return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  double operator()(double t) const {
    const std::size_t n = x_.size();
    if (t <= x_.front()) return y_.front() + d_.front() * (t - x_.front());
    if (t >= x_.back()) return y_.back() + d_.back() * (t - x_.back());
    const std::size_t k = segment(t);
    const double h = x_[k + 1] - x_[k];
    const double s = (t - x_[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    (void)n;
    return (2 * s3 - 3 * s2 + 1) * y_[k] + (s3 - 2 * s2 + s) * h * d_[k] + (-2 * s3 + 3 * s2) * y_[k + 1] +
           (s3 - s2) * h * d_[k + 1];
  }

  double derivative(double t) const {
    if (t <= x_.front()) return d_.front();
    if (t >= x_.back()) return d_.back();
    const std::size_t k = segment(t);
    const double h = x_[k + 1] - x_[k];
    const double s = (t - x_[k]) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * y_[k] + (3 * s2 - 4 * s + 1) * h * d_[k] + (-6 * s2 + 6 * s) * y_[k + 1] +
            (3 * s2 - 2 * s) * h * d_[k + 1]) /
           h;
  }

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  static double end_slope(double h0, double h1, double del0, double del1) {
    double d = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (d * del0 <= 0.0) return 0.0;
    if (del0 * del1 <= 0.0 && std::abs(d) > std::abs(3 * del0)) return 3 * del0;
    return d;
  }

  std::size_t segment(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    return static_cast<std::size_t>(std::distance(x_.begin(), it)) - 1;
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace varlp
