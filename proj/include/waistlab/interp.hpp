// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "waistlab/errors.hpp"

namespace waistlab {

//! Shape-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
//! Monotone data yields a monotone interpolant, which is what makes the
//! cumulative tables invertible by bisection without bracketing surprises.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.size() < 2)
      throw ValidationError("interpolant needs >= 2 matching nodes");
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1]))
        throw ValidationError("interpolation abscissae must be strictly increasing");
    build_slopes();
  }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  double y_front() const { return y_.front(); }
  double y_back() const { return y_.back(); }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }

  //! Evaluate at t; arguments outside the table are clamped to the ends.
  double operator()(double t) const {
    if (t <= x_.front()) return y_.front();
    if (t >= x_.back()) return y_.back();
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + h * h10 * m_[i] + h01 * y_[i + 1] + h * h11 * m_[i + 1];
  }

  double derivative(double t) const {
    t = std::clamp(t, x_.front(), x_.back());
    std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double d00 = (6 * s * s - 6 * s) / h;
    const double d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -d00;
    const double d11 = 3 * s * s - 2 * s;
    return d00 * y_[i] + d10 * m_[i] + d01 * y_[i + 1] + d11 * m_[i + 1];
  }

  //! Preimage of yq under an increasing interpolant, resolved by bisection
  //! to a relative interval width of about 1e-13.
  double inverse(double yq) const {
    if (yq <= y_.front()) return x_.front();
    if (yq >= y_.back()) return x_.back();
    auto it = std::lower_bound(y_.begin(), y_.end(), yq);
    std::size_t i = static_cast<std::size_t>(it - y_.begin());
    if (i > 0) --i;
    double lo = x_[i], hi = x_[i + 1];
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if ((*this)(mid) < yq)
        lo = mid;
      else
        hi = mid;
      const double scale = std::max({std::fabs(lo), std::fabs(hi), 1e-300});
      if (hi - lo <= 1e-13 * scale) break;
    }
    return 0.5 * (lo + hi);
  }

 private:
  std::size_t segment(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i > 0) --i;
    return std::min(i, x_.size() - 2);
  }

  void build_slopes() {
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    m_.assign(n, 0.0);
    m_.front() = endpoint_slope(h[0], h[std::min<std::size_t>(1, n - 2)], d[0],
                                d[std::min<std::size_t>(1, n - 2)]);
    m_.back() = endpoint_slope(h[n - 2], h[n - 2 - std::min<std::size_t>(1, n - 2)],
                               d[n - 2], d[n - 2 - std::min<std::size_t>(1, n - 2)]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0) != (d[i] > 0)) {
        m_[i] = 0.0;
      } else {
        const double w1 = 2 * h[i] + h[i - 1];
        const double w2 = h[i] + 2 * h[i - 1];
        m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
  }

  static double endpoint_slope(double h0, double h1, double d0, double d1) {
    // one-sided three-point estimate, clipped to preserve shape
    double m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if ((m > 0) != (d0 > 0) || d0 == 0.0)
      m = 0.0;
    else if ((d0 > 0) != (d1 > 0) && std::fabs(m) > 3 * std::fabs(d0))
      m = 3 * d0;
    return m;
  }

  std::vector<double> x_, y_, m_;
};

//! Log-spaced grid from lo to hi inclusive (lo > 0).
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > lo) || n < 2)
    throw ValidationError("log_grid requires 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

//! Uniform grid from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi >= lo) || n < 2)
    throw ValidationError("linear_grid requires hi >= lo and n >= 2");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

}  // namespace waistlab
