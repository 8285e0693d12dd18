#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "umbilic/util.hpp"

namespace umbilic {

// Shape-preserving piecewise-cubic Hermite interpolant (Fritsch-Carlson
// slope limiting). Monotone data stays monotone between nodes. The cubic
// antiderivative is exact per segment, so integral() carries no quadrature
// tolerance.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
      throw invalid_spec("interpolant: need at least two samples with matching column lengths");
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) {
        throw invalid_spec("interpolant: abscissae must be strictly increasing at row " + std::to_string(i));
      }
    }
    d_.assign(n, 0.0);
    std::vector<double> hseg(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      hseg[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / hseg[i];
    }
    if (n == 2) {
      d_[0] = d_[1] = delta[0];
    } else {
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
          d_[i] = 0.0;
        } else {
          const double w1 = 2.0 * hseg[i] + hseg[i - 1];
          const double w2 = hseg[i] + 2.0 * hseg[i - 1];
          d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
      }
      d_[0] = edge_slope(hseg[0], hseg[1], delta[0], delta[1]);
      d_[n - 1] = edge_slope(hseg[n - 2], hseg[n - 3], delta[n - 2], delta[n - 3]);
    }
    cum_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      cum_[i + 1] = cum_[i] + segment_integral(i, 1.0);
    }
  }

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

  double operator()(double s) const {
    const std::size_t i = segment(s);
    const double t = (s - x_[i]) / (x_[i + 1] - x_[i]);
    const double hh = x_[i + 1] - x_[i];
    const double t2 = t * t, t3 = t2 * t;
    return y_[i] * (2 * t3 - 3 * t2 + 1) + hh * d_[i] * (t3 - 2 * t2 + t) +
           y_[i + 1] * (-2 * t3 + 3 * t2) + hh * d_[i + 1] * (t3 - t2);
  }

  double derivative(double s) const {
    const std::size_t i = segment(s);
    const double hh = x_[i + 1] - x_[i];
    const double t = (s - x_[i]) / hh;
    const double t2 = t * t;
    return (y_[i] * (6 * t2 - 6 * t) / hh + d_[i] * (3 * t2 - 4 * t + 1) +
            y_[i + 1] * (-6 * t2 + 6 * t) / hh + d_[i + 1] * (3 * t2 - 2 * t));
  }

  // Exact integral of the interpolant over [s0, s1] within its domain.
  double integral(double s0, double s1) const {
    if (s1 < s0) return -integral(s1, s0);
    return antiderivative(s1) - antiderivative(s0);
  }

 private:
  static double edge_slope(double h0, double h1, double del0, double del1) {
    double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (d * del0 <= 0.0) return 0.0;
    if (del0 * del1 < 0.0 && std::fabs(d) > 3.0 * std::fabs(del0)) return 3.0 * del0;
    return d;
  }

  std::size_t segment(double s) const {
    if (s < x_.front() - 1e-12 || s > x_.back() + 1e-12) {
      throw invalid_spec("interpolant: query " + format_sci(s) + " outside table range [" +
                         format_sci(x_.front()) + ", " + format_sci(x_.back()) + "]");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), s);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (i + 1 >= x_.size()) i = x_.size() - 2;
    return i;
  }

  // Integral over segment i from its left node to relative position theta.
  double segment_integral(std::size_t i, double theta) const {
    const double hh = x_[i + 1] - x_[i];
    const double t = theta, t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double i00 = 0.5 * t4 - t3 + t;          // antiderivative of 2t^3-3t^2+1
    const double i10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
    const double i01 = -0.5 * t4 + t3;
    const double i11 = 0.25 * t4 - t3 / 3.0;
    return hh * (y_[i] * i00 + hh * d_[i] * i10 + y_[i + 1] * i01 + hh * d_[i + 1] * i11);
  }

  double antiderivative(double s) const {
    const std::size_t i = segment(s);
    const double theta = (s - x_[i]) / (x_[i + 1] - x_[i]);
    return cum_[i] + segment_integral(i, theta);
  }

  std::vector<double> x_, y_, d_;
  std::vector<double> cum_;
};

// Solves f(t) = target for strictly monotone f bracketted by [lo, hi], via
// Newton steps guarded by bisection. Stops when |f(t) - target| <= tol, or
// when the bracket is a few ulp wide: a steep f makes the residual test
// unreachable in doubles even though the abscissa is already exact.
inline double invert_monotone(const std::function<double(double)>& f,
                              const std::function<double(double)>& df,
                              double target, double lo, double hi,
                              double tol = 1e-12, int max_iter = 200) {
  double flo = f(lo) - target;
  double fhi = f(hi) - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw invalid_spec("invert_monotone: target " + format_sci(target) + " not bracketed");
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double ft = f(t) - target;
    if (std::fabs(ft) <= tol) return t;
    if (ft * flo < 0.0) {
      hi = t;
      fhi = ft;
    } else {
      lo = t;
      flo = ft;
    }
    if (hi - lo <= 4.0 * kEps * std::max(1.0, std::fabs(t))) {
      return 0.5 * (lo + hi);
    }
    const double slope = df(t);
    double next = (slope != 0.0) ? t - ft / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  throw quadrature_error("invert_monotone: no convergence to tolerance " + format_sci(tol));
}

}  // namespace umbilic
