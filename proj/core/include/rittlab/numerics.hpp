#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rittlab {

using cdouble = std::complex<double>;

inline constexpr double kEps = 2.220446049250313e-16;

// Neumaier-compensated accumulator. Robust when terms exceed the running sum.
class KahanAcc {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanAccC {
 public:
  void add(cdouble z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cdouble value() const { return {re_.value(), im_.value()}; }

 private:
  KahanAcc re_, im_;
};

inline double kahan_sum(std::span<const double> xs) {
  KahanAcc acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline double kahan_abs_sum(std::span<const double> xs) {
  KahanAcc acc;
  for (double x : xs) acc.add(std::abs(x));
  return acc.value();
}

inline double kahan_abs_sum(std::span<const cdouble> xs) {
  KahanAcc acc;
  for (const cdouble& x : xs) acc.add(std::abs(x));
  return acc.value();
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of fit residuals
  std::size_t points = 0;
  bool valid = false;
};

// Ordinary least squares y = slope*x + intercept.
inline LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  LineFit fit;
  std::size_t n = std::min(x.size(), y.size());
  fit.points = n;
  if (n < 2) return fit;
  KahanAcc sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / double(n);
  const double my = sy.value() / double(n);
  KahanAcc sxx, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (sxx.value() <= 0.0) return fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  KahanAcc rss;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (fit.slope * x[i] + fit.intercept);
    rss.add(r * r);
  }
  fit.residual = std::sqrt(rss.value() / double(n));
  fit.valid = true;
  return fit;
}

}  // namespace rittlab
