#include "rittlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rittlab/special.hpp"

namespace rittlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBlock = 1024;  // phase recurrence re-anchor interval

struct KeptSum {
  cdouble sum{0.0, 0.0};
  double l1 = 0.0;
  double m1 = 0.0;        // sum k |f_k|
  double fp_bound = 0.0;  // certified rounding bound for the kept sum
};

double abs_of(double x) { return std::abs(x); }
double abs_of(const cdouble& x) { return std::abs(x); }

// sum f_k w^k with per-block re-anchored phases. The anchor at index k carries
// an absolute phase error ~ ulp(k theta), which enters the bound through the
// first-moment term; the in-block recurrence drift is block-length scale.
template <typename T>
KeptSum kept_power_sum(std::span<const T> coeffs, cdouble w) {
  const double r = std::abs(w);
  const double th = std::arg(w);
  KahanAccC acc;
  KahanAcc l1, m1;
  for (std::size_t start = 0; start < coeffs.size(); start += kBlock) {
    const std::size_t end = std::min(coeffs.size(), start + kBlock);
    cdouble phase = std::polar(std::pow(r, double(start)), th * double(start));
    for (std::size_t k = start; k < end; ++k) {
      const double a = abs_of(coeffs[k]);
      if (a != 0.0) {
        acc.add(cdouble(coeffs[k]) * phase);
        l1.add(a);
        m1.add(double(k) * a);
      }
      phase *= w;
    }
  }
  KeptSum out;
  out.sum = acc.value();
  out.l1 = l1.value();
  out.m1 = m1.value();
  out.fp_bound =
      kEps * (8.0 * (std::log2(double(coeffs.size()) + 2.0) + 8.0) * out.l1 + 2.0 * std::abs(th) * out.m1);
  return out;
}

template <typename T>
cdouble horner(std::span<const T> coeffs, cdouble w) {
  cdouble acc{0.0, 0.0};
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * w + cdouble(coeffs[k]);
  return acc;
}

template <typename Seq, typename T>
EvalWithError gen_fn_impl(const Seq& f, std::span<const T> coeffs, cdouble w) {
  const double r = std::abs(w);
  if (r > 1.0 + 1e-12) throw std::invalid_argument("gen_fn: |w| must be <= 1");
  EvalWithError ev;
  const double rtail = std::min(r, 1.0);
  if (r >= 1.0 - 1e-6) {
    const KeptSum ks = kept_power_sum(coeffs, w);
    ev.value = ks.sum;
    ev.error = f.tail_bound * std::pow(rtail, double(coeffs.size())) + ks.fp_bound + f.fp_slack;
  } else {
    ev.value = horner(coeffs, w);
    KahanAcc l1;
    for (const T& c : coeffs) l1.add(abs_of(c));
    // Horner rounding is geometrically damped away from the boundary.
    ev.error = f.tail_bound * std::pow(rtail, double(coeffs.size())) +
               4.0 * kEps * l1.value() / (1.0 - r) + f.fp_slack;
  }
  return ev;
}

void require_xi(double xi) {
  if (!(std::abs(xi) <= kPi + 1e-9)) throw std::invalid_argument("xi must lie in [-pi, pi]");
}

}  // namespace

EvalWithError fourier(const TruncSeq& f, double xi) {
  require_xi(xi);
  return gen_fn(f, std::polar(1.0, -xi));
}

EvalWithError fourier(const ProbSeq& f, double xi) {
  require_xi(xi);
  return gen_fn(f, std::polar(1.0, -xi));
}

EvalWithError gen_fn(const TruncSeq& f, cdouble w) {
  return gen_fn_impl(f, std::span<const cdouble>(f.coeffs), w);
}

EvalWithError gen_fn(const ProbSeq& f, cdouble w) {
  return gen_fn_impl(f, std::span<const double>(f.coeffs), w);
}

EvalWithError one_minus_fourier(const ProbSeq& f, double xi) {
  require_xi(xi);
  // 1 - e^{-ik xi} = 2i sin(k xi / 2) e^{-ik xi / 2}: no cancellation near
  // F^ ~ 1, where the direct subtraction would lose every significant digit.
  const cdouble hstep = std::polar(1.0, -xi / 2.0);
  KahanAccC acc;
  KahanAcc mass, m1;
  for (std::size_t start = 0; start < f.coeffs.size(); start += kBlock) {
    const std::size_t end = std::min(f.coeffs.size(), start + kBlock);
    cdouble h = std::polar(1.0, -xi * double(start) / 2.0);
    for (std::size_t k = start; k < end; ++k) {
      const double a = f.coeffs[k];
      if (a != 0.0) {
        const double sin_half = -h.imag();
        acc.add(a * cdouble{0.0, 2.0 * sin_half} * h);
        mass.add(a);
        m1.add(double(k) * a);
      }
      h *= hstep;
    }
  }
  EvalWithError ev;
  const double deficit = std::max(0.0, 1.0 - mass.value());
  ev.value = acc.value() + deficit;
  // The omitted terms contribute their mass (added above as the exact deficit)
  // minus an oscillating sum bounded by the same mass.
  const double fp = kEps * (16.0 * (std::log2(double(f.coeffs.size()) + 2.0) + 8.0) * mass.value() +
                            2.0 * std::abs(xi) * m1.value());
  ev.error = f.tail_bound + fp + 2.0 * f.fp_slack;
  return ev;
}

std::vector<double> geometric_xi_grid(int J) {
  if (J < 1) throw std::invalid_argument("geometric_xi_grid: J must be >= 1");
  std::vector<double> grid;
  grid.reserve(std::size_t(J));
  for (int j = J - 1; j >= 0; --j) grid.push_back(kPi * std::ldexp(1.0, -j));
  return grid;
}

SectorReport sector_report(const ProbSeq& f, std::span<const double> grid) {
  std::vector<double> xs(grid.begin(), grid.end());
  for (double& xi : xs) xi = std::abs(xi);  // real coefficients: |1-F^| is even
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  SectorReport rep;
  for (double xi : xs) {
    if (!(xi > 0.0)) continue;
    const EvalWithError ev = one_minus_fourier(f, xi);
    SectorPoint p;
    p.xi = xi;
    p.value = ev.value;
    p.modulus = std::abs(ev.value);
    p.arg = std::abs(std::arg(ev.value));
    p.eval_error = ev.error;
    p.indeterminate = !(p.modulus > ev.error);
    p.arg_error = p.indeterminate ? kPi : std::asin(std::min(1.0, ev.error / p.modulus));
    if (!p.indeterminate) rep.sup_angle = std::max(rep.sup_angle, p.arg);
    rep.points.push_back(p);
  }

  // Limit trend over the tightly certified smallest-xi points. The regressor
  // 1/(1 - log xi) sends xi -> 0 to the intercept and linearizes the
  // logarithmic approach seen in the slowly-varying families.
  std::vector<double> lx, ly;
  for (const SectorPoint& p : rep.points) {
    if (!p.indeterminate && p.arg_error <= 0.03 && lx.size() < 8) {
      lx.push_back(1.0 / (1.0 - std::log(p.xi)));
      ly.push_back(p.arg);
    }
  }
  if (lx.size() >= 4) {
    rep.limit_trend = least_squares_line(lx, ly);
    if (rep.limit_trend.valid) {
      rep.limit_estimate = std::clamp(rep.limit_trend.intercept, 0.0, kPi);
      rep.limit_valid = true;
    }
  }
  return rep;
}

LowerBoundCheck check_real_lower(const ProbSeq& f, double alpha, std::span<const double> grid) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  LowerBoundCheck res;
  if (grid.empty()) return res;
  res.ok = true;
  res.eps_found = std::numeric_limits<double>::infinity();
  for (double xi0 : grid) {
    const double xi = std::abs(xi0);
    if (!(xi > 0.0)) continue;
    const EvalWithError ev = one_minus_fourier(f, xi);
    const double lower = ev.value.real() - ev.error;
    const double eps_pt = std::max(0.0, lower) / std::pow(xi, alpha);
    if (eps_pt < res.eps_found) {
      res.eps_found = eps_pt;
      res.fail_xi = xi;
    }
    if (!(lower > 0.0)) res.ok = false;
  }
  if (!std::isfinite(res.eps_found)) {
    res.eps_found = 0.0;
    res.ok = false;
  }
  return res;
}

DerivBoundCheck check_deriv_bound(const ProbSeq& f, double alpha, std::span<const double> grid) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  DerivBoundCheck res;
  res.certified = f.meta.kf_decreasing;
  for (double xi0 : grid) {
    const double xi = std::abs(xi0);
    if (!(xi > 0.0) || xi > kPi + 1e-9) continue;
    // d/dxi F^(xi) = sum -ik f_k e^{-ik xi}
    KahanAccC acc;
    KahanAcc m1, m2;
    const cdouble w = std::polar(1.0, -xi);
    for (std::size_t start = 0; start < f.coeffs.size(); start += kBlock) {
      const std::size_t end = std::min(f.coeffs.size(), start + kBlock);
      cdouble phase = std::polar(1.0, -xi * double(start));
      for (std::size_t k = start; k < end; ++k) {
        const double a = f.coeffs[k];
        if (a != 0.0 && k > 0) {
          acc.add(cdouble{0.0, -double(k) * a} * phase);
          m1.add(double(k) * a);
          m2.add(double(k) * double(k) * a);
        }
        phase *= w;
      }
    }
    double err = kEps * (8.0 * (std::log2(double(f.coeffs.size()) + 2.0) + 8.0) * m1.value() +
                         2.0 * xi * m2.value()) +
                 double(f.coeffs.size()) * f.fp_slack;
    if (res.certified) {
      // Abel bound on the omitted derivative series: k f_k nonincreasing past
      // the window, partial exponential sums bounded by 1/sin(xi/2).
      err += f.meta.kf_at_end / std::sin(xi / 2.0);
    }
    const double c_pt = (std::abs(acc.value()) + err) * std::pow(xi, 1.0 - alpha);
    if (c_pt > res.c_found) {
      res.c_found = c_pt;
      res.worst_xi = xi;
    }
  }
  return res;
}

PolylogEval polylog_ref(double s, cdouble w, double tol) {
  if (!(s > 1.0) || !(s <= 2.0)) throw std::invalid_argument("polylog_ref: s must lie in (1,2]");
  const double r = std::abs(w);
  if (r > 1.0 + 1e-12) throw std::invalid_argument("polylog_ref: |w| must be <= 1");
  PolylogEval out;
  if (r == 0.0) return out;
  if (std::abs(w - cdouble(1.0)) < 1e-12) {
    out.value = riemann_zeta(s);
    out.error = 1e-13;
    return out;
  }

  constexpr std::size_t kCap = std::size_t(3e8);
  const bool boundary = r >= 1.0 - 1e-12;
  std::size_t target = kCap;
  if (boundary) {
    // Summation by parts: |sum_{k>N} k^{-s} w^k| <= 2 N^{-s} / |1-w|.
    const double gap = std::abs(cdouble(1.0) - w);
    target = std::min<double>(double(kCap), std::ceil(std::pow(2.0 / (tol * gap), 1.0 / s)));
  }

  KahanAccC acc;
  KahanAcc absum, mom;
  double rem = 0.0;
  std::size_t k = 1;
  for (std::size_t start = 1; start <= target; start += kBlock) {
    const std::size_t end = std::min(target, start + kBlock - 1);
    cdouble phase = std::polar(std::pow(r, double(start)), std::arg(w) * double(start));
    for (k = start; k <= end; ++k) {
      const double a = std::pow(double(k), -s);
      acc.add(a * phase);
      absum.add(a);  // >= |term| since r <= 1
      mom.add(double(k) * a);
      phase *= w;
    }
    if (!boundary) {
      rem = std::pow(double(end), -s) * std::pow(r, double(end + 1)) / (1.0 - r);
      if (rem < tol) break;
    }
  }
  if (boundary) rem = 2.0 * std::pow(double(target), -s) / std::abs(cdouble(1.0) - w);
  out.value = acc.value();
  out.error = rem + kEps * (8.0 * (std::log2(double(k) + 2.0) + 8.0) * absum.value() +
                            2.0 * std::abs(std::arg(w)) * mom.value());
  return out;
}

cdouble polylog_expansion(double s, cdouble mu) {
  if (!(s > 1.0) || !(s < 2.0)) throw std::invalid_argument("polylog_expansion: s must lie in (1,2)");
  if (!(std::abs(mu) < 2.0 * kPi)) throw std::invalid_argument("polylog_expansion: |mu| must be < 2 pi");
  if (mu.imag() == 0.0 && mu.real() > 0.0)
    throw std::invalid_argument("polylog_expansion: mu on the branch cut (0, 2 pi)");
  cdouble acc = riemann_zeta(s) + std::tgamma(1.0 - s) * std::pow(-mu, cdouble(s - 1.0));
  cdouble mupow{1.0, 0.0};
  double fact = 1.0;
  int small_streak = 0;
  for (int n = 1; n <= 64; ++n) {
    mupow *= mu;
    fact *= double(n);
    const cdouble term = riemann_zeta(s - double(n)) * mupow / fact;
    acc += term;
    if (std::abs(term) < 1e-16 * (1.0 + std::abs(acc))) {
      if (++small_streak >= 2) break;
    } else {
      small_streak = 0;
    }
  }
  return acc;
}

cdouble one_minus_gf_alpha(double alpha, cdouble w) {
  if (w == cdouble(1.0)) return {0.0, 0.0};
  return std::pow(cdouble(1.0) - w, cdouble(alpha));
}

cdouble one_minus_gf_log_mix(double eps, cdouble w) {
  if (w == cdouble(1.0)) return {0.0, 0.0};  // (Log 0)^{-1} := 0 convention
  const cdouble x = eps * std::log(cdouble(1.0) - w);
  if (std::abs(x) < 1e-4) return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0;
  return (std::exp(x) - cdouble(1.0)) / x;
}

cdouble one_minus_gf_counterexample(cdouble w) {
  if (w == cdouble(1.0)) return {0.0, 0.0};
  const cdouble om = cdouble(1.0) - w;
  return om * (cdouble(1.0) - std::log(om));
}

}  // namespace rittlab
