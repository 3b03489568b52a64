#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rittlab/trunc_seq.hpp"

namespace rittlab {

struct EvalWithError {
  cdouble value{0.0, 0.0};
  double error = 0.0;  // absolute bound: omitted tail + rounding + input slack
};

// F^(xi) = sum F(k) e^{-ik xi} over the kept range.
EvalWithError fourier(const TruncSeq& f, double xi);
EvalWithError fourier(const ProbSeq& f, double xi);

// phi_F(w) = sum F(k) w^k, |w| <= 1 (+1e-12 grace). Interior points use Horner
// with geometric damping of the rounding; boundary points use the same phase
// path as fourier, so gen_fn(f, polar(1,-xi)) == fourier(f, xi) bitwise.
EvalWithError gen_fn(const TruncSeq& f, cdouble w);
EvalWithError gen_fn(const ProbSeq& f, cdouble w);

// 1 - F^(xi) for a probability, evaluated without the 1 - (near 1) subtraction:
// sum F(k)(1 - e^{-ik xi}) plus the exact kept-mass deficit. Error: tail_bound
// (covers the omitted oscillation) + rounding.
EvalWithError one_minus_fourier(const ProbSeq& f, double xi);

struct SectorPoint {
  double xi = 0.0;
  cdouble value{0.0, 0.0};   // 1 - F^(xi)
  double modulus = 0.0;
  double arg = 0.0;          // |Arg value|, in [0, pi]
  double eval_error = 0.0;
  double arg_error = 0.0;    // asin(error/modulus); pi when indeterminate
  bool indeterminate = false;  // modulus <= eval_error
};

struct SectorReport {
  std::vector<SectorPoint> points;  // ascending xi
  double sup_angle = 0.0;           // over determinate points
  // xi -> 0 trend: |Arg| fitted against 1/(1 - log xi) over the tightly
  // certified smallest-xi points; the intercept extrapolates the limit.
  LineFit limit_trend;
  double limit_estimate = 0.0;
  bool limit_valid = false;
};

// Geometric grid pi 2^{-j}, j = J-1..0, ascending (largest point is pi).
std::vector<double> geometric_xi_grid(int J = 40);

SectorReport sector_report(const ProbSeq& f, std::span<const double> grid);

// Largest eps with 1 - Re F^(xi) >= eps |xi|^alpha across the grid, within the
// evaluation error (grid-truth only).
struct LowerBoundCheck {
  bool ok = false;
  double eps_found = 0.0;
  double fail_xi = 0.0;  // argmin point when the bound degenerates to 0
};
LowerBoundCheck check_real_lower(const ProbSeq& f, double alpha, std::span<const double> grid);

// Smallest c with |d/dxi F^(xi)| <= c |xi|^{alpha-1} across the grid. The
// derivative tail is certified only when the family proves k F(k)
// nonincreasing (meta.kf_decreasing); otherwise the kept-sum value is reported
// with certified = false.
struct DerivBoundCheck {
  bool certified = false;
  double c_found = 0.0;
  double worst_xi = 0.0;  // argmax point
};
DerivBoundCheck check_deriv_bound(const ProbSeq& f, double alpha, std::span<const double> grid);

// Reference polylogarithm Li_s(w) on |w| <= 1, s in (1,2]: direct series with a
// certified remainder (geometric damping inside the disc, a Dirichlet-kernel
// summation-by-parts bound on the circle).
struct PolylogEval {
  cdouble value{0.0, 0.0};
  double error = 0.0;
};
PolylogEval polylog_ref(double s, cdouble w, double tol = 2e-11);

// Boundary expansion of Li_s(e^mu) near mu = 0 (|mu| < 2pi, mu not in (0,2pi)):
// zeta(s) + Gamma(1-s)(-mu)^{s-1} + sum_{n>=1} zeta(s-n) mu^n / n!.
// Validation form; s must be non-integer in (1,2).
cdouble polylog_expansion(double s, cdouble mu);

// Closed forms used as oracles for 1 - phi_F.
cdouble one_minus_gf_alpha(double alpha, cdouble w);        // (1-w)^alpha
cdouble one_minus_gf_log_mix(double eps, cdouble w);        // ((1-w)^eps - 1) / (eps Log(1-w))
cdouble one_minus_gf_counterexample(cdouble w);             // (1-w)(1 - Log(1-w))

}  // namespace rittlab
