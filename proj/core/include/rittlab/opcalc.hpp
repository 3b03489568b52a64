#pragma once
// Finite-dimensional operator calculus: subordination of a matrix to a walk
// law, resolvent-based Ritt/Kreiss constants on shrinking contours, fractional
// powers of I - T by three routes, and spectral-mapping checks.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rittlab/trunc_seq.hpp"

namespace rittlab {

using DenseOp = Eigen::MatrixXcd;

// Spectral norm (largest singular value) by power iteration on M^H M with a
// fixed deterministic start; accurate to ~1e-10 relative on matrices with a
// reasonable singular gap, which is all the scans need.
double operator_norm(const DenseOp& m);

struct PowerBoundResult {
  double bound = 0.0;       // max over 1 <= n <= steps of ||T^n||, at least 1 counting n = 0
  std::uint64_t argmax = 0; // n attaining the max (0 for the identity term)
  std::uint64_t steps = 0;  // powers actually formed
  bool aborted = false;     // growth passed the abort ceiling: evidence against power-boundedness
  // The sup over ALL n is certified once some ||T^n|| <= 1: stopping early is
  // then sound because ||T^{n+k}|| <= ||T^n|| ||T^k||.
  bool certified = false;
};

PowerBoundResult power_bound(const DenseOp& t, std::uint64_t n_max);

struct OpWithError {
  DenseOp op;
  double error = 0.0;  // operator-norm bound on the truncation + rounding
  bool error_certified = true;
  std::string warning;
};

// Psi(F;T) = sum F(k) T^k over the kept range, Horner form. The error bound
// uses a finite-horizon power-bound estimate c(T); when that estimate is not
// certified the bound is reported but flagged.
OpWithError psi_op(const ProbSeq& f, const DenseOp& t, std::uint64_t horizon = 64);

struct ResidualCheck {
  double residual = 0.0;
  double budget = 0.0;
  bool ok = false;  // residual <= budget
};

// || psi_op(F,T)^n - psi_op(F^(n),T) || against the combined error budget.
ResidualCheck subordination_identity_check(const ProbSeq& f, const DenseOp& t, std::uint64_t n,
                                           const ConvOptions& opt = {});

enum class ResolventKind { ritt, kreiss };

struct ResolventPoint {
  cdouble lambda;
  double value = 0.0;  // |lambda-1| * ||R|| or (|lambda|-1) * ||R||
  bool near_singular = false;
};

struct ResolventScan {
  ResolventKind kind = ResolventKind::ritt;
  std::vector<ResolventPoint> points;
  double constant = 0.0;           // sup of values over the contour
  std::vector<double> radii;       // 1 + 2^{-j}, descending towards 1
  std::vector<double> radius_sup;  // per-radius sup, aligned with radii
  bool any_near_singular = false;
};

struct ContourParams {
  int j_min = 0;  // radii 1 + 2^{-j}
  int j_max = 10;
  int angles = 256;
};

// Triangular inputs take a direct triangular-solve path; everything else is
// factored once per contour point.
ResolventScan resolvent_scan(const DenseOp& t, ResolventKind kind, const ContourParams& params = {});

enum class FracMethod { series, eigen, kato, automatic };

struct FracPowerResult {
  DenseOp op;  // (I - T)^alpha
  double budget = 0.0;
  FracMethod used = FracMethod::automatic;
  std::string note;
};

// (I - T)^alpha for alpha in (0,1).
//  series: I - sum a_k T^k with the binomial-tail budget (power-bound scaled);
//  eigen:  V diag((1-lambda)^alpha) V^{-1}, rejected when the eigenbasis
//          condition estimate exceeds 1e8;
//  kato:   resolvent-integral reconstruction, dimension at most 4 (larger
//          dimensions: use kato_resolvent_check, reconstruction is ill-posed);
//  automatic: triangular or Schur square root for alpha = 1/2, else eigen,
//          else series when the spectral radius leaves room.
FracPowerResult frac_power(const DenseOp& t, double alpha, FracMethod method = FracMethod::automatic,
                           std::size_t series_terms = 4096);

struct KatoResolventCheck {
  double max_residual = 0.0;  // worst || quadrature - reference || over the lambda grid
  double budget = 0.0;        // quadrature truncation + refinement estimate
  bool ok = false;
};

// Evaluates the sectorial resolvent integral for (lambda I + (I-T)^alpha)^{-1}
// on a small positive lambda grid and compares against a reference route.
KatoResolventCheck kato_resolvent_check(const DenseOp& t, double alpha,
                                        std::span<const double> lambda_grid);

struct RittFromKreissReport {
  ResolventScan kreiss_of_t;
  ResolventScan ritt_of_s;
  DenseOp s;  // I - (I-T)^alpha
  double frac_budget = 0.0;
};

RittFromKreissReport ritt_from_kreiss_check(const DenseOp& t, double alpha);

// Discretized integration operator on (0,1): strictly lower triangle h plus
// half-weight diagonal, h = 1/d.
DenseOp volterra_v(std::size_t d);
// T = (I + V)^{-1}; lower triangular with constant diagonal (1 + h/2)^{-1}.
DenseOp volterra_op(std::size_t d);
// Nilpotent lower shift (truncation artifact: the infinite shift is an isometry).
DenseOp shift_op(std::size_t d);

struct SpectralMapCheck {
  double distance = 0.0;       // Hausdorff distance between spectra
  double budget = 0.0;
  double eig_condition = 0.0;  // eigenbasis condition estimate of T
  bool ok = false;
};

SpectralMapCheck spectral_map_check(const ProbSeq& f, const DenseOp& t);

struct GammaRittRow {
  double gamma = 0.0;
  double constant = 0.0;
  bool near_singular = false;
  bool pass = false;  // finite scan, no near-singular points, constant <= ceiling
};

struct KrittSuiteReport {
  double base_ritt_constant = 0.0;
  std::vector<GammaRittRow> rows;
  double largest_pass = 0.0;
};

// For each gamma in (1,2): scan I - (I-T)^gamma, with (I-T)^gamma formed as
// (I-T) * (I-T)^{gamma-1}. The ceiling is the caller's recorded baseline;
// +infinity means "any finite constant passes".
KrittSuiteReport kritt_equivalence_suite(const DenseOp& t, std::span<const double> gammas,
                                         double ceiling);

// Unitary conjugation of a random diagonal with moduli <= max_modulus.
DenseOp make_random_normal_contraction(std::size_t d, std::uint64_t seed, double max_modulus = 0.98);

}  // namespace rittlab
