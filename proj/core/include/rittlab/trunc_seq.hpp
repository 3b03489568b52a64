#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rittlab/numerics.hpp"

namespace rittlab {

struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct SeqMeta {
  std::string family;  // empty for generic sequences
  std::map<std::string, double> params;
  // Set by constructors that prove k*F(k) is nonincreasing beyond the kept range;
  // enables Abel-summation error bounds for the derivative series. kf_at_end is
  // the envelope value (last kept k) * F(last kept k).
  bool kf_decreasing = false;
  double kf_at_end = 0.0;
};

// Finitely truncated complex sequence on Z+ with a certified l1 bound on the
// omitted indices (tail_bound) and on the floating-point drift of the kept
// coefficients (fp_slack, an l1 bound on |stored - exact|).
struct TruncSeq {
  std::vector<cdouble> coeffs;
  double tail_bound = 0.0;
  double fp_slack = 0.0;
  SeqMeta meta;

  void validate() const;  // throws on non-finite coefficients or a bad tail
};

// A probability on Z+, truncated: kept coefficients are nonnegative, total kept
// mass is <= 1, and tail_bound covers the gap to 1 (the omitted mass is exactly
// 1 - true kept mass, since the underlying object has full mass 1).
struct ProbSeq {
  std::vector<double> coeffs;
  double tail_bound = 0.0;
  double fp_slack = 0.0;
  SeqMeta meta;

  double kept_mass() const;
  TruncSeq as_trunc() const;
  void validate() const;
};

enum class ConvMethod { direct, fft };

struct ConvOptions {
  ConvMethod method = ConvMethod::fft;
  std::size_t cap = std::size_t{1} << 20;  // length cap; cut mass folds into tail_bound
};

NormInterval l1_norm(const TruncSeq& s);
NormInterval l1_norm(const ProbSeq& s);

TruncSeq convolve(const TruncSeq& a, const TruncSeq& b, const ConvOptions& opt = {});
ProbSeq convolve(const ProbSeq& a, const ProbSeq& b, const ConvOptions& opt = {});

TruncSeq conv_power(const TruncSeq& f, std::uint64_t n, const ConvOptions& opt = {});
ProbSeq conv_power(const ProbSeq& f, std::uint64_t n, const ConvOptions& opt = {});

struct ConvExpOptions {
  ConvOptions conv;
  double poisson_eps = 1e-12;  // target omitted Poisson mass (folded into tail_bound)
};

// e^{-t(delta_0 - F)} by uniformization: Horner accumulation of the Poisson
// mixture of convolution powers, cut where the Poisson tail drops below
// poisson_eps (never beyond the certified cutoff index).
ProbSeq conv_exp(const ProbSeq& f, double t, const ConvExpOptions& opt = {});

// Shared machinery for ||p - q||_1 where p, q truncate probabilities with full
// mass 1. Both lower estimates are rigorous: the kept l1 sum, and twice the
// largest partial-sum gap (valid because the full difference sums to zero).
struct DiffStats {
  NormInterval norm;
  double kept_abs_sum = 0.0;
  double max_cum_gap = 0.0;
  double deficit_p = 0.0;  // 1 - kept mass of p (plus fp slack)
  double deficit_q = 0.0;
  bool low_precision = false;  // interval width > 10% of the upper estimate
};

DiffStats prob_diff_stats(const ProbSeq& p, const ProbSeq& q);

// ||F^(n) - F^(n+1)||_1 with F^(n+1) = F^(n) * F on a shared truncation.
DiffStats diff_norm_stats(const ProbSeq& f, std::uint64_t n, const ConvOptions& opt = {});
NormInterval diff_norm(const ProbSeq& f, std::uint64_t n, const ConvOptions& opt = {});

// Incremental convolution powers along an ascending index grid; squares on
// doubling steps so a dyadic grid costs one convolution per row.
class PowerChain {
 public:
  PowerChain(ProbSeq base, ConvOptions opt = {});
  const ProbSeq& base() const { return base_; }
  const ProbSeq& current() const { return cur_; }
  std::uint64_t n() const { return n_; }
  void advance_to(std::uint64_t n);
  ProbSeq times_base() const;  // F^(n+1), does not advance

 private:
  ProbSeq base_;
  ProbSeq cur_;
  std::uint64_t n_ = 1;
  ConvOptions opt_;
};

struct FitWindow {
  std::size_t lo = 8;
  std::size_t hi = 0;  // 0: end of kept coefficients
};

struct FirstMomentResult {
  double partial_sum = 0.0;  // sum of k F(k) over the kept range up to hi
  LineFit slope_fit;         // log F(k) vs log k over the window (positive entries)
  bool divergent_evidence = false;  // slope >= -2 + margin (heuristic screen)
  // The partial sums of k F(k) grew by < 1% over the top half of the window;
  // without this, a "finite" classification is not treated as confirmed.
  bool partial_sum_converged = false;
};

FirstMomentResult first_moment(const ProbSeq& f, FitWindow window = {}, double margin = 0.15);

struct Periodicity {
  enum class Kind { not_adapted, adapted_not_aperiodic, aperiodic };
  Kind kind = Kind::aperiodic;
  // Modulus m: gcd of the support (not adapted) or of its differences (adapted,
  // not aperiodic). 0 for single-point support, where no finite period exists.
  std::uint64_t modulus = 0;
  std::uint64_t offset = 0;  // r with supp(F) in mZ + r, when kind is adapted_not_aperiodic
  std::size_t inspected_len = 0;
  double support_eps = 0.0;
};

Periodicity classify_periodicity(const ProbSeq& f, double support_eps = 0.0);

struct AperiodicityCheck {
  bool consistent_aperiodic = true;
  double worst_xi = 0.0;
  double worst_modulus = 0.0;
  std::vector<double> violating_xis;
};

// Flags grid points with |F^(xi)| >= 1 - tail_bound - tol; the Fourier-side
// oracle for classify_periodicity.
AperiodicityCheck fourier_aperiodicity_check(const ProbSeq& f, std::span<const double> grid,
                                             double tol = 1e-9);

// Roots of unity 2*pi*j/m for m <= m_max folded into (0, pi], merged with a
// uniform grid of uniform_n points.
std::vector<double> aperiodicity_grid(std::uint64_t m_max = 25, std::size_t uniform_n = 1024);

// F = beta G + (1-beta) delta_0 with beta = 1 - F(0)/2, available when F(0) > 0.
struct AdaptedSplit {
  bool available = false;
  double beta = 0.0;
  ProbSeq g;
};

AdaptedSplit adapted_split(const ProbSeq& f);

// F~(k) = F(k m): the rescaling that maps a probability supported on mZ back
// to an adapted one.
ProbSeq rescale_support(const ProbSeq& f, std::uint64_t m);

}  // namespace rittlab
