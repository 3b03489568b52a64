#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rittlab/trunc_seq.hpp"

namespace rittlab {

// Point mass at m. len pads with zeros (default m+1).
ProbSeq make_delta(std::uint64_t m, std::size_t len = 0);

// (1-beta) at 0, beta at 1.
ProbSeq make_bernoulli(double beta, std::size_t len = 2);

// Poisson(s) weights; the kept range extends to max(len, s + 12 sqrt(s) + 25)
// so the bulk is always captured, with the computed deficit as tail_bound.
ProbSeq make_poisson(double s, std::size_t len);

// One-sided fractional family: coefficients of 1 - (1-w)^alpha, alpha in (0,1).
// Stable multiplicative recurrence; the tail is the exact telescoped product
// prod_{j<=M} (j-alpha)/j, not an asymptotic estimate.
ProbSeq make_alpha_frac(double alpha, std::size_t len);

// Normalized power tail k^{-1-alpha}/zeta(1+alpha), alpha in (0,1]; tail by
// integral comparison.
ProbSeq make_zeta(double alpha, std::size_t len);

// Coefficientwise average of the fractional family over alpha in [0,eps]:
// Gauss-Legendre in alpha, streamed over k, with an order-doubling error
// estimate folded into fp_slack.
ProbSeq make_log_mix(double eps, std::size_t len, int quad_order = 32);

// F(k) = 1/(k(k-1)) for k >= 2; the tail telescopes exactly to 1/M.
ProbSeq make_counterexample_log(std::size_t len);

struct PowerTailTerm {
  double c = 0.0;
  double alpha = 0.0;
};

// F(k) = sum_j c_j k^{-1-alpha_j} + P(k) on k >= 1, F(0) = P(0). The caller
// supplies a perturbation P making F a probability; violations are rejected
// with the offending index.
ProbSeq make_power_tail_mix(std::span<const PowerTailTerm> terms, const TruncSeq& P, std::size_t len);
ProbSeq make_power_tail_mix(std::span<const PowerTailTerm> terms, std::size_t len);

// Convex combination, computed coefficientwise in the given order.
ProbSeq mixture(std::span<const double> weights, std::span<const ProbSeq> parts);

struct SubordinateOptions {
  ConvOptions conv{};
  double eps_stop = 1e-12;  // stop once the unconsumed outer mass is this small
};

// H = sum_k outer(k) inner^(k), windowed at len. Evaluated blockwise
// (Paterson-Stockmeyer): ~2 sqrt(J) convolutions for J outer terms instead of J.
ProbSeq subordinate_prob(const ProbSeq& outer, const ProbSeq& inner, std::size_t len,
                         const SubordinateOptions& opt = {});

// Fractional subordination of the log-mixture family: outer alpha_frac(beta)
// truncated at outer_len, inner log_mix(eps) on the full window.
ProbSeq make_log_mix_sub(double eps, double beta, std::size_t outer_len, std::size_t len,
                         const SubordinateOptions& opt = {});

// Config-facing constructor dispatch. kind is one of: delta, bernoulli,
// poisson, alpha_frac, zeta, zeta_one, log_mix, log_mix_sub, power_tail_mix,
// counterexample_log, mixture, subordinate.
struct FamilySpec {
  std::string kind;
  std::size_t length = 0;
  double alpha = 0.5;
  double beta = 0.5;
  double s = 1.0;
  double eps = 1.0;
  std::uint64_t m = 1;
  std::size_t outer_length = 4096;
  int quad_order = 32;
  std::vector<PowerTailTerm> terms;
  std::vector<double> perturbation;       // P for power_tail_mix (real, index 0 up)
  std::vector<double> weights;            // mixture
  std::vector<FamilySpec> components;     // mixture parts or {outer, inner}
};

ProbSeq build_family(const FamilySpec& spec);

}  // namespace rittlab
