#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rittlab/numerics.hpp"

namespace rittlab {

// Riemann zeta for real s != 1. Euler-Maclaurin partial sums for s >= 0.5,
// the functional equation below that. Absolute accuracy ~1e-14 in the range
// used here (normalizations, polylogarithm expansion coefficients).
double riemann_zeta(double s);

// Gamma(-alpha) for alpha in (0,1), via the reflection formula
// Gamma(-a) Gamma(1+a) = -pi / sin(pi a).
double gamma_neg_alpha(double alpha);

// b_alpha = -Gamma(-alpha) / zeta(1+alpha) > 0: the coefficient of (i xi)^alpha
// in the boundary expansion of the zeta-family transform.
double b_alpha(double alpha);

struct QuadRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // positive, sum to 2
};

// Gauss-Legendre rule by Newton iteration on the Legendre recurrence.
QuadRule gauss_legendre(int order);

// Poisson truncation index M = ceil(t + 12 sqrt(t) + 25); tail beyond M is
// below 1e-12 for t <= 1e6 (verified numerically in the test suite).
std::size_t poisson_cutoff(double t);

// Weights e^{-t} t^n / n! for n = 0..M inclusive. Direct recurrence for
// moderate t, log-space otherwise (weights that underflow come back as 0,
// which only widens the reported tail).
std::vector<double> poisson_weights(double t, std::size_t M);

// 1 - sum(weights), clamped at 0: certified bound on the omitted Poisson mass.
double poisson_tail_from_weights(const std::vector<double>& weights);

}  // namespace rittlab
