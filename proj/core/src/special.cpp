#include "rittlab/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rittlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double riemann_zeta(double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("riemann_zeta: non-finite argument");
  if (s == 1.0) throw std::invalid_argument("riemann_zeta: pole at s = 1");
  if (s < 0.5) {
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
    const double factor =
        std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) * std::tgamma(1.0 - s);
    return factor * riemann_zeta(1.0 - s);
  }
  // Euler-Maclaurin at N: partial sum + N^{1-s}/(s-1) - N^{-s}/2 + Bernoulli terms.
  const std::size_t N = 100000;
  KahanAcc acc;
  for (std::size_t k = 1; k < N; ++k) acc.add(std::pow(double(k), -s));
  const double Ns = std::pow(double(N), -s);
  acc.add(Ns * double(N) / (s - 1.0));  // N^{1-s}/(s-1)
  acc.add(Ns / 2.0);
  acc.add(s * Ns / double(N) / 12.0);
  const double N3 = Ns / (double(N) * double(N) * double(N));
  acc.add(-s * (s + 1.0) * (s + 2.0) * N3 / 720.0);
  const double N5 = N3 / (double(N) * double(N));
  acc.add(s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * N5 / 30240.0);
  return acc.value();
}

double gamma_neg_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("gamma_neg_alpha: alpha must be in (0,1)");
  return -kPi / (std::sin(kPi * alpha) * std::tgamma(1.0 + alpha));
}

double b_alpha(double alpha) {
  return -gamma_neg_alpha(alpha) / riemann_zeta(1.0 + alpha);
}

QuadRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  const int n = order;
  QuadRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (double(i) + 0.75) / (double(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / double(j);
      }
      pp = double(n) * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::size_t poisson_cutoff(double t) {
  if (t < 0.0) throw std::invalid_argument("poisson_cutoff: t must be >= 0");
  return std::size_t(std::ceil(t + 12.0 * std::sqrt(t) + 25.0));
}

std::vector<double> poisson_weights(double t, std::size_t M) {
  if (t < 0.0) throw std::invalid_argument("poisson_weights: t must be >= 0");
  std::vector<double> w(M + 1, 0.0);
  if (t == 0.0) {
    w[0] = 1.0;
    return w;
  }
  if (t <= 700.0) {
    w[0] = std::exp(-t);
    for (std::size_t n = 1; n <= M; ++n) w[n] = w[n - 1] * t / double(n);
  } else {
    const double lt = std::log(t);
    for (std::size_t n = 0; n <= M; ++n) {
      const double lw = -t + double(n) * lt - std::lgamma(double(n) + 1.0);
      w[n] = lw < -745.0 ? 0.0 : std::exp(lw);
    }
  }
  return w;
}

double poisson_tail_from_weights(const std::vector<double>& weights) {
  KahanAcc acc;
  for (double x : weights) acc.add(x);
  const double tail = 1.0 - acc.value();
  return tail > 0.0 ? tail : 0.0;
}

}  // namespace rittlab
