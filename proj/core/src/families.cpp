#include "rittlab/families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rittlab/special.hpp"

namespace rittlab {

namespace {

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument(what); }

void require_open_unit(double x, const char* name) {
  if (!(x > 0.0) || !(x < 1.0)) reject(std::string(name) + " must lie in (0,1)");
}

}  // namespace

ProbSeq make_delta(std::uint64_t m, std::size_t len) {
  const std::size_t n = std::max<std::size_t>(len, std::size_t(m) + 1);
  ProbSeq f;
  f.coeffs.assign(n, 0.0);
  f.coeffs[m] = 1.0;
  f.meta.family = "delta";
  f.meta.params["m"] = double(m);
  f.meta.kf_decreasing = true;
  return f;
}

ProbSeq make_bernoulli(double beta, std::size_t len) {
  require_open_unit(beta, "beta");
  ProbSeq f;
  f.coeffs.assign(std::max<std::size_t>(len, 2), 0.0);
  f.coeffs[0] = 1.0 - beta;
  f.coeffs[1] = beta;
  f.meta.family = "bernoulli";
  f.meta.params["beta"] = beta;
  f.meta.kf_decreasing = true;
  return f;
}

ProbSeq make_poisson(double s, std::size_t len) {
  if (!(s > 0.0)) reject("s must be > 0");
  const std::size_t n = std::max(len, poisson_cutoff(s) + 1);
  ProbSeq f;
  f.coeffs = poisson_weights(s, n - 1);
  f.tail_bound = poisson_tail_from_weights(f.coeffs);
  f.fp_slack = 2.0 * kEps * std::log2(double(n) + 2.0);
  f.meta.family = "poisson";
  f.meta.params["s"] = s;
  // k w_k halves each step beyond 2s+2, so the end envelope is valid.
  f.meta.kf_decreasing = true;
  f.meta.kf_at_end = double(n - 1) * f.coeffs[n - 1];
  return f;
}

ProbSeq make_alpha_frac(double alpha, std::size_t len) {
  require_open_unit(alpha, "alpha");
  if (len < 2) reject("length must be >= 2");
  ProbSeq f;
  f.coeffs.assign(len, 0.0);
  const std::size_t M = len - 1;
  double a = alpha;       // a_k
  double t = 1.0 - alpha; // prod_{j<=k} (j-alpha)/j = 1 - sum_{j<=k} a_j, exactly
  KahanAcc moment;
  f.coeffs[1] = a;
  moment.add(a);
  for (std::size_t k = 1; k < M; ++k) {
    a *= (double(k) - alpha) / double(k + 1);
    f.coeffs[k + 1] = a;
    moment.add(double(k + 1) * a);
    t *= (double(k + 1) - alpha) / double(k + 1);
  }
  // t is the exact omitted mass up to the multiplicative rounding of M factors.
  f.tail_bound = t * (1.0 + double(M) * 4.0 * kEps);
  f.fp_slack = 4.0 * kEps * moment.value();  // per-step relative drift, weighted by k a_k
  f.meta.family = "alpha_frac";
  f.meta.params["alpha"] = alpha;
  f.meta.kf_decreasing = true;  // (k+1) a_{k+1} = (k-alpha) a_k < k a_k
  f.meta.kf_at_end = double(M) * f.coeffs[M];
  return f;
}

ProbSeq make_zeta(double alpha, std::size_t len) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) reject("alpha must lie in (0,1]");
  if (len < 2) reject("length must be >= 2");
  const double z = riemann_zeta(1.0 + alpha);
  ProbSeq f;
  f.coeffs.assign(len, 0.0);
  const std::size_t M = len - 1;
  for (std::size_t k = 1; k <= M; ++k) f.coeffs[k] = std::pow(double(k), -1.0 - alpha) / z;
  f.tail_bound = std::pow(double(M), -alpha) / (alpha * z) * (1.0 + 1e-12);
  f.fp_slack = 8.0 * kEps;  // per-term relative rounding on a mass <= 1
  f.meta.family = "zeta";
  f.meta.params["alpha"] = alpha;
  f.meta.kf_decreasing = true;
  f.meta.kf_at_end = std::pow(double(M), -alpha) / z;
  return f;
}

ProbSeq make_log_mix(double eps, std::size_t len, int quad_order) {
  if (!(eps > 0.0) || !(eps <= 1.0)) reject("eps must lie in (0,1]");
  if (quad_order < 8) reject("quad_order must be >= 8");
  if (len < 2) reject("length must be >= 2");

  const QuadRule lo = gauss_legendre(quad_order);
  const QuadRule hi = gauss_legendre(2 * quad_order);
  auto nodes_on = [eps](const QuadRule& g) {
    std::vector<double> a(g.nodes.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = eps * (g.nodes[i] + 1.0) / 2.0;
    return a;
  };
  const std::vector<double> alo = nodes_on(lo);
  const std::vector<double> ahi = nodes_on(hi);
  // The eps-average cancels the interval length: weight w_i/2 per node.
  std::vector<double> clo(alo.size()), chi(ahi.size());

  ProbSeq f;
  f.coeffs.assign(len, 0.0);
  const std::size_t M = len - 1;
  KahanAcc quad_diff;
  for (std::size_t k = 1; k <= M; ++k) {
    KahanAcc blo, bhi;
    for (std::size_t i = 0; i < alo.size(); ++i) {
      clo[i] = k == 1 ? alo[i] : clo[i] * (double(k - 1) - alo[i]) / double(k);
      blo.add(0.5 * lo.weights[i] * clo[i]);
    }
    for (std::size_t i = 0; i < ahi.size(); ++i) {
      chi[i] = k == 1 ? ahi[i] : chi[i] * (double(k - 1) - ahi[i]) / double(k);
      bhi.add(0.5 * hi.weights[i] * chi[i]);
    }
    f.coeffs[k] = bhi.value();
    quad_diff.add(std::abs(bhi.value() - blo.value()));
  }
  if (quad_diff.value() > 1e-10)
    throw std::runtime_error("make_log_mix: quadrature did not converge under order doubling");
  f.fp_slack = quad_diff.value() + 8.0 * kEps;
  f.tail_bound = std::max(0.0, 1.0 - f.kept_mass()) + f.fp_slack;
  f.meta.family = "log_mix";
  f.meta.params["eps"] = eps;
  // Positive average of families with nonincreasing k a_k^(alpha).
  f.meta.kf_decreasing = true;
  f.meta.kf_at_end = double(M) * f.coeffs[M];
  return f;
}

ProbSeq make_counterexample_log(std::size_t len) {
  if (len < 3) reject("length must be >= 3");
  ProbSeq f;
  f.coeffs.assign(len, 0.0);
  const std::size_t M = len - 1;
  for (std::size_t k = 2; k <= M; ++k) f.coeffs[k] = 1.0 / (double(k) * double(k - 1));
  f.tail_bound = 1.0 / double(M);  // telescoping: sum_{k>M} = 1/M exactly
  f.fp_slack = 8.0 * kEps;
  f.meta.family = "counterexample_log";
  f.meta.kf_decreasing = true;  // k F(k) = 1/(k-1)
  f.meta.kf_at_end = 1.0 / double(M - 1);
  return f;
}

ProbSeq make_power_tail_mix(std::span<const PowerTailTerm> terms, const TruncSeq& P, std::size_t len) {
  if (terms.empty()) reject("terms must be nonempty");
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (!(terms[j].c > 0.0)) reject("c_" + std::to_string(j + 1) + " must be > 0");
    require_open_unit(terms[j].alpha, ("alpha_" + std::to_string(j + 1)).c_str());
    if (j > 0 && !(terms[j].alpha > terms[j - 1].alpha)) reject("alphas must be strictly increasing");
  }
  if (len < 2) reject("length must be >= 2");
  if (P.coeffs.size() > len) reject("perturbation longer than the requested window");
  for (std::size_t k = 0; k < P.coeffs.size(); ++k) {
    if (std::abs(P.coeffs[k].imag()) > 1e-15)
      reject("perturbation must be real; offending index " + std::to_string(k));
  }

  ProbSeq f;
  f.coeffs.assign(len, 0.0);
  const std::size_t M = len - 1;
  std::vector<KahanAcc> psum(terms.size());  // sum_{k<=M} k^{-1-alpha_j}
  f.coeffs[0] = P.coeffs.empty() ? 0.0 : P.coeffs[0].real();
  if (f.coeffs[0] < -1e-14) reject("negative coefficient at index 0");
  f.coeffs[0] = std::max(0.0, f.coeffs[0]);
  for (std::size_t k = 1; k <= M; ++k) {
    KahanAcc v;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const double p = std::pow(double(k), -1.0 - terms[j].alpha);
      psum[j].add(p);
      v.add(terms[j].c * p);
    }
    if (k < P.coeffs.size()) v.add(P.coeffs[k].real());
    const double val = v.value();
    if (val < -1e-14) reject("negative coefficient at index " + std::to_string(k));
    f.coeffs[k] = std::max(0.0, val);
  }

  // Exact power tails via the zeta normalization; P contributes its own bound.
  KahanAcc tail;
  bool perturbed = false;
  for (std::size_t j = 0; j < terms.size(); ++j)
    tail.add(terms[j].c * std::max(0.0, riemann_zeta(1.0 + terms[j].alpha) - psum[j].value()));
  for (const cdouble& c : P.coeffs) perturbed = perturbed || c != cdouble{0.0, 0.0};
  const double mass_gap = std::abs(f.kept_mass() + tail.value() - 1.0);
  if (mass_gap > 1e-8 + P.tail_bound + P.fp_slack)
    reject("total mass differs from 1 by " + std::to_string(mass_gap));
  f.tail_bound = tail.value() * (1.0 + 1e-12) + P.tail_bound + 1e-13;
  f.fp_slack = 1e-13 + P.fp_slack;
  f.meta.family = "power_tail_mix";
  f.meta.params["n_terms"] = double(terms.size());
  if (!perturbed) {
    f.meta.kf_decreasing = true;
    KahanAcc kf;
    for (const PowerTailTerm& t : terms) kf.add(t.c * std::pow(double(M), -t.alpha));
    f.meta.kf_at_end = kf.value();
  }
  return f;
}

ProbSeq make_power_tail_mix(std::span<const PowerTailTerm> terms, std::size_t len) {
  return make_power_tail_mix(terms, TruncSeq{}, len);
}

ProbSeq mixture(std::span<const double> weights, std::span<const ProbSeq> parts) {
  if (weights.size() != parts.size() || parts.empty()) reject("weights and parts must match and be nonempty");
  KahanAcc wsum;
  std::size_t len = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) reject("weights must be nonnegative");
    wsum.add(weights[i]);
    len = std::max(len, parts[i].coeffs.size());
  }
  if (std::abs(wsum.value() - 1.0) > 1e-12) reject("weights must sum to 1");

  ProbSeq f;
  f.coeffs.assign(len, 0.0);
  // Plain left-to-right accumulation: coefficientwise identical to the
  // convexity definition evaluated in part order.
  for (std::size_t k = 0; k < len; ++k) {
    double v = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (k < parts[i].coeffs.size()) v += weights[i] * parts[i].coeffs[k];
    }
    f.coeffs[k] = v;
  }
  double tail = 0.0, slack = double(parts.size()) * 2.0 * kEps;
  bool kf_dec = true;
  double kf_end = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    tail += weights[i] * parts[i].tail_bound;
    slack += weights[i] * parts[i].fp_slack;
    kf_dec = kf_dec && parts[i].meta.kf_decreasing;
    kf_end += weights[i] * parts[i].meta.kf_at_end;
  }
  f.tail_bound = tail;
  f.fp_slack = slack;
  f.meta.family = "mixture";
  f.meta.kf_decreasing = kf_dec;
  f.meta.kf_at_end = kf_end;  // upper envelope: shorter parts only shrink
  return f;
}

ProbSeq subordinate_prob(const ProbSeq& outer, const ProbSeq& inner, std::size_t len,
                         const SubordinateOptions& opt) {
  outer.validate();
  inner.validate();
  if (len < 1) reject("length must be >= 1");
  ConvOptions conv = opt.conv;
  conv.cap = len;

  const std::size_t olen = outer.coeffs.size();
  // suffix[k] = outer mass at indices >= k plus the outer tail.
  std::vector<double> suffix(olen + 1, outer.tail_bound);
  for (std::size_t k = olen; k-- > 0;) suffix[k] = suffix[k + 1] + outer.coeffs[k];
  std::size_t J = olen - 1;
  for (std::size_t k = 0; k < olen; ++k) {
    if (suffix[k + 1] <= opt.eps_stop) {
      J = k;
      break;
    }
  }

  const std::size_t S = std::size_t(std::ceil(std::sqrt(double(J + 1))));
  const std::size_t G = (J + S) / S;  // blocks of S outer coefficients

  // Inner powers inner^(0..S-1) and the block stride Q = inner^(S).
  std::vector<ProbSeq> pow(S);
  pow[0] = make_delta(0);
  for (std::size_t s = 1; s < S; ++s) pow[s] = convolve(pow[s - 1], inner, conv);
  ProbSeq Q;
  if (G > 1) Q = convolve(pow[S - 1], inner, conv);

  auto block_sum = [&](std::size_t g, double& slack_out) {
    ProbSeq c;
    slack_out = 0.0;
    std::size_t maxlen = 1;
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t k = g * S + s;
      if (k <= J && k < olen && outer.coeffs[k] != 0.0) maxlen = std::max(maxlen, pow[s].coeffs.size());
    }
    c.coeffs.assign(maxlen, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t k = g * S + s;
      if (k > J || k >= olen) break;
      const double o = outer.coeffs[k];
      if (o == 0.0) continue;
      for (std::size_t i = 0; i < pow[s].coeffs.size(); ++i) c.coeffs[i] += o * pow[s].coeffs[i];
      slack_out += o * pow[s].fp_slack + 2.0 * kEps * o;
    }
    return c;
  };

  double slack_g = 0.0;
  ProbSeq acc = block_sum(G - 1, slack_g);
  acc.fp_slack = slack_g;
  for (std::size_t g = G - 1; g-- > 0;) {
    acc = convolve(acc, Q, conv);
    ProbSeq c = block_sum(g, slack_g);
    if (acc.coeffs.size() < c.coeffs.size()) acc.coeffs.resize(c.coeffs.size(), 0.0);
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) acc.coeffs[i] += c.coeffs[i];
    acc.fp_slack += slack_g + 2.0 * kEps;
  }

  acc.tail_bound = std::max(0.0, 1.0 - acc.kept_mass()) + acc.fp_slack;
  acc.meta = SeqMeta{};
  acc.meta.family = "subordinate";
  return acc;
}

ProbSeq make_log_mix_sub(double eps, double beta, std::size_t outer_len, std::size_t len,
                         const SubordinateOptions& opt) {
  require_open_unit(beta, "beta");
  const ProbSeq outer = make_alpha_frac(beta, outer_len);
  const ProbSeq inner = make_log_mix(eps, len);
  ProbSeq f = subordinate_prob(outer, inner, len, opt);
  f.meta.family = "log_mix_sub";
  f.meta.params["eps"] = eps;
  f.meta.params["beta"] = beta;
  return f;
}

ProbSeq build_family(const FamilySpec& spec) {
  const std::string& k = spec.kind;
  if (k == "delta") return make_delta(spec.m, spec.length);
  if (k == "bernoulli") return make_bernoulli(spec.beta, std::max<std::size_t>(spec.length, 2));
  if (k == "poisson") return make_poisson(spec.s, spec.length);
  if (k == "alpha_frac") return make_alpha_frac(spec.alpha, spec.length);
  if (k == "zeta") return make_zeta(spec.alpha, spec.length);
  if (k == "zeta_one") return make_zeta(1.0, spec.length);
  if (k == "log_mix") return make_log_mix(spec.eps, spec.length, spec.quad_order);
  if (k == "log_mix_sub")
    return make_log_mix_sub(spec.eps, spec.beta, spec.outer_length, spec.length);
  if (k == "counterexample_log") return make_counterexample_log(spec.length);
  if (k == "power_tail_mix") {
    TruncSeq P;
    P.coeffs.reserve(spec.perturbation.size());
    for (double v : spec.perturbation) P.coeffs.emplace_back(v, 0.0);
    return make_power_tail_mix(spec.terms, P, spec.length);
  }
  if (k == "mixture") {
    if (spec.components.size() != spec.weights.size() || spec.components.empty())
      reject("mixture requires matching weights and components");
    std::vector<ProbSeq> parts;
    parts.reserve(spec.components.size());
    for (const FamilySpec& c : spec.components) parts.push_back(build_family(c));
    return mixture(spec.weights, parts);
  }
  if (k == "subordinate") {
    if (spec.components.size() != 2) reject("subordinate requires exactly two components");
    const ProbSeq outer = build_family(spec.components[0]);
    const ProbSeq inner = build_family(spec.components[1]);
    return subordinate_prob(outer, inner, spec.length);
  }
  reject("unknown family kind '" + k + "'");
}

}  // namespace rittlab
