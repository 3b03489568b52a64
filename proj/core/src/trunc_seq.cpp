#include "rittlab/trunc_seq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rittlab/fft.hpp"
#include "rittlab/special.hpp"

namespace rittlab {

namespace {

constexpr double kProbMassTol = 1e-9;
constexpr double kNegFloor = -1e-14;

struct MassStats {
  double l1 = 0.0;
  double l2 = 0.0;
};

MassStats mass_stats(std::span<const double> xs) {
  KahanAcc s1, s2;
  for (double x : xs) {
    s1.add(std::abs(x));
    s2.add(x * x);
  }
  return {s1.value(), std::sqrt(s2.value())};
}

MassStats mass_stats(std::span<const cdouble> xs) {
  KahanAcc s1, s2;
  for (const cdouble& x : xs) {
    s1.add(std::abs(x));
    s2.add(std::norm(x));
  }
  return {s1.value(), std::sqrt(s2.value())};
}

double log2_of(std::size_t n) { return std::log2(double(n < 2 ? 2 : n)); }

// l1 bound on the rounding drift of one FFT convolution: sqrt(n) * l2 error
// bound with the standard log-factor per transform stage.
double fft_l1_slack(std::size_t nfft, const MassStats& a, const MassStats& b) {
  return 6.0 * (log2_of(nfft) + 1.0) * kEps * std::sqrt(double(nfft)) * (a.l2 * b.l1 + b.l2 * a.l1);
}

double direct_l1_slack(const MassStats& a, const MassStats& b) {
  return 4.0 * kEps * a.l1 * b.l1;
}

// Method-independent drift model (max of both routes), so direct and FFT runs
// certify identical budgets and their artifacts diff clean at tolerance.
double conv_l1_slack(std::size_t out_len, const MassStats& a, const MassStats& b) {
  return std::max(direct_l1_slack(a, b), fft_l1_slack(next_pow2(out_len), a, b));
}

}  // namespace

void TruncSeq::validate() const {
  for (const cdouble& c : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("TruncSeq: non-finite coefficient");
  }
  if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound))
    throw std::invalid_argument("TruncSeq: tail_bound must be finite and >= 0");
  if (!(fp_slack >= 0.0) || !std::isfinite(fp_slack))
    throw std::invalid_argument("TruncSeq: fp_slack must be finite and >= 0");
}

double ProbSeq::kept_mass() const { return kahan_sum(coeffs); }

TruncSeq ProbSeq::as_trunc() const {
  TruncSeq t;
  t.coeffs.reserve(coeffs.size());
  for (double x : coeffs) t.coeffs.emplace_back(x, 0.0);
  t.tail_bound = tail_bound;
  t.fp_slack = fp_slack;
  t.meta = meta;
  return t;
}

void ProbSeq::validate() const {
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw std::invalid_argument("ProbSeq: non-finite coefficient");
    if (c < kNegFloor) throw std::invalid_argument("ProbSeq: negative coefficient beyond rounding floor");
  }
  if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound))
    throw std::invalid_argument("ProbSeq: tail_bound must be finite and >= 0");
  if (!(fp_slack >= 0.0) || !std::isfinite(fp_slack))
    throw std::invalid_argument("ProbSeq: fp_slack must be finite and >= 0");
  const double mass = kept_mass();
  if (mass > 1.0 + kProbMassTol) throw std::invalid_argument("ProbSeq: kept mass exceeds 1");
  if (1.0 - mass > tail_bound + kProbMassTol)
    throw std::invalid_argument("ProbSeq: tail_bound does not close the mass gap to 1");
}

NormInterval l1_norm(const TruncSeq& s) {
  const double lower = kahan_abs_sum(s.coeffs);
  return {lower, lower + s.tail_bound};
}

NormInterval l1_norm(const ProbSeq& s) {
  const double lower = kahan_abs_sum(std::span<const double>(s.coeffs));
  return {lower, lower + s.tail_bound};
}

TruncSeq convolve(const TruncSeq& a, const TruncSeq& b, const ConvOptions& opt) {
  a.validate();
  b.validate();
  if (a.coeffs.empty() || b.coeffs.empty()) throw std::invalid_argument("convolve: empty input");
  const MassStats ma = mass_stats(a.coeffs);
  const MassStats mb = mass_stats(b.coeffs);

  std::vector<cdouble> full = opt.method == ConvMethod::direct
                                  ? convolve_direct_raw(a.coeffs, b.coeffs)
                                  : convolve_fft_raw(a.coeffs, b.coeffs);
  double slack = conv_l1_slack(a.coeffs.size() + b.coeffs.size() - 1, ma, mb);

  TruncSeq out;
  const std::size_t keep = std::min(full.size(), opt.cap);
  KahanAcc cut;
  for (std::size_t k = keep; k < full.size(); ++k) cut.add(std::abs(full[k]));
  full.resize(keep);
  // Sub-noise magnitudes are rounding artifacts of either route; zeroing them
  // keeps supports clean. The allowance is a priori, identical for both routes.
  const double clamp_threshold = 1e-15 * ma.l1 * mb.l1;
  for (cdouble& c : full) {
    if (std::abs(c) < clamp_threshold) c = cdouble{0.0, 0.0};
  }
  slack += double(keep) * clamp_threshold;
  out.coeffs = std::move(full);
  out.tail_bound = ma.l1 * b.tail_bound + a.tail_bound * mb.l1 + a.tail_bound * b.tail_bound + cut.value();
  out.fp_slack = a.fp_slack * (mb.l1 + b.tail_bound) + b.fp_slack * (ma.l1 + a.tail_bound) +
                 a.fp_slack * b.fp_slack + slack;
  return out;
}

ProbSeq convolve(const ProbSeq& a, const ProbSeq& b, const ConvOptions& opt) {
  if (a.coeffs.empty() || b.coeffs.empty()) throw std::invalid_argument("convolve: empty input");
  const MassStats ma = mass_stats(std::span<const double>(a.coeffs));
  const MassStats mb = mass_stats(std::span<const double>(b.coeffs));

  std::vector<double> full = opt.method == ConvMethod::direct
                                 ? convolve_direct_real(a.coeffs, b.coeffs)
                                 : convolve_fft_real(a.coeffs, b.coeffs);
  double slack = conv_l1_slack(a.coeffs.size() + b.coeffs.size() - 1, ma, mb);

  ProbSeq out;
  const std::size_t keep = std::min(full.size(), opt.cap);
  full.resize(keep);

  // Negative entries and sub-noise magnitudes are rounding artifacts of either
  // route; zeroing them keeps support-based classifiers clean. The allowance
  // is a priori, identical for both routes.
  const double clamp_threshold = 1e-15 * ma.l1 * mb.l1;
  for (double& c : full) {
    if (c < clamp_threshold) c = 0.0;
  }
  slack += double(keep) * clamp_threshold;

  out.coeffs = std::move(full);
  out.fp_slack = a.fp_slack * std::min(1.0, mb.l1 + b.tail_bound) +
                 b.fp_slack * std::min(1.0, ma.l1 + a.tail_bound) + slack;
  // Kept coefficients of a Z+ convolution depend only on the kept prefixes, so
  // the omitted mass is exactly the deficit to 1; fp_slack covers drift.
  const double mass = kahan_sum(out.coeffs);
  out.tail_bound = std::max(0.0, 1.0 - mass) + out.fp_slack;
  return out;
}

namespace {

template <typename Seq>
Seq conv_power_impl(const Seq& f, std::uint64_t n, const ConvOptions& opt) {
  if (n < 1) throw std::invalid_argument("conv_power: n must be >= 1");
  if (n == 1) return f;
  int msb = 63;
  while (((n >> msb) & 1ull) == 0) --msb;
  Seq r = f;
  for (int bit = msb - 1; bit >= 0; --bit) {
    r = convolve(r, r, opt);
    if ((n >> bit) & 1ull) r = convolve(r, f, opt);
  }
  return r;
}

}  // namespace

TruncSeq conv_power(const TruncSeq& f, std::uint64_t n, const ConvOptions& opt) {
  return conv_power_impl(f, n, opt);
}

ProbSeq conv_power(const ProbSeq& f, std::uint64_t n, const ConvOptions& opt) {
  return conv_power_impl(f, n, opt);
}

ProbSeq conv_exp(const ProbSeq& f, double t, const ConvExpOptions& opt) {
  if (t < 0.0) throw std::invalid_argument("conv_exp: t must be >= 0");
  f.validate();
  const std::size_t M_max = poisson_cutoff(t);
  const std::vector<double> w = poisson_weights(t, M_max);
  // Earliest cutoff already meeting the tail target; the certified index is the cap.
  std::size_t M = M_max;
  {
    KahanAcc prefix;
    for (std::size_t nidx = 0; nidx <= M_max; ++nidx) {
      prefix.add(w[nidx]);
      if (1.0 - prefix.value() <= opt.poisson_eps) {
        M = nidx;
        break;
      }
    }
  }

  ProbSeq acc;
  acc.coeffs = {w[M]};
  acc.tail_bound = 1.0 - w[M];
  for (std::size_t nidx = M; nidx-- > 0;) {
    acc = convolve(acc, f, opt.conv);
    if (acc.coeffs.empty()) acc.coeffs.push_back(0.0);
    acc.coeffs[0] += w[nidx];
    const double mass = acc.kept_mass();
    acc.tail_bound = std::max(0.0, 1.0 - mass) + acc.fp_slack;
  }
  acc.meta = SeqMeta{};
  return acc;
}

DiffStats prob_diff_stats(const ProbSeq& p, const ProbSeq& q) {
  DiffStats st;
  const std::size_t n = std::max(p.coeffs.size(), q.coeffs.size());
  KahanAcc abs_acc, cum_acc, mass_p, mass_q;
  double max_cum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pk = k < p.coeffs.size() ? p.coeffs[k] : 0.0;
    const double qk = k < q.coeffs.size() ? q.coeffs[k] : 0.0;
    const double d = pk - qk;
    abs_acc.add(std::abs(d));
    cum_acc.add(d);
    max_cum = std::max(max_cum, std::abs(cum_acc.value()));
    mass_p.add(pk);
    mass_q.add(qk);
  }
  const double sigma = p.fp_slack + q.fp_slack;
  st.kept_abs_sum = abs_acc.value();
  st.max_cum_gap = max_cum;
  st.deficit_p = std::max(0.0, 1.0 - mass_p.value()) + p.fp_slack;
  st.deficit_q = std::max(0.0, 1.0 - mass_q.value()) + q.fp_slack;
  st.norm.lower = std::max({st.kept_abs_sum - sigma, 2.0 * (st.max_cum_gap - sigma), 0.0});
  st.norm.upper = std::min(st.kept_abs_sum + sigma + st.deficit_p + st.deficit_q, 2.0);
  st.low_precision = st.norm.upper > 0.0 && (st.norm.upper - st.norm.lower) > 0.1 * st.norm.upper;
  return st;
}

DiffStats diff_norm_stats(const ProbSeq& f, std::uint64_t n, const ConvOptions& opt) {
  if (n < 1) throw std::invalid_argument("diff_norm: n must be >= 1");
  const ProbSeq fn = conv_power(f, n, opt);
  const ProbSeq fn1 = convolve(fn, f, opt);
  return prob_diff_stats(fn, fn1);
}

NormInterval diff_norm(const ProbSeq& f, std::uint64_t n, const ConvOptions& opt) {
  return diff_norm_stats(f, n, opt).norm;
}

PowerChain::PowerChain(ProbSeq base, ConvOptions opt) : base_(std::move(base)), opt_(opt) {
  base_.validate();
  cur_ = base_;
}

void PowerChain::advance_to(std::uint64_t n) {
  if (n < n_) throw std::invalid_argument("PowerChain: cannot rewind");
  while (n_ < n) {
    if (n >= 2 * n_) {
      cur_ = convolve(cur_, cur_, opt_);
      n_ *= 2;
    } else if (n == n_ + 1) {
      cur_ = convolve(cur_, base_, opt_);
      ++n_;
    } else {
      const ProbSeq gap = conv_power(base_, n - n_, opt_);
      cur_ = convolve(cur_, gap, opt_);
      n_ = n;
    }
  }
}

ProbSeq PowerChain::times_base() const { return convolve(cur_, base_, opt_); }

FirstMomentResult first_moment(const ProbSeq& f, FitWindow window, double margin) {
  const std::size_t len = f.coeffs.size();
  if (len == 0) throw std::invalid_argument("first_moment: empty sequence");
  std::size_t hi = window.hi == 0 ? len - 1 : std::min(window.hi, len - 1);
  const std::size_t lo = window.lo;
  if (hi < lo || hi - lo + 1 < 8) throw std::invalid_argument("first_moment: fit window shorter than 8 points");

  FirstMomentResult res;
  KahanAcc sum;
  const std::size_t mid = lo + (hi - lo) / 2;
  double sum_at_mid = 0.0;
  for (std::size_t k = 1; k <= hi; ++k) {
    sum.add(double(k) * f.coeffs[k]);
    if (k == mid) sum_at_mid = sum.value();
  }
  res.partial_sum = sum.value();
  const double growth = res.partial_sum - sum_at_mid;
  res.partial_sum_converged = growth <= 0.01 * std::max(res.partial_sum, 1e-300);

  std::vector<double> lx, ly;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (f.coeffs[k] > 0.0) {
      lx.push_back(std::log(double(k)));
      ly.push_back(std::log(f.coeffs[k]));
    }
  }
  if (lx.size() >= 8) {
    res.slope_fit = least_squares_line(lx, ly);
    res.divergent_evidence = res.slope_fit.valid && res.slope_fit.slope >= -2.0 + margin;
  }
  return res;
}

Periodicity classify_periodicity(const ProbSeq& f, double support_eps) {
  std::vector<std::uint64_t> supp;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    if (f.coeffs[k] > support_eps) supp.push_back(std::uint64_t(k));
  }
  if (supp.empty()) throw std::invalid_argument("classify_periodicity: empty support");

  Periodicity p;
  p.inspected_len = f.coeffs.size();
  p.support_eps = support_eps;

  std::uint64_t g = 0;
  for (std::uint64_t k : supp) g = std::gcd(g, k);
  if (g != 1) {
    // Support generates gZ (or {0}); not adapted. g = 0 only for supp = {0}.
    p.kind = Periodicity::Kind::not_adapted;
    p.modulus = g;
    return p;
  }
  if (supp.size() == 1) {
    // supp = {1}: adapted, but |F^| = 1 on the whole circle; no finite period.
    p.kind = Periodicity::Kind::adapted_not_aperiodic;
    p.modulus = 0;
    p.offset = supp[0];
    return p;
  }
  std::uint64_t d = 0;
  for (std::size_t i = 1; i < supp.size(); ++i) d = std::gcd(d, supp[i] - supp[0]);
  if (d == 1) {
    p.kind = Periodicity::Kind::aperiodic;
    p.modulus = 1;
    return p;
  }
  p.kind = Periodicity::Kind::adapted_not_aperiodic;
  p.modulus = d;
  p.offset = supp[0] % d;
  return p;
}

namespace {

// F^(xi) over the kept range; per-block re-anchoring keeps the phase recurrence
// drift at block-length scale.
cdouble fourier_kept(std::span<const double> coeffs, double xi) {
  constexpr std::size_t kBlock = 1024;
  KahanAccC acc;
  for (std::size_t start = 0; start < coeffs.size(); start += kBlock) {
    const std::size_t end = std::min(coeffs.size(), start + kBlock);
    cdouble phase = std::polar(1.0, -xi * double(start));
    const cdouble step = std::polar(1.0, -xi);
    for (std::size_t k = start; k < end; ++k) {
      if (coeffs[k] != 0.0) acc.add(coeffs[k] * phase);
      phase *= step;
    }
  }
  return acc.value();
}

}  // namespace

AperiodicityCheck fourier_aperiodicity_check(const ProbSeq& f, std::span<const double> grid, double tol) {
  AperiodicityCheck res;
  for (double xi : grid) {
    if (xi == 0.0) continue;
    const double m = std::abs(fourier_kept(f.coeffs, xi));
    if (m > res.worst_modulus) {
      res.worst_modulus = m;
      res.worst_xi = xi;
    }
    if (m >= 1.0 - f.tail_bound - tol) {
      res.consistent_aperiodic = false;
      res.violating_xis.push_back(xi);
    }
  }
  return res;
}

std::vector<double> aperiodicity_grid(std::uint64_t m_max, std::size_t uniform_n) {
  std::vector<double> grid;
  constexpr double pi = std::numbers::pi;
  for (std::uint64_t m = 2; m <= m_max; ++m) {
    for (std::uint64_t j = 1; 2 * j <= m; ++j) {
      grid.push_back(2.0 * pi * double(j) / double(m));
    }
  }
  for (std::size_t i = 1; i <= uniform_n; ++i) grid.push_back(pi * double(i) / double(uniform_n));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-15; }),
             grid.end());
  return grid;
}

AdaptedSplit adapted_split(const ProbSeq& f) {
  AdaptedSplit s;
  if (f.coeffs.empty() || f.coeffs[0] <= 0.0) return s;
  s.available = true;
  s.beta = 1.0 - f.coeffs[0] / 2.0;
  s.g.coeffs = f.coeffs;
  s.g.coeffs[0] = f.coeffs[0] / 2.0;
  for (double& c : s.g.coeffs) c /= s.beta;
  s.g.tail_bound = f.tail_bound / s.beta;
  s.g.fp_slack = f.fp_slack / s.beta + 4.0 * kEps;
  return s;
}

ProbSeq rescale_support(const ProbSeq& f, std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("rescale_support: m must be >= 1");
  if (m == 1) return f;
  ProbSeq out;
  out.coeffs.resize((f.coeffs.size() + m - 1) / m, 0.0);
  KahanAcc off_lattice;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    if (k % m == 0) {
      out.coeffs[k / m] = f.coeffs[k];
    } else {
      off_lattice.add(std::abs(f.coeffs[k]));
    }
  }
  out.tail_bound = f.tail_bound + off_lattice.value();
  out.fp_slack = f.fp_slack;
  out.meta = f.meta;
  out.meta.params["rescaled_m"] = double(m);
  return out;
}

}  // namespace rittlab
