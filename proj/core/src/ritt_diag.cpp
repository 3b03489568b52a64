#include "rittlab/ritt_diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rittlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Scaled rows at or below this are treated as numerically degenerate.
constexpr double kScaledFloor = 1e-6;
// Raw statistic rows at or below this are excluded from slope fits.
constexpr double kRawFloor = 1e-12;
constexpr double kFlatTol = 0.25;
constexpr double kGrowMargin = 0.15;
// Sector screen: certification levels (radians of angular uncertainty) and
// the sector margin below pi/2.
constexpr double kTightArg = 0.03;
constexpr double kModerateArg = 0.35;
constexpr double kSectorMargin = 0.15;

struct SlopeBand {
  double lo;
  double hi;
};

SlopeBand band_for(DiagKind kind) {
  switch (kind) {
    case DiagKind::half_n:
      return {-0.65, -0.35};
    case DiagKind::ritt_n:
    case DiagKind::semigroup_t:
    default:
      return {-1.15, -0.85};
  }
}

void require_index_grid(std::span<const double> grid, bool integral, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  double prev = 0.0;
  for (double v : grid) {
    if (!(v >= 1.0)) throw std::invalid_argument(std::string(what) + ": indices must be >= 1");
    if (integral && v != std::floor(v))
      throw std::invalid_argument(std::string(what) + ": indices must be integers");
    if (!(v > prev)) throw std::invalid_argument(std::string(what) + ": grid must be ascending");
    prev = v;
  }
}

// log-log fit of the raw statistic lowers over the top half of the grid.
LineFit raw_slope_fit(std::span<const double> idx, std::span<const double> raw_lower) {
  std::vector<double> xs, ys;
  for (std::size_t i = idx.size() / 2; i < idx.size(); ++i) {
    if (raw_lower[i] > kRawFloor) {
      xs.push_back(std::log(idx[i]));
      ys.push_back(std::log(raw_lower[i]));
    }
  }
  if (xs.size() < 3) return {};
  return least_squares_line(xs, ys);
}

ConvOptions window_cap(const ConvOptions& opt, const ProbSeq& f) {
  ConvOptions o = opt;
  o.cap = std::max(o.cap, f.coeffs.size());
  return o;
}

}  // namespace

std::vector<double> dyadic_grid(double first, double last) {
  if (!(first >= 1.0) || !(last >= first)) throw std::invalid_argument("dyadic_grid: need 1 <= first <= last");
  std::vector<double> grid;
  for (double v = first; v <= last; v *= 2.0) grid.push_back(v);
  return grid;
}

DiffTables diff_tables(const ProbSeq& f, std::span<const double> n_grid, const ConvOptions& opt) {
  require_index_grid(n_grid, true, "diff_tables");
  f.validate();
  PowerChain chain(f, window_cap(opt, f));

  DiffTables out;
  out.ritt.kind = DiagKind::ritt_n;
  out.half.kind = DiagKind::half_n;
  std::vector<double> idx, raw_lower;
  for (double nd : n_grid) {
    const auto n = static_cast<std::uint64_t>(nd);
    chain.advance_to(n);
    const ProbSeq next = chain.times_base();
    const DiffStats st = prob_diff_stats(chain.current(), next);
    idx.push_back(nd);
    raw_lower.push_back(st.norm.lower);
    out.ritt.rows.push_back({nd, nd * st.norm.lower, nd * st.norm.upper, st.low_precision});
    const double rt = std::sqrt(nd);
    out.half.rows.push_back({nd, rt * st.norm.lower, rt * st.norm.upper, st.low_precision});
  }
  out.ritt.slope_fit = raw_slope_fit(idx, raw_lower);
  out.half.slope_fit = out.ritt.slope_fit;  // same underlying statistic
  return out;
}

DiagTable ritt_table(const ProbSeq& f, std::span<const double> n_grid, const ConvOptions& opt) {
  return diff_tables(f, n_grid, opt).ritt;
}

DiagTable half_table(const ProbSeq& f, std::span<const double> n_grid, const ConvOptions& opt) {
  return diff_tables(f, n_grid, opt).half;
}

DiagTable semigroup_table(const ProbSeq& f, std::span<const double> t_grid, const ConvExpOptions& opt) {
  require_index_grid(t_grid, false, "semigroup_table");
  f.validate();
  ConvExpOptions eo = opt;
  eo.conv = window_cap(opt.conv, f);

  DiagTable out;
  out.kind = DiagKind::semigroup_t;
  std::vector<double> idx, raw_lower;

  ProbSeq expf = conv_exp(f, t_grid.front(), eo);
  double cur_t = t_grid.front();
  for (double t : t_grid) {
    while (2.0 * cur_t <= t) {
      expf = convolve(expf, expf, eo.conv);
      cur_t *= 2.0;
    }
    if (t > cur_t) {
      expf = convolve(expf, conv_exp(f, t - cur_t, eo), eo.conv);
      cur_t = t;
    }
    const ProbSeq fexp = convolve(f, expf, eo.conv);
    DiffStats st = prob_diff_stats(expf, fexp);
    // The uniformization cutoff shifts kept coefficients by up to poisson_eps
    // in l1 (per factor), on top of the window accounting inside the stats.
    const double uni = 2.0 * eo.poisson_eps;
    const double lo = std::max(0.0, st.norm.lower - uni);
    const double hi = std::min(st.norm.upper + uni, 2.0);
    idx.push_back(t);
    raw_lower.push_back(lo);
    out.rows.push_back({t, t * lo, t * hi, st.low_precision});
  }
  out.slope_fit = raw_slope_fit(idx, raw_lower);
  return out;
}

TableScreen table_screen(const DiagTable& table) {
  TableScreen s;
  s.slope = table.slope_fit;
  if (table.rows.size() < 3) {
    s.note = "fewer than three rows: no trend classification";
    return s;
  }
  const std::size_t k = table.rows.size();
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = k - 3; i < k; ++i) {
    mx = std::max(mx, table.rows[i].lower);
    mn = std::min(mn, table.rows[i].lower);
  }
  if (mx <= kScaledFloor) {
    s.degenerate = true;
    s.flat = true;
    s.flatness = 0.0;
    s.verdict = ScreenVerdict::bounded;
    s.note = "scaled statistic at the numerical floor over the last rows: either exact degeneracy or the walk left the window";
    return s;
  }
  s.flatness = (mx - mn) / mx;
  s.flat = s.flatness <= kFlatTol;
  const SlopeBand band = band_for(table.kind);
  const bool slope_ok = s.slope.valid && s.slope.slope >= band.lo && s.slope.slope <= band.hi;
  if (s.flat && slope_ok) {
    s.verdict = ScreenVerdict::bounded;
    s.note = "last rows flat and the raw statistic decays at the critical rate";
  } else if (s.slope.valid && s.slope.slope >= band.hi + kGrowMargin) {
    s.verdict = ScreenVerdict::growing;
    s.note = "raw statistic decays strictly slower than the critical rate";
  } else {
    s.note = "trend not classifiable at this window and grid";
  }
  return s;
}

SectorScreen sector_screen(const SectorReport& rep) {
  SectorScreen s;
  s.sup_angle = rep.sup_angle;
  s.limit_estimate = rep.limit_estimate;
  s.limit_valid = rep.limit_valid;
  const double bound = kPi / 2.0 - kSectorMargin;

  int tight_seen = 0;
  bool all_outside = true;
  for (const SectorPoint& p : rep.points) {  // ascending xi
    if (p.indeterminate || p.arg_error > kTightArg) continue;
    if (tight_seen < 3) {
      all_outside = all_outside && (p.arg - p.arg_error >= bound);
      ++tight_seen;
    }
  }
  s.violation = tight_seen == 3 && all_outside;

  int inside = 0;
  for (const SectorPoint& p : rep.points) {
    if (!p.indeterminate && p.arg_error <= kModerateArg && p.arg + p.arg_error < bound) ++inside;
  }
  s.affirmative = inside >= 3;
  return s;
}

ClassAReport class_a_report(const ProbSeq& f, const ClassAConfig& config) {
  ClassAReport rep;
  rep.periodicity = classify_periodicity(f, config.support_eps);

  using Kind = Periodicity::Kind;
  if (rep.periodicity.kind == Kind::not_adapted) {
    if (rep.periodicity.modulus == 0) {
      // Point mass at 0: every power equals the law itself, differences vanish.
      rep.verdict = ClassAVerdict::consistent_with_A;
      rep.evidence.push_back(
          "support is {0}: all convolution powers coincide and the scaled difference statistic is identically zero");
      return rep;
    }
    ProbSeq rescaled = rescale_support(f, rep.periodicity.modulus);
    ClassAReport inner = class_a_report(rescaled, config);
    inner.rescaled_by = rep.periodicity.modulus;
    inner.periodicity = rep.periodicity;
    inner.evidence.insert(inner.evidence.begin(),
                          "support generates a proper subgroup mZ: diagnostics ran on the rescaled law F~(k) = F(km), "
                          "whose membership is equivalent");
    return inner;
  }
  // first_moment needs a usable fit window; laws shorter than that keep the
  // default (indeterminate) moment screen instead of aborting the report.
  const auto moment_or_default = [](const ProbSeq& g) {
    return g.coeffs.size() >= 16 ? first_moment(g) : FirstMomentResult{};
  };

  if (rep.periodicity.kind == Kind::adapted_not_aperiodic) {
    rep.verdict = ClassAVerdict::inconsistent_with_A;
    rep.moment = moment_or_default(f);
    rep.evidence.push_back(
        "support lies in a strict residue class of a subgroup: the walk is periodic, so successive convolution powers "
        "cannot merge and the scaled difference statistic is unbounded");
    return rep;
  }

  // Aperiodic: run the full screen set.
  const std::vector<double> n_grid = config.n_grid.empty() ? dyadic_grid(2, 2048) : config.n_grid;
  const std::vector<double> xi_grid = config.xi_grid.empty() ? geometric_xi_grid(40) : config.xi_grid;
  rep.evidence.push_back("support is adapted and aperiodic");

  rep.moment = moment_or_default(f);
  rep.sector = sector_report(f, xi_grid);
  rep.sector_flags = sector_screen(rep.sector);

  const DiffTables tables = diff_tables(f, n_grid, config.conv);
  rep.ritt = tables.ritt;
  rep.ritt_screen = table_screen(rep.ritt);
  if (config.include_half) {
    rep.half = tables.half;
    rep.half_screen = table_screen(rep.half);
  }
  if (config.include_semigroup) {
    const std::vector<double> t_grid = config.t_grid.empty() ? dyadic_grid(1, 1024) : config.t_grid;
    ConvExpOptions eo;
    eo.conv = config.conv;
    rep.semigroup = semigroup_table(f, t_grid, eo);
    rep.semigroup_screen = table_screen(*rep.semigroup);
  }
  rep.tables_computed = true;

  rep.moment_violation = rep.moment.partial_sum_converged && !rep.moment.divergent_evidence;
  rep.sector_violation = rep.sector_flags.violation;
  rep.ritt_violation = rep.ritt_screen.verdict == ScreenVerdict::growing;

  if (rep.moment_violation)
    rep.evidence.push_back(
        "first-moment screen: partial sums of k F(k) converged and the kept tail decays too fast for an infinite "
        "mean; the infinite-mean necessary condition fails");
  else if (rep.moment.divergent_evidence)
    rep.evidence.push_back(
        "first-moment screen: partial sums of k F(k) keep growing and the tail decay is consistent with an infinite mean");
  else
    rep.evidence.push_back("first-moment screen: indeterminate");

  if (rep.sector_violation)
    rep.evidence.push_back(
        "sector screen: the smallest tightly certified frequencies lie outside the admissible sector; the boundary "
        "argument approaches the right angle");
  else if (rep.sector_flags.affirmative)
    rep.evidence.push_back("sector screen: certified points lie strictly inside the sector");
  else
    rep.evidence.push_back("sector screen: indeterminate at the achievable certification");

  switch (rep.ritt_screen.verdict) {
    case ScreenVerdict::bounded:
      rep.evidence.push_back(rep.ritt_screen.degenerate
                                 ? "scaled difference statistic: bounded on the inspected range (degenerate rows)"
                                 : "scaled difference statistic: flat with the critical decay rate");
      break;
    case ScreenVerdict::growing:
      rep.evidence.push_back("scaled difference statistic: growing; the critical decay rate is violated");
      break;
    case ScreenVerdict::inconclusive:
      rep.evidence.push_back("scaled difference statistic: trend inconclusive");
      break;
  }

  if (rep.moment_violation || rep.sector_violation || rep.ritt_violation) {
    rep.verdict = ClassAVerdict::inconsistent_with_A;
  } else if (rep.moment.divergent_evidence && rep.sector_flags.affirmative &&
             rep.ritt_screen.verdict != ScreenVerdict::growing) {
    rep.verdict = ClassAVerdict::consistent_with_A;
  } else {
    rep.verdict = ClassAVerdict::inconclusive;
  }
  return rep;
}

}  // namespace rittlab
