#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rittlab/families.hpp"
#include "rittlab/ritt_diag.hpp"

using namespace rittlab;

namespace {

DiagTable synthetic(DiagKind kind, std::vector<double> lowers, double raw_slope, bool fit_valid = true) {
  DiagTable t;
  t.kind = kind;
  double idx = 2.0;
  for (double lo : lowers) {
    DiagRow r;
    r.index = idx;
    r.lower = lo;
    r.upper = lo + 0.01;
    t.rows.push_back(r);
    idx *= 2.0;
  }
  t.slope_fit.slope = raw_slope;
  t.slope_fit.points = lowers.size();
  t.slope_fit.valid = fit_valid;
  return t;
}

}  // namespace

TEST_CASE("dyadic grid") {
  const auto g = dyadic_grid(2, 2048);
  REQUIRE(g.size() == 11);
  CHECK(g.front() == 2.0);
  CHECK(g.back() == 2048.0);
  const auto h = dyadic_grid(3, 25);
  REQUIRE(h.size() == 4);  // 3, 6, 12, 24
  CHECK(h.back() == 24.0);
  CHECK(dyadic_grid(1, 1) == std::vector<double>{1.0});
  CHECK_THROWS(dyadic_grid(0, 8));
  CHECK_THROWS(dyadic_grid(16, 8));
}

TEST_CASE("shared-chain tables match the standalone ones") {
  const ProbSeq f = make_alpha_frac(0.5, 1 << 13);
  const auto grid = dyadic_grid(2, 128);
  ConvOptions opt;
  opt.cap = 1 << 14;
  const DiffTables both = diff_tables(f, grid, opt);
  const DiagTable r = ritt_table(f, grid, opt);
  const DiagTable h = half_table(f, grid, opt);
  REQUIRE(both.ritt.rows.size() == r.rows.size());
  REQUIRE(both.half.rows.size() == h.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(both.ritt.rows[i].lower == r.rows[i].lower);
    CHECK(both.ritt.rows[i].upper == r.rows[i].upper);
    CHECK(both.half.rows[i].lower == h.rows[i].lower);
    CHECK(both.half.rows[i].upper == h.rows[i].upper);
  }
  CHECK(both.ritt.kind == DiagKind::ritt_n);
  CHECK(both.half.kind == DiagKind::half_n);
}

TEST_CASE("coin flip law: exact first row and opposite verdicts") {
  // F = (delta_0 + delta_1)/2. F^3 - F^2 has l1 norm 1/2, so the n-scaled
  // row at n = 2 is exactly 1 and the sqrt(n)-scaled one is sqrt(2)/2.
  const ProbSeq f = make_bernoulli(0.5);
  const auto grid = dyadic_grid(2, 1024);
  const DiffTables t = diff_tables(f, grid);

  CHECK(t.ritt.rows[0].index == 2.0);
  CHECK(t.ritt.rows[0].lower == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t.ritt.rows[0].upper == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t.half.rows[0].lower == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));

  // finite first moment: the difference norm decays like n^{-1/2}
  const TableScreen rs = table_screen(t.ritt);
  CHECK(rs.verdict == ScreenVerdict::growing);
  const TableScreen hs = table_screen(t.half);
  CHECK(hs.verdict == ScreenVerdict::bounded);
  CHECK(hs.flat);
  CHECK(t.ritt.slope_fit.slope == doctest::Approx(-0.5).epsilon(0.15));
}

TEST_CASE("point mass table is degenerate") {
  const DiagTable t = ritt_table(make_delta(0), dyadic_grid(2, 64));
  for (const DiagRow& r : t.rows) {
    CHECK(r.lower == 0.0);
    CHECK(r.upper >= r.lower);
  }
  const TableScreen s = table_screen(t);
  CHECK(s.degenerate);
  CHECK(s.verdict == ScreenVerdict::bounded);
}

TEST_CASE("table screen on synthetic tables") {
  CHECK(table_screen(synthetic(DiagKind::ritt_n, {1.0, 1.0}, -1.0)).verdict == ScreenVerdict::inconclusive);

  const TableScreen degen = table_screen(synthetic(DiagKind::ritt_n, {1e-9, 5e-7, 2e-8}, -3.0));
  CHECK(degen.degenerate);
  CHECK(degen.verdict == ScreenVerdict::bounded);

  const TableScreen ok = table_screen(synthetic(DiagKind::ritt_n, {1.0, 1.05, 0.97}, -1.0));
  CHECK(ok.verdict == ScreenVerdict::bounded);
  CHECK(ok.flat);
  CHECK(ok.flatness == doctest::Approx((1.05 - 0.97) / 1.05));

  // raw decay much slower than critical: the scaled statistic is growing
  CHECK(table_screen(synthetic(DiagKind::ritt_n, {0.5, 0.6, 0.55}, -0.5)).verdict == ScreenVerdict::growing);

  // in-band slope but wildly non-flat rows: no classification
  CHECK(table_screen(synthetic(DiagKind::ritt_n, {1.0, 0.3, 2.0}, -1.0)).verdict == ScreenVerdict::inconclusive);

  // half table has its own critical band around -1/2
  CHECK(table_screen(synthetic(DiagKind::half_n, {0.7, 0.71, 0.7}, -0.5)).verdict == ScreenVerdict::bounded);
  CHECK(table_screen(synthetic(DiagKind::half_n, {0.7, 0.71, 0.7}, -0.15)).verdict == ScreenVerdict::growing);

  // invalid fit never classifies beyond degeneracy
  CHECK(table_screen(synthetic(DiagKind::ritt_n, {1.0, 1.0, 1.0}, 0.0, false)).verdict ==
        ScreenVerdict::inconclusive);
}

TEST_CASE("sector screen flags") {
  const SectorReport good = sector_report(make_alpha_frac(0.5, 1 << 15), geometric_xi_grid(20));
  const SectorScreen gs = sector_screen(good);
  CHECK(gs.affirmative);
  CHECK_FALSE(gs.violation);

  // unit-mean zeta law: the boundary argument climbs to pi/2 as xi -> 0, so
  // the smallest certified frequencies sit outside the sector even though
  // large-xi points remain inside (violation dominates in the classifier)
  const SectorReport bad = sector_report(make_zeta(1.0, 1 << 21), geometric_xi_grid(40));
  const SectorScreen bs = sector_screen(bad);
  CHECK(bs.violation);
}

TEST_CASE("semigroup table stays flat for the square-root law") {
  ConvExpOptions eo;
  eo.conv.cap = 1 << 18;
  const DiagTable t = semigroup_table(make_alpha_frac(0.5, 1 << 18), dyadic_grid(1, 64), eo);
  REQUIRE(t.rows.size() == 7);
  CHECK(t.kind == DiagKind::semigroup_t);
  for (const DiagRow& r : t.rows) {
    CHECK(r.lower > 0.0);
    CHECK(r.upper >= r.lower);
  }
  const TableScreen s = table_screen(t);
  CHECK(s.verdict == ScreenVerdict::bounded);
}

TEST_CASE("classifier: point mass at the origin") {
  const ClassAReport rep = class_a_report(make_delta(0));
  CHECK(rep.verdict == ClassAVerdict::consistent_with_A);
  CHECK_FALSE(rep.tables_computed);
  CHECK_FALSE(rep.evidence.empty());
}

TEST_CASE("classifier: rescaling a law supported on 2Z") {
  const ClassAReport rep = class_a_report(make_delta(2));
  CHECK(rep.verdict == ClassAVerdict::inconsistent_with_A);
  CHECK(rep.rescaled_by == 2);
  CHECK(rep.periodicity.kind == Periodicity::Kind::not_adapted);
  CHECK(rep.periodicity.modulus == 2);
}

TEST_CASE("classifier: periodic support is rejected without tables") {
  const ProbSeq parts[] = {make_delta(1), make_delta(3)};
  const double w[] = {0.5, 0.5};
  const ClassAReport rep = class_a_report(mixture(w, parts));
  CHECK(rep.verdict == ClassAVerdict::inconsistent_with_A);
  CHECK(rep.periodicity.kind == Periodicity::Kind::adapted_not_aperiodic);
  CHECK(rep.periodicity.modulus == 2);
  CHECK(rep.periodicity.offset == 1);
  CHECK_FALSE(rep.tables_computed);
}

TEST_CASE("classifier: light-tailed mixture fails the moment screen") {
  const ProbSeq parts[] = {make_bernoulli(0.5), make_poisson(1.0, 64)};
  const double w[] = {0.5, 0.5};
  ClassAConfig cfg;
  cfg.n_grid = dyadic_grid(2, 256);
  cfg.xi_grid = geometric_xi_grid(20);
  cfg.conv.cap = 1 << 12;
  const ClassAReport rep = class_a_report(mixture(w, parts), cfg);
  CHECK(rep.verdict == ClassAVerdict::inconsistent_with_A);
  CHECK(rep.moment_violation);
  CHECK(rep.moment.partial_sum_converged);
  CHECK_FALSE(rep.moment.divergent_evidence);
  CHECK(rep.ritt_screen.verdict == ScreenVerdict::growing);
  CHECK(rep.ritt.slope_fit.slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("classifier: square-root law is consistent at a small window") {
  ClassAConfig cfg;
  cfg.n_grid = dyadic_grid(2, 128);
  cfg.xi_grid = geometric_xi_grid(20);
  cfg.conv.cap = 1 << 17;
  const ClassAReport rep = class_a_report(make_alpha_frac(0.5, 1 << 17), cfg);
  CHECK(rep.verdict == ClassAVerdict::consistent_with_A);
  CHECK(rep.moment.divergent_evidence);
  CHECK(rep.sector_flags.affirmative);
  CHECK(rep.ritt_screen.verdict == ScreenVerdict::bounded);
  CHECK(rep.half_screen.verdict != ScreenVerdict::growing);
  CHECK_FALSE(rep.evidence.empty());
}

TEST_CASE("periodicity classifier agrees with its Fourier oracle") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> natoms(1, 6);
  std::uniform_int_distribution<std::uint64_t> site(0, 12);
  std::uniform_int_distribution<std::uint64_t> stretch(1, 3);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  const auto grid = aperiodicity_grid();
  for (int trial = 0; trial < 20; ++trial) {
    const int m = natoms(rng);
    const std::uint64_t s = stretch(rng);
    std::vector<ProbSeq> parts;
    std::vector<double> w;
    double tot = 0.0;
    for (int i = 0; i < m; ++i) {
      parts.push_back(make_delta(site(rng) * s));
      w.push_back(mass(rng));
      tot += w.back();
    }
    for (double& x : w) x /= tot;
    const ProbSeq f = mixture(w, parts);
    const Periodicity p = classify_periodicity(f);
    const AperiodicityCheck a = fourier_aperiodicity_check(f, grid);
    CHECK((p.kind == Periodicity::Kind::aperiodic) == a.consistent_aperiodic);
  }

  // support in 2Z + 1: F^(pi) = e^{-i pi} exactly
  const ProbSeq parts[] = {make_delta(1), make_delta(3)};
  const double w[] = {0.5, 0.5};
  const EvalWithError v = fourier(mixture(w, parts), std::numbers::pi);
  CHECK(std::abs(v.value - std::polar(1.0, -std::numbers::pi)) < 1e-12);
}
