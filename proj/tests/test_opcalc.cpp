#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "rittlab/families.hpp"
#include "rittlab/opcalc.hpp"
#include "rittlab/transforms.hpp"

using namespace rittlab;

namespace {

DenseOp diag_op(std::initializer_list<cdouble> entries) {
  DenseOp m = DenseOp::Zero(entries.size(), entries.size());
  Eigen::Index i = 0;
  for (cdouble z : entries) m(i, i) = z, ++i;
  return m;
}

// fixed unitary for conjugation tests
DenseOp fixed_unitary(std::size_t d) {
  DenseOp g(d, d);
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      const double re = double(s >> 40) / double(1ull << 24) - 0.5;
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      const double im = double(s >> 40) / double(1ull << 24) - 0.5;
      g(i, j) = cdouble(re, im);
    }
  Eigen::HouseholderQR<DenseOp> qr(g);
  return qr.householderQ() * DenseOp::Identity(d, d);
}

}  // namespace

TEST_CASE("operator norm oracles") {
  CHECK(operator_norm(DenseOp::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(operator_norm(DenseOp::Zero(3, 3)) == 0.0);
  CHECK(operator_norm(diag_op({cdouble(3.0, 0.0), cdouble(0.0, 0.5), cdouble(0.1, 0.0)})) ==
        doctest::Approx(3.0).epsilon(1e-10));
  DenseOp r1 = DenseOp::Zero(2, 2);
  r1(0, 1) = cdouble(2.0, 0.0);
  CHECK(operator_norm(r1) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(operator_norm(fixed_unitary(6)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("power bound oracles") {
  const PowerBoundResult id = power_bound(DenseOp::Identity(3, 3), 32);
  CHECK(id.bound == doctest::Approx(1.0));
  CHECK(id.certified);
  CHECK_FALSE(id.aborted);

  const PowerBoundResult dg = power_bound(diag_op({cdouble(0.9, 0.0), cdouble(0.0, 0.5)}), 32);
  CHECK(dg.bound == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(dg.certified);

  // nilpotent shift: every power up to d-1 is a partial isometry
  const PowerBoundResult sh = power_bound(shift_op(4), 32);
  CHECK(sh.bound == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sh.certified);

  const PowerBoundResult bad = power_bound(2.0 * DenseOp::Identity(2, 2), 64);
  CHECK(bad.aborted);
  CHECK_FALSE(bad.certified);
}

TEST_CASE("psi_op places coefficients on shift powers") {
  const ProbSeq f = make_alpha_frac(0.5, 16);
  const OpWithError p = psi_op(f, shift_op(20));
  for (Eigen::Index i = 0; i < 20; ++i) {
    const double want = i < 16 ? f.coeffs[std::size_t(i)] : 0.0;
    CHECK(std::abs(p.op(i, 0) - cdouble(want)) < 1e-15);
  }
  CHECK(p.error_certified);

  // delta_2 acts as T^2
  const DenseOp t = make_random_normal_contraction(5, 11);
  const OpWithError sq = psi_op(make_delta(2), t);
  CHECK(operator_norm(sq.op - t * t) < 1e-13);
}

TEST_CASE("psi_op is linear and multiplicative") {
  const DenseOp t = make_random_normal_contraction(6, 3);
  const ProbSeq f = make_alpha_frac(0.5, 1 << 10);
  const ProbSeq g = make_alpha_frac(0.25, 1 << 10);
  const ProbSeq parts[] = {f, g};
  const double w[] = {0.3, 0.7};
  const ProbSeq mix = mixture(w, parts);

  const DenseOp lin = psi_op(mix, t).op - (0.3 * psi_op(f, t).op + 0.7 * psi_op(g, t).op);
  CHECK(operator_norm(lin) < 1e-12);

  ConvOptions opt;
  opt.cap = 1 << 11;
  const ProbSeq fg = convolve(f, g, opt);
  const OpWithError pf = psi_op(f, t);
  const OpWithError pg = psi_op(g, t);
  const OpWithError pfg = psi_op(fg, t);
  const double res = operator_norm(pfg.op - pf.op * pg.op);
  CHECK(res <= pfg.error + pf.error + pg.error + 1e-10);

  // expanding argument: the power-bound estimate cannot certify the budget
  const OpWithError warn = psi_op(f, 1.5 * DenseOp::Identity(2, 2));
  CHECK_FALSE(warn.error_certified);
  CHECK_FALSE(warn.warning.empty());
}

TEST_CASE("subordination identity check") {
  const ProbSeq f = make_bernoulli(0.5);
  DenseOp rot = DenseOp::Zero(2, 2);
  rot(0, 0) = 0.9 * std::polar(1.0, 0.7);
  rot(1, 1) = 0.9 * std::polar(1.0, -0.7);
  const ResidualCheck triv = subordination_identity_check(f, rot, 1);
  CHECK(triv.ok);
  CHECK(triv.residual <= 1e-15);

  const ResidualCheck r8 = subordination_identity_check(f, rot, 8);
  CHECK(r8.ok);
  CHECK(r8.residual <= 1e-10);

  const ResidualCheck deep =
      subordination_identity_check(make_alpha_frac(0.5, 1 << 12), make_random_normal_contraction(5, 21), 4);
  CHECK(deep.ok);
}

TEST_CASE("resolvent scan scalar oracles") {
  // T = 0: ||R(lambda)|| = 1/|lambda|
  const ResolventScan zr = resolvent_scan(DenseOp::Zero(1, 1), ResolventKind::ritt);
  CHECK(zr.constant > 1.9);
  CHECK(zr.constant < 2.01);
  CHECK_FALSE(zr.any_near_singular);
  const ResolventScan zk = resolvent_scan(DenseOp::Zero(1, 1), ResolventKind::kreiss);
  CHECK(zk.constant == doctest::Approx(0.5).epsilon(1e-9));

  // T = I: |lambda-1| ||R|| = 1 identically
  const ResolventScan ir = resolvent_scan(DenseOp::Identity(2, 2), ResolventKind::ritt);
  CHECK(ir.constant == doctest::Approx(1.0).epsilon(1e-9));
  for (const ResolventPoint& p : ir.points) CHECK(p.value == doctest::Approx(1.0).epsilon(1e-9));
  const ResolventScan ik = resolvent_scan(DenseOp::Identity(2, 2), ResolventKind::kreiss);
  CHECK(ik.constant == doctest::Approx(1.0).epsilon(1e-9));

  // contour bookkeeping
  CHECK(zr.radii.front() == doctest::Approx(2.0));
  CHECK(zr.radii.size() == zr.radius_sup.size());
  double mx = 0.0;
  for (double s : zr.radius_sup) mx = std::max(mx, s);
  CHECK(zr.constant == doctest::Approx(mx));
}

TEST_CASE("kreiss values never exceed ritt values on the same contour") {
  const DenseOp t = make_random_normal_contraction(6, 5);
  ContourParams pc;
  pc.j_max = 6;
  pc.angles = 64;
  const ResolventScan rt = resolvent_scan(t, ResolventKind::ritt, pc);
  const ResolventScan kr = resolvent_scan(t, ResolventKind::kreiss, pc);
  REQUIRE(rt.points.size() == kr.points.size());
  for (std::size_t i = 0; i < rt.points.size(); ++i) {
    CHECK(kr.points[i].value <= rt.points[i].value * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("triangular and dense resolvent paths agree") {
  const DenseOp d = diag_op({cdouble(0.9, 0.0), cdouble(0.0, 0.8), cdouble(-0.5, 0.3), cdouble(0.2, -0.6)});
  const DenseOp q = fixed_unitary(4);
  const DenseOp dense = q * d * q.adjoint();  // same resolvent norms, dense path
  ContourParams pc;
  pc.j_max = 6;
  pc.angles = 48;
  const ResolventScan a = resolvent_scan(d, ResolventKind::ritt, pc);
  const ResolventScan b = resolvent_scan(dense, ResolventKind::ritt, pc);
  CHECK(a.constant == doctest::Approx(b.constant).epsilon(1e-8));
}

TEST_CASE("volterra and shift constructions") {
  // d = 2: I + V = [[1.25, 0], [0.5, 1.25]], T = [[0.8, 0], [-0.32, 0.8]]
  const DenseOp t2 = volterra_op(2);
  CHECK(std::abs(t2(0, 0) - cdouble(0.8)) < 1e-14);
  CHECK(std::abs(t2(1, 1) - cdouble(0.8)) < 1e-14);
  CHECK(std::abs(t2(1, 0) - cdouble(-0.32)) < 1e-14);
  CHECK(std::abs(t2(0, 1)) == 0.0);

  const DenseOp t = volterra_op(64);
  CHECK(operator_norm(t) <= 1.05);
  const double want_diag = 1.0 / (1.0 + 0.5 / 64.0);
  for (Eigen::Index i = 0; i < t.rows(); ++i) CHECK(std::abs(t(i, i) - cdouble(want_diag)) < 1e-13);

  const DenseOp s = shift_op(3);
  CHECK(operator_norm(s) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(operator_norm(s * s * s) == 0.0);
}

TEST_CASE("fractional powers on diagonal oracles") {
  // (I - 0)^alpha = I
  for (FracMethod m : {FracMethod::series, FracMethod::eigen, FracMethod::automatic}) {
    const FracPowerResult r = frac_power(DenseOp::Zero(3, 3), 0.5, m);
    CHECK(operator_norm(r.op - DenseOp::Identity(3, 3)) <= r.budget + 1e-12);
  }

  const DenseOp t = diag_op({cdouble(0.5, 0.0), cdouble(-0.3, 0.0), cdouble(0.0, 0.4)});
  DenseOp want = DenseOp::Zero(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i) want(i, i) = std::pow(cdouble(1.0) - t(i, i), 0.25);
  for (FracMethod m : {FracMethod::series, FracMethod::eigen, FracMethod::automatic}) {
    const FracPowerResult r = frac_power(t, 0.25, m);
    CHECK(operator_norm(r.op - want) <= r.budget + 1e-12);
  }
}

TEST_CASE("fractional power laws on a normal contraction") {
  const DenseOp t = make_random_normal_contraction(5, 17);
  const DenseOp w = DenseOp::Identity(5, 5) - t;

  const FracPowerResult half = frac_power(t, 0.5);
  CHECK(operator_norm(half.op * half.op - w) <= 1e-8);

  const FracPowerResult quarter = frac_power(t, 0.25);
  CHECK(operator_norm(quarter.op * quarter.op - half.op) <= 1e-8);

  const FracPowerResult a = frac_power(t, 0.3);
  const FracPowerResult b = frac_power(t, 0.2);
  CHECK(operator_norm(a.op * b.op - half.op) <= a.budget + b.budget + half.budget + 1e-9);
}

TEST_CASE("triangular, kato, and eigen square roots of the volterra law") {
  const DenseOp t = volterra_op(4);
  const DenseOp w = DenseOp::Identity(4, 4) - t;
  const FracPowerResult tri = frac_power(t, 0.5);  // automatic: triangular recurrence
  CHECK(operator_norm(tri.op * tri.op - w) <= tri.budget + 1e-10);

  const FracPowerResult kato = frac_power(t, 0.5, FracMethod::kato);
  CHECK(operator_norm(kato.op - tri.op) <= kato.budget + tri.budget + 1e-8);

  CHECK_THROWS(frac_power(volterra_op(8), 0.5, FracMethod::kato));  // reconstruction capped at d = 4
}

TEST_CASE("kato resolvent check on a normal contraction") {
  const DenseOp t = make_random_normal_contraction(6, 9, 0.9);
  const double grid[] = {0.1, 1.0};
  const KatoResolventCheck k = kato_resolvent_check(t, 0.5, grid);
  CHECK(k.ok);
  CHECK(k.max_residual <= k.budget);
}

TEST_CASE("ritt constant from a kreiss operator") {
  const RittFromKreissReport rep = ritt_from_kreiss_check(volterra_op(16), 0.5);
  CHECK(rep.kreiss_of_t.constant > 0.0);
  CHECK_FALSE(rep.kreiss_of_t.any_near_singular);
  CHECK(rep.ritt_of_s.constant > 0.0);
  CHECK_FALSE(rep.ritt_of_s.any_near_singular);
  CHECK(rep.s.rows() == 16);
  CHECK(rep.frac_budget >= 0.0);
}

TEST_CASE("gamma sweep keeps finite ritt constants") {
  const double gammas[] = {1.05, 1.1, 1.25};
  const KrittSuiteReport scalar = kritt_equivalence_suite(diag_op({cdouble(0.5, 0.0)}), gammas, 1e6);
  REQUIRE(scalar.rows.size() == 3);
  for (const GammaRittRow& r : scalar.rows) CHECK(r.pass);
  CHECK(scalar.largest_pass == doctest::Approx(1.25));

  const KrittSuiteReport nrm = kritt_equivalence_suite(make_random_normal_contraction(4, 13), gammas, 1e6);
  for (const GammaRittRow& r : nrm.rows) CHECK(r.pass);
}

TEST_CASE("spectral mapping") {
  const DenseOp t = make_random_normal_contraction(6, 29);

  // affine law: spectrum maps exactly through (1 + lambda)/2
  const SpectralMapCheck aff = spectral_map_check(make_bernoulli(0.5), t);
  CHECK(aff.ok);
  CHECK(aff.distance <= 1e-10);

  const SpectralMapCheck frac = spectral_map_check(make_alpha_frac(0.5, 1 << 12), t);
  CHECK(frac.ok);
  CHECK(frac.distance <= frac.budget);

  // diagonal law: compare against the closed form directly
  const DenseOp d = diag_op({cdouble(0.6, 0.2), cdouble(-0.4, 0.0), cdouble(0.0, 0.0)});
  const ProbSeq f = make_alpha_frac(0.5, 1 << 12);
  const OpWithError p = psi_op(f, d);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const cdouble want = cdouble(1.0) - one_minus_gf_alpha(0.5, d(i, i));
    CHECK(std::abs(p.op(i, i) - want) <= p.error + 1e-12);
  }
}

TEST_CASE("random normal contractions") {
  const DenseOp a = make_random_normal_contraction(8, 7);
  const DenseOp b = make_random_normal_contraction(8, 7);
  const DenseOp c = make_random_normal_contraction(8, 8);
  CHECK(operator_norm(a - b) == 0.0);  // deterministic in the seed
  CHECK(operator_norm(a - c) > 1e-3);
  CHECK(operator_norm(a.adjoint() * a - a * a.adjoint()) < 1e-12);
  CHECK(operator_norm(a) <= 0.98 + 1e-9);
}
