#include "rittlab/opcalc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rittlab/families.hpp"
#include "rittlab/transforms.hpp"

namespace rittlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNearSingular = 1e14;
constexpr double kEigenCondCap = 1e8;

void require_square(const DenseOp& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument(std::string(what) + ": square matrix required");
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

Eigen::VectorXcd seeded_unit(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cdouble(nd(rng), nd(rng));
  const double nrm = v.norm();
  return nrm > 0.0 ? Eigen::VectorXcd(v / nrm) : Eigen::VectorXcd::Unit(n, 0);
}

// Power iteration on Apply^H Apply; returns the largest singular value of Apply.
template <typename Fwd, typename Adj>
double largest_singular(Eigen::Index n, Fwd&& fwd, Adj&& adj, bool& finite_ok) {
  Eigen::VectorXcd v = seeded_unit(n, 0x72697474u);
  double prev = 0.0;
  finite_ok = true;
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::VectorXcd w = fwd(v);
    Eigen::VectorXcd u = adj(w);
    if (!u.allFinite()) {
      finite_ok = false;
      return std::numeric_limits<double>::infinity();
    }
    const double nu = u.norm();
    if (nu == 0.0) return 0.0;
    if (iter > 2 && std::abs(nu - prev) <= 1e-10 * nu) {
      prev = nu;
      break;
    }
    prev = nu;
    v = u / nu;
  }
  return std::sqrt(prev);
}

enum class TriShape { none, lower, upper };

TriShape tri_shape(const DenseOp& t) {
  const Eigen::Index d = t.rows();
  bool lower = true, upper = true;
  for (Eigen::Index i = 0; i < d && (lower || upper); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j > i && t(i, j) != cdouble(0.0)) lower = false;
      if (j < i && t(i, j) != cdouble(0.0)) upper = false;
    }
  }
  if (lower) return TriShape::lower;
  if (upper) return TriShape::upper;
  return TriShape::none;
}

// ||A^{-1}|| for A = lambda I - T, with the shape-appropriate solver.
double resolvent_norm(const DenseOp& a, TriShape shape, bool& singular) {
  singular = false;
  bool finite_ok = true;
  double nrm = 0.0;
  if (shape != TriShape::none) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (std::abs(a(i, i)) < 1e-300) {
        singular = true;
        return std::numeric_limits<double>::infinity();
      }
    }
    // explicit vector returns: Eigen's Solve expressions must not outlive the
    // view/adjoint temporaries they reference
    const DenseOp ah = a.adjoint();
    if (shape == TriShape::lower) {
      nrm = largest_singular(
          a.rows(),
          [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return a.triangularView<Eigen::Lower>().solve(x); },
          [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return ah.triangularView<Eigen::Upper>().solve(x); },
          finite_ok);
    } else {
      nrm = largest_singular(
          a.rows(),
          [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return a.triangularView<Eigen::Upper>().solve(x); },
          [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return ah.triangularView<Eigen::Lower>().solve(x); },
          finite_ok);
    }
  } else {
    Eigen::PartialPivLU<DenseOp> lu(a);
    nrm = largest_singular(
        a.rows(), [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return lu.solve(x); },
        [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return lu.adjoint().solve(x); }, finite_ok);
  }
  if (!finite_ok || nrm >= kNearSingular) singular = true;
  return nrm;
}

// Square root of an upper-triangular matrix by the standard recurrence; the
// principal branch exists when no diagonal pair sums to zero.
DenseOp sqrtm_upper(const DenseOp& u) {
  const Eigen::Index d = u.rows();
  DenseOp s = DenseOp::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) s(i, i) = std::sqrt(u(i, i));
  for (Eigen::Index len = 1; len < d; ++len) {
    for (Eigen::Index i = 0; i + len < d; ++i) {
      const Eigen::Index j = i + len;
      cdouble acc = u(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) acc -= s(i, k) * s(k, j);
      const cdouble den = s(i, i) + s(j, j);
      if (std::abs(den) < 1e-300)
        throw std::runtime_error("matrix square root: zero diagonal pair in the triangular recurrence");
      s(i, j) = acc / den;
    }
  }
  return s;
}

DenseOp identity_like(const DenseOp& t) { return DenseOp::Identity(t.rows(), t.cols()); }

FracPowerResult series_route(const DenseOp& t, double alpha, std::size_t terms) {
  const ProbSeq a = make_alpha_frac(alpha, terms);
  OpWithError psi = psi_op(a, t);
  FracPowerResult r;
  r.op = -psi.op;
  r.op.diagonal().array() += 1.0;
  r.budget = psi.error;
  r.used = FracMethod::series;
  r.note = psi.error_certified ? "binomial series over the kept coefficients"
                               : "binomial series; power-bound estimate not certified";
  return r;
}

FracPowerResult eigen_route(const DenseOp& t, double alpha) {
  Eigen::ComplexEigenSolver<DenseOp> es(t);
  if (es.info() != Eigen::Success) throw std::runtime_error("frac_power: eigensolver did not converge");
  const DenseOp& v = es.eigenvectors();
  Eigen::PartialPivLU<DenseOp> vlu(v);
  const DenseOp vinv = vlu.solve(identity_like(t));
  if (!vinv.allFinite()) throw std::runtime_error("frac_power: eigen route rejected, eigenbasis is singular");
  const double cond = operator_norm(v) * operator_norm(vinv);
  if (!(cond <= kEigenCondCap))
    throw std::runtime_error("frac_power: eigen route rejected, eigenbasis condition estimate " +
                             std::to_string(cond));
  const Eigen::Index d = t.rows();
  Eigen::VectorXcd w(d);
  double maxpow = 0.0, maxder = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const cdouble one_minus = cdouble(1.0) - es.eigenvalues()[i];
    w[i] = one_minus == cdouble(0.0) ? cdouble(0.0) : std::pow(one_minus, cdouble(alpha));
    maxpow = std::max(maxpow, std::abs(w[i]));
    maxder = std::max(maxder, alpha * std::pow(std::max(std::abs(one_minus), 1e-14), alpha - 1.0));
  }
  FracPowerResult r;
  r.op = v * w.asDiagonal() * vinv;
  r.budget = 8.0 * kEps * cond * double(d) * (maxpow + maxder * (1.0 + operator_norm(t)));
  r.used = FracMethod::eigen;
  r.note = "diagonalization, condition estimate " + std::to_string(cond);
  return r;
}

// Sectorial resolvent integral for (lambda I + W^alpha)^{-1}, W = I - T with
// spectrum in the closed right half-plane; log substitution t = e^u, trapezoid
// of step h, truncated where the scalar envelope falls below 1e-18.
DenseOp kato_integral(const DenseOp& w, double alpha, double lambda, double h) {
  const double cosab = std::cos(alpha * kPi);
  const double pref = std::sin(alpha * kPi) / kPi;
  const double log_tiny = std::log(1e-18);
  const double u_lo = log_tiny / (1.0 + alpha);
  const double u_hi = -log_tiny / alpha;
  const auto steps = static_cast<std::size_t>(std::ceil((u_hi - u_lo) / h));
  DenseOp acc = DenseOp::Zero(w.rows(), w.cols());
  for (std::size_t i = 0; i <= steps; ++i) {
    const double u = u_lo + h * double(i);
    const double t = std::exp(u);
    const double ta = std::pow(t, alpha);
    const double den = lambda * lambda + 2.0 * lambda * ta * cosab + ta * ta;
    const double scalar = pref * ta * t / den;
    DenseOp a = w;
    a.diagonal().array() += t;
    const double wt = (i == 0 || i == steps) ? 0.5 : 1.0;
    acc += (wt * scalar) * a.partialPivLu().solve(identity_like(w));
  }
  return h * acc;
}

void require_right_half_plane(const DenseOp& w, const char* what) {
  Eigen::ComplexEigenSolver<DenseOp> es(w, false);
  if (es.info() != Eigen::Success) throw std::runtime_error(std::string(what) + ": eigensolver did not converge");
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (es.eigenvalues()[i].real() < -1e-10)
      throw std::runtime_error(std::string(what) + ": spectrum leaves the right half-plane");
  }
}

FracPowerResult kato_route(const DenseOp& t, double alpha) {
  if (t.rows() > 4)
    throw std::invalid_argument(
        "frac_power: kato reconstruction is limited to dimension 4; use kato_resolvent_check for larger operators");
  DenseOp w = -t;
  w.diagonal().array() += 1.0;
  require_right_half_plane(w, "frac_power(kato)");
  const double lambda = 1.0;
  const DenseOp coarse = kato_integral(w, alpha, lambda, 0.1);
  const DenseOp fine = kato_integral(w, alpha, lambda, 0.05);
  const double quad_est = operator_norm(coarse - fine) / 3.0 + 1e-14;
  const DenseOp kinv = fine.inverse();
  FracPowerResult r;
  r.op = kinv;
  r.op.diagonal().array() -= lambda;
  const double amp = operator_norm(kinv);
  r.budget = 2.0 * amp * amp * quad_est + 64.0 * kEps * amp;
  r.used = FracMethod::kato;
  r.note = "resolvent-integral reconstruction at the reference point";
  return r;
}

}  // namespace

double operator_norm(const DenseOp& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (!m.allFinite()) throw std::invalid_argument("operator_norm: non-finite entries");
  bool finite_ok = true;
  return largest_singular(
      m.cols(), [&](const Eigen::VectorXcd& x) { return (m * x).eval(); },
      [&](const Eigen::VectorXcd& x) { return (m.adjoint() * x).eval(); }, finite_ok);
}

PowerBoundResult power_bound(const DenseOp& t, std::uint64_t n_max) {
  require_square(t, "power_bound");
  if (n_max < 1) throw std::invalid_argument("power_bound: n_max must be >= 1");
  PowerBoundResult r;
  DenseOp p = identity_like(t);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    p = (p * t).eval();
    if (!p.allFinite()) {
      r.aborted = true;
      r.steps = n;
      break;
    }
    const double nn = operator_norm(p);
    r.steps = n;
    if (nn > r.bound) {
      r.bound = nn;
      r.argmax = n;
    }
    if (nn > 1e12) {
      r.aborted = true;
      break;
    }
    // Submultiplicativity: every later power is bounded by nn * (max so far).
    if (nn <= 1.0) {
      r.certified = true;
      break;
    }
  }
  return r;
}

OpWithError psi_op(const ProbSeq& f, const DenseOp& t, std::uint64_t horizon) {
  require_square(t, "psi_op");
  f.validate();
  const PowerBoundResult pb = power_bound(t, horizon);
  const double c = std::max(1.0, pb.bound);

  const Eigen::Index d = t.rows();
  DenseOp acc = DenseOp::Zero(d, d);
  for (std::size_t k = f.coeffs.size(); k-- > 0;) {
    acc = (acc * t).eval();
    acc.diagonal().array() += f.coeffs[k];
  }
  OpWithError out;
  out.op = std::move(acc);
  out.error = c * (f.tail_bound + f.fp_slack) +
              kEps * c * double(f.coeffs.size() + 1) * (4.0 + double(d));
  if (pb.aborted) {
    out.error_certified = false;
    out.warning = "power growth hit the abort ceiling; tail bound is not certified";
  } else if (!pb.certified) {
    out.error_certified = false;
    out.warning = "power-bound estimate is finite-horizon only";
  }
  return out;
}

ResidualCheck subordination_identity_check(const ProbSeq& f, const DenseOp& t, std::uint64_t n,
                                           const ConvOptions& opt) {
  require_square(t, "subordination_identity_check");
  if (n < 1) throw std::invalid_argument("subordination_identity_check: n must be >= 1");
  const OpWithError psi1 = psi_op(f, t);
  DenseOp lhs = psi1.op;
  for (std::uint64_t k = 1; k < n; ++k) lhs = (lhs * psi1.op).eval();
  const ProbSeq fn = conv_power(f, n, opt);
  const OpWithError psi2 = psi_op(fn, t);

  ResidualCheck out;
  out.residual = operator_norm(lhs - psi2.op);
  const double np = operator_norm(psi1.op) + psi1.error;
  out.budget = double(n) * psi1.error * std::pow(std::max(1.0, np), double(n - 1)) + psi2.error +
               kEps * double(n) * double(t.rows()) * 8.0 * std::pow(std::max(1.0, np), double(n));
  out.ok = out.residual <= out.budget;
  return out;
}

ResolventScan resolvent_scan(const DenseOp& t, ResolventKind kind, const ContourParams& params) {
  require_square(t, "resolvent_scan");
  if (params.angles < 1 || params.j_min > params.j_max)
    throw std::invalid_argument("resolvent_scan: bad contour parameters");
  const TriShape shape = tri_shape(t);

  ResolventScan scan;
  scan.kind = kind;
  for (int j = params.j_min; j <= params.j_max; ++j) {
    const double r = 1.0 + std::ldexp(1.0, -j);
    double sup = 0.0;
    for (int a = 0; a < params.angles; ++a) {
      const double theta = 2.0 * kPi * double(a) / double(params.angles);
      const cdouble lambda = std::polar(r, theta);
      DenseOp m = -t;
      m.diagonal().array() += lambda;
      bool singular = false;
      const double rn = resolvent_norm(m, shape, singular);
      const double scale = kind == ResolventKind::ritt ? std::abs(lambda - cdouble(1.0)) : r - 1.0;
      const double value = scale * rn;
      scan.points.push_back({lambda, value, singular});
      scan.any_near_singular = scan.any_near_singular || singular;
      sup = std::max(sup, value);
    }
    scan.radii.push_back(r);
    scan.radius_sup.push_back(sup);
    scan.constant = std::max(scan.constant, sup);
  }
  return scan;
}

FracPowerResult frac_power(const DenseOp& t, double alpha, FracMethod method, std::size_t series_terms) {
  require_square(t, "frac_power");
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("frac_power: alpha must lie in (0,1)");
  if (series_terms < 8) throw std::invalid_argument("frac_power: series_terms too small");

  switch (method) {
    case FracMethod::series:
      return series_route(t, alpha, series_terms);
    case FracMethod::eigen:
      return eigen_route(t, alpha);
    case FracMethod::kato:
      return kato_route(t, alpha);
    case FracMethod::automatic:
      break;
  }

  DenseOp w = -t;
  w.diagonal().array() += 1.0;
  const TriShape shape = tri_shape(t);
  if (alpha == 0.5 && shape != TriShape::none) {
    FracPowerResult r;
    if (shape == TriShape::upper) {
      r.op = sqrtm_upper(w);
    } else {
      r.op = sqrtm_upper(w.transpose()).transpose();
    }
    r.budget = operator_norm(r.op * r.op - w) + 32.0 * kEps * double(t.rows()) * (1.0 + operator_norm(w));
    r.used = FracMethod::automatic;
    r.note = "triangular square-root recurrence, residual-based budget";
    return r;
  }
  try {
    return eigen_route(t, alpha);
  } catch (const std::runtime_error&) {
    // fall through to the structured routes
  }
  if (alpha == 0.5) {
    Eigen::ComplexSchur<DenseOp> schur(t);
    if (schur.info() == Eigen::Success) {
      DenseOp wu = -schur.matrixT();
      wu.diagonal().array() += 1.0;
      FracPowerResult r;
      r.op = schur.matrixU() * sqrtm_upper(wu) * schur.matrixU().adjoint();
      r.budget = operator_norm(r.op * r.op - w) + 64.0 * kEps * double(t.rows()) * (1.0 + operator_norm(w));
      r.used = FracMethod::automatic;
      r.note = "Schur square root, residual-based budget";
      return r;
    }
  }
  Eigen::ComplexEigenSolver<DenseOp> es(t, false);
  double rho = 0.0;
  if (es.info() == Eigen::Success) {
    for (Eigen::Index i = 0; i < t.rows(); ++i) rho = std::max(rho, std::abs(es.eigenvalues()[i]));
  } else {
    rho = 1.0;
  }
  if (rho <= 1.0 - 1e-3) return series_route(t, alpha, series_terms);
  throw std::runtime_error("frac_power: no certified route (defective, spectrum near the unit circle)");
}

KatoResolventCheck kato_resolvent_check(const DenseOp& t, double alpha,
                                        std::span<const double> lambda_grid) {
  require_square(t, "kato_resolvent_check");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("kato_resolvent_check: alpha must lie in (0,1)");
  if (lambda_grid.empty()) throw std::invalid_argument("kato_resolvent_check: empty lambda grid");
  DenseOp w = -t;
  w.diagonal().array() += 1.0;
  require_right_half_plane(w, "kato_resolvent_check");
  const FracPowerResult ref = frac_power(t, alpha, FracMethod::automatic);

  KatoResolventCheck out;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw std::invalid_argument("kato_resolvent_check: lambda must be positive");
    const DenseOp coarse = kato_integral(w, alpha, lambda, 0.1);
    const DenseOp fine = kato_integral(w, alpha, lambda, 0.05);
    DenseOp shifted = ref.op;
    shifted.diagonal().array() += lambda;
    const DenseOp kref = shifted.inverse();
    const double amp = operator_norm(kref);
    const double residual = operator_norm(fine - kref);
    const double budget =
        operator_norm(coarse - fine) / 3.0 + 1e-13 + amp * amp * ref.budget + 64.0 * kEps * amp;
    out.max_residual = std::max(out.max_residual, residual);
    out.budget = std::max(out.budget, budget);
  }
  out.ok = out.max_residual <= out.budget;
  return out;
}

RittFromKreissReport ritt_from_kreiss_check(const DenseOp& t, double alpha) {
  RittFromKreissReport rep;
  rep.kreiss_of_t = resolvent_scan(t, ResolventKind::kreiss);
  const FracPowerResult fp = frac_power(t, alpha, FracMethod::automatic);
  rep.frac_budget = fp.budget;
  rep.s = -fp.op;
  rep.s.diagonal().array() += 1.0;
  rep.ritt_of_s = resolvent_scan(rep.s, ResolventKind::ritt);
  return rep;
}

DenseOp volterra_v(std::size_t d) {
  if (d < 2) throw std::invalid_argument("volterra_v: d must be >= 2");
  const double h = 1.0 / double(d);
  DenseOp v = DenseOp::Zero(Eigen::Index(d), Eigen::Index(d));
  for (Eigen::Index i = 0; i < Eigen::Index(d); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) v(i, j) = h;
    v(i, i) = h / 2.0;
  }
  return v;
}

DenseOp volterra_op(std::size_t d) {
  DenseOp a = volterra_v(d);
  a.diagonal().array() += 1.0;
  return a.triangularView<Eigen::Lower>().solve(DenseOp::Identity(Eigen::Index(d), Eigen::Index(d)));
}

DenseOp shift_op(std::size_t d) {
  if (d < 2) throw std::invalid_argument("shift_op: d must be >= 2");
  DenseOp s = DenseOp::Zero(Eigen::Index(d), Eigen::Index(d));
  for (Eigen::Index i = 0; i + 1 < Eigen::Index(d); ++i) s(i + 1, i) = 1.0;
  return s;
}

SpectralMapCheck spectral_map_check(const ProbSeq& f, const DenseOp& t) {
  require_square(t, "spectral_map_check");
  Eigen::ComplexEigenSolver<DenseOp> es(t);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectral_map_check: eigensolver did not converge");
  const DenseOp& v = es.eigenvectors();
  const DenseOp vinv = v.partialPivLu().solve(identity_like(t));
  SpectralMapCheck out;
  out.eig_condition = operator_norm(v) * operator_norm(vinv);

  const OpWithError psi = psi_op(f, t);
  Eigen::ComplexEigenSolver<DenseOp> es2(psi.op, false);
  if (es2.info() != Eigen::Success) throw std::runtime_error("spectral_map_check: eigensolver did not converge");

  const Eigen::Index d = t.rows();
  std::vector<cdouble> mapped(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    cdouble z = es.eigenvalues()[i];
    const double az = std::abs(z);
    if (az > 1.0) z /= az;  // eigensolver jitter off the closed disc
    mapped[static_cast<std::size_t>(i)] = gen_fn(f, z).value;
  }
  double hausdorff = 0.0;
  auto one_sided = [&](auto&& as, auto&& bs) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < d; ++j) best = std::min(best, std::abs(as(i) - bs(j)));
      worst = std::max(worst, best);
    }
    return worst;
  };
  hausdorff = std::max(
      one_sided([&](Eigen::Index i) { return es2.eigenvalues()[i]; },
                [&](Eigen::Index j) { return mapped[static_cast<std::size_t>(j)]; }),
      one_sided([&](Eigen::Index i) { return mapped[static_cast<std::size_t>(i)]; },
                [&](Eigen::Index j) { return es2.eigenvalues()[j]; }));
  out.distance = hausdorff;
  const double cond = std::min(out.eig_condition, 1e12);
  out.budget = cond * psi.error + gen_fn(f, cdouble(1.0)).error + 256.0 * kEps * cond * double(d);
  out.ok = out.distance <= out.budget;
  return out;
}

KrittSuiteReport kritt_equivalence_suite(const DenseOp& t, std::span<const double> gammas, double ceiling) {
  require_square(t, "kritt_equivalence_suite");
  KrittSuiteReport rep;
  rep.base_ritt_constant = resolvent_scan(t, ResolventKind::ritt).constant;
  DenseOp w = -t;
  w.diagonal().array() += 1.0;
  for (double gamma : gammas) {
    if (!(gamma > 1.0) || !(gamma < 2.0))
      throw std::invalid_argument("kritt_equivalence_suite: gamma must lie in (1,2)");
    const FracPowerResult fp = frac_power(t, gamma - 1.0, FracMethod::automatic);
    DenseOp s = -(w * fp.op);
    s.diagonal().array() += 1.0;
    const ResolventScan scan = resolvent_scan(s, ResolventKind::ritt);
    GammaRittRow row;
    row.gamma = gamma;
    row.constant = scan.constant;
    row.near_singular = scan.any_near_singular;
    row.pass = !scan.any_near_singular && std::isfinite(scan.constant) && scan.constant <= ceiling;
    if (row.pass) rep.largest_pass = std::max(rep.largest_pass, gamma);
    rep.rows.push_back(row);
  }
  return rep;
}

DenseOp make_random_normal_contraction(std::size_t d, std::uint64_t seed, double max_modulus) {
  if (d < 1) throw std::invalid_argument("make_random_normal_contraction: d must be >= 1");
  if (!(max_modulus > 0.0) || !(max_modulus < 1.0))
    throw std::invalid_argument("make_random_normal_contraction: max_modulus must lie in (0,1)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> mod(0.0, max_modulus);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  const auto n = Eigen::Index(d);
  DenseOp g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cdouble(nd(rng), nd(rng));
  Eigen::HouseholderQR<DenseOp> qr(g);
  DenseOp q = qr.householderQ() * DenseOp::Identity(n, n);
  Eigen::VectorXcd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = std::polar(mod(rng), ph(rng));
  return q * diag.asDiagonal() * q.adjoint();
}

}  // namespace rittlab
