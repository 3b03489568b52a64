#pragma once
// Trend diagnostics for walk laws on the nonnegative integers: the n-scaled
// successive-difference statistic, its square-root-scaled variant, the
// continuous-time semigroup statistic, and an aggregate classifier that
// combines them with the periodicity, first-moment, and sector screens.
//
// Everything here reports intervals and documented heuristics, never proofs.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rittlab/transforms.hpp"
#include "rittlab/trunc_seq.hpp"

namespace rittlab {

enum class DiagKind { ritt_n, half_n, semigroup_t };

struct DiagRow {
  double index = 0.0;  // power n or time t
  double lower = 0.0;  // certified lower bound of the scaled statistic
  double upper = 0.0;  // certified upper bound; vacuous (mass-limited) for very
                       // heavy tails, see table_screen
  bool low_precision = false;  // interval width exceeds 10% of the upper value
};

struct DiagTable {
  DiagKind kind = DiagKind::ritt_n;
  std::vector<DiagRow> rows;  // sorted by index, lower <= upper per row
  // log-log fit of the UNSCALED statistic's certified lower bounds against the
  // index, over the top half of the grid (rows at the numerical floor are
  // skipped; fewer than 3 usable rows leaves the fit invalid).
  LineFit slope_fit;
};

// {first, 2*first, 4*first, ..., <= last}; requires 1 <= first <= last.
std::vector<double> dyadic_grid(double first, double last);

struct DiffTables {
  DiagTable ritt;
  DiagTable half;
};

// Both difference tables from one shared convolution-power chain: each grid
// point costs one chain advance plus one times-base convolution, and the ritt
// and half rows are n*diff and sqrt(n)*diff of the same interval statistics.
DiffTables diff_tables(const ProbSeq& f, std::span<const double> n_grid, const ConvOptions& opt = {});
DiagTable ritt_table(const ProbSeq& f, std::span<const double> n_grid, const ConvOptions& opt = {});
DiagTable half_table(const ProbSeq& f, std::span<const double> n_grid, const ConvOptions& opt = {});

// Rows t * ||(delta_0 - F) * e^{-t(delta_0 - F)}||_1 as intervals; the
// exponential advances along the grid by squaring (plus a short uniformization
// run for non-dyadic gaps), and each row costs one extra convolution because
// (delta_0 - F) * E_t = E_t - F * E_t is a difference of two sub-probabilities.
DiagTable semigroup_table(const ProbSeq& f, std::span<const double> t_grid,
                          const ConvExpOptions& opt = {});

enum class ScreenVerdict { bounded, growing, inconclusive };

struct TableScreen {
  ScreenVerdict verdict = ScreenVerdict::inconclusive;
  // All of the last three scaled lowers at the numerical floor. Typical for
  // laws whose walk escapes every feasible window (the scaled statistic is
  // then bounded trivially on the inspected range).
  bool degenerate = false;
  bool flat = false;       // last-three relative spread of the scaled lowers <= 25%
  double flatness = 0.0;   // (max - min) / max over the last three scaled lowers
  LineFit slope;           // copied from the table
  std::string note;
};

// Heuristic trend classification, evaluated on certified LOWER bounds: upper
// bounds are sound but become vacuous once a heavy tail leaves the window, so
// boundedness is reported as "the certified part of the statistic is flat and
// the raw statistic decays at the expected rate", never as a proof.
TableScreen table_screen(const DiagTable& table);

struct SectorScreen {
  // At least three moderately certified points lie strictly inside the sector
  // |arg| < pi/2 - margin (error included).
  bool affirmative = false;
  // The three smallest-xi tightly certified points all lie outside it
  // (error subtracted): evidence that the boundary argument approaches pi/2.
  bool violation = false;
  double sup_angle = 0.0;      // sup certified angle, copied from the report
  double limit_estimate = 0.0; // extrapolated xi -> 0 angle, when available
  bool limit_valid = false;
};

SectorScreen sector_screen(const SectorReport& rep);

enum class ClassAVerdict { consistent_with_A, inconsistent_with_A, inconclusive };

struct ClassAConfig {
  std::vector<double> n_grid;   // empty: {2, 4, ..., 2048}
  std::vector<double> xi_grid;  // empty: geometric_xi_grid(40)
  bool include_half = true;
  bool include_semigroup = false;  // off by default: it is the costly screen
  std::vector<double> t_grid;      // empty: {1, 2, ..., 1024}
  ConvOptions conv{};              // cap is raised to the window length of f
  double support_eps = 0.0;        // periodicity support threshold
};

struct ClassAReport {
  ClassAVerdict verdict = ClassAVerdict::inconclusive;
  Periodicity periodicity;
  // > 1 when the support lived on mZ and the diagnostics ran on the rescaled
  // law F~(k) = F(km); the verdict then describes F via the rescaling.
  std::uint64_t rescaled_by = 1;
  FirstMomentResult moment;
  SectorReport sector;
  SectorScreen sector_flags;
  DiagTable ritt;
  TableScreen ritt_screen;
  DiagTable half;
  TableScreen half_screen;
  std::optional<DiagTable> semigroup;
  std::optional<TableScreen> semigroup_screen;
  bool tables_computed = false;  // false when periodicity already decided it
  // Violation flags driving an inconsistent verdict.
  bool moment_violation = false;
  bool sector_violation = false;
  bool ritt_violation = false;
  // Human-readable evidence lines. Deliberately number-free: numeric values
  // live in the structured fields so artifact diffs stay tolerance-based.
  std::vector<std::string> evidence;
};

ClassAReport class_a_report(const ProbSeq& f, const ClassAConfig& config = {});

}  // namespace rittlab
