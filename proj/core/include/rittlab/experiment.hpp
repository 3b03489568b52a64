#pragma once
// Versioned experiment configs, the batch runner behind the CLI, and the
// numeric-tolerant artifact compare used for regression checks.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rittlab/families.hpp"
#include "rittlab/ritt_diag.hpp"

namespace rittlab {

// Config rejection with a JSON-pointer anchor in the message.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DiagnosticKind { ritt_table, half_table, semigroup_table, sector_report, class_a_report };

struct OperatorSuiteSpec {
  // volterra | shift | random_normal | psi_of_family (psi_op of the
  // experiment's family applied to a random normal contraction)
  std::string source = "random_normal";
  std::size_t dim = 8;
  std::uint64_t seed = 1;
  double alpha = 0.5;  // fractional-power order used by the checks below
  // ritt_scan | kreiss_scan | spectral_map | subordination | frac_power_square | kritt_suite
  std::vector<std::string> checks;
};

struct ExperimentSpec {
  std::string name;  // artifact directory; [A-Za-z0-9._-]+
  FamilySpec family;
  ConvMethod method = ConvMethod::fft;
  std::vector<DiagnosticKind> diagnostics;
  std::uint64_t n_first = 2;
  std::uint64_t n_last = 2048;
  std::uint64_t t_first = 1;
  std::uint64_t t_last = 1024;
  std::uint64_t window = 0;  // convolution length cap; 0 keeps the family length
  int xi_points = 40;
  std::optional<OperatorSuiteSpec> suite;
};

struct ExperimentConfig {
  int version = 1;
  std::vector<ExperimentSpec> experiments;
};

// Strict parse: version must be 1, unknown keys rejected, pointer-anchored
// messages ("/experiments/0/family: unknown key 'alpa'").
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunResult {
  std::filesystem::path manifest;
  std::size_t artifacts = 0;
};

// Runs every experiment into out_dir/<name>/ and writes out_dir/MANIFEST.
// force_method overrides each experiment's convolution method.
RunResult run_experiments(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                          std::optional<ConvMethod> force_method = std::nullopt);

struct CompareRow {
  std::string name;
  std::string status;  // pass | diff | missing_a | missing_b
  std::string detail;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  bool ok = false;
  std::string render() const;
};

// Numeric-tolerant diff of two run manifests: JSON artifacts are compared as
// trees (numbers within tol, strings exact), CSV artifacts cell by cell.
CompareReport compare_runs(const std::filesystem::path& manifest_a,
                           const std::filesystem::path& manifest_b, double tol);

}  // namespace rittlab
