#pragma once

#include "slipflow/presets.hpp"
#include "slipflow/solver.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace slipflow {

/// One vanishing-viscosity experiment: an inviscid reference run and one
/// viscous run per nu, all from the same initial data and dt policy.
struct SweepSpec
{
  std::vector<double> nu_list{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double t_end = 0.5;
  std::vector<double> eval_times{0.5};
  int norm_order = 2;
  PresetSpec ic;
  DomainSpec resolution;
  /// Template for every run; nu and t_end are overwritten per run.
  SolverParams solver;
  /// Concurrent runs; results do not depend on it.
  int threads = 1;
  /// When set, per-run JSON-lines logs go here.
  std::optional<std::filesystem::path> run_dir;

  void validate() const;
};

struct ErrorRecord
{
  double nu = 0.0;
  double t = 0.0;
  double err_rho_sq = 0.0;
  double err_u_sq = 0.0;
  double total_sq = 0.0;

  bool operator==(const ErrorRecord&) const = default;
};

struct RunSummary
{
  double nu = 0.0;
  bool ok = true;
  std::string failure;
  std::string failure_kind;
  std::size_t steps = 0;
  double h3_initial = 0.0;
  double h3_max = 0.0;
  bool growth_exceeded = false;
  double density_range_excess = 0.0;
  double max_bc_trace = 0.0;

  nlohmann::json to_json() const;
};

struct SweepResult
{
  /// Sorted by (nu, t).
  std::vector<ErrorRecord> records;
  RunSummary euler;
  /// One per nu, in nu_list order.
  std::vector<RunSummary> runs;
  bool ok = true;
  std::string failure;

  /// |M(nu_max) - M(nu_min)| / M(nu_min), M = max_t ||rho||_3 + ||u||_3.
  double h3_variation() const;
};

/// Runs the whole sweep. Initial data failing validation throws
/// ValidationError; a failing run leaves ok = false with the records of
/// the runs that completed.
SweepResult run_sweep(const SweepSpec& spec);

/// Error norms of a viscous state against the inviscid one.
ErrorRecord error_record(double nu, const FlowState& viscous,
                         const FlowState& inviscid, int norm_order);

struct RateFit
{
  double t = 0.0;
  std::size_t points = 0;
  /// Least-squares slope of log(total_sq) against log(nu); +inf when all
  /// errors vanish.
  double slope = 0.0;
  double constant = 0.0;
  /// RMS residual of the log-log line.
  double fit_residual = 0.0;
  double bound_ratio_max = 0.0;
  /// total_sq / nu in order of decreasing nu.
  std::vector<double> ratios;
  bool ratio_non_increasing = true;
  bool verdict = true;

  nlohmann::json to_json() const;
};

inline constexpr double ratio_slack = 0.10;
inline constexpr double slope_threshold = 0.9;

/// Fits the records at time `at`. Needs >= 3 distinct nu (ValidationError
/// otherwise). Passes when total_sq/nu does not grow by more than 10% from
/// one nu to the next smaller one, or when the slope is >= 0.9.
RateFit fit_rate(const std::vector<ErrorRecord>& records, double at);

/// Writes dir/report.csv and dir/report.json. Byte-deterministic for fixed
/// inputs.
void emit_report(const std::vector<ErrorRecord>& records,
                 const std::vector<RateFit>& fits,
                 const nlohmann::json& metadata,
                 const std::filesystem::path& dir);

std::string records_csv(const std::vector<ErrorRecord>& records);
std::vector<ErrorRecord> parse_records_csv(const std::string& text);

} // namespace slipflow
