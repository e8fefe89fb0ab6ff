#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace slipflow {

/// Process exit codes.
enum ExitCode : int
{
  exit_ok = 0,
  exit_error = 1,
  exit_config = 2,
  exit_validation = 3,
  exit_solver = 4,
  exit_verdict = 5,
};

struct CliArgs
{
  /// simulate | sweep | verify | compare
  std::string subcommand;
  std::optional<std::filesystem::path> config;
  /// compare only.
  std::filesystem::path a, b;
  int norm = 0;
};

/// Runs one subcommand and maps library errors to exit codes. Results go
/// to `out`, diagnostics to `err`.
int dispatch(const CliArgs& args, std::ostream& out, std::ostream& err);

/// Number of concurrent sweep runs: SLIPFLOW_THREADS if set, else the
/// hardware concurrency.
int thread_count();

} // namespace slipflow
