#pragma once

#include "slipflow/domain.hpp"
#include "slipflow/presets.hpp"
#include "slipflow/solver.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace slipflow {

struct SweepConfig
{
  std::vector<double> nu_list{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  /// Empty means [solver.t_end].
  std::vector<double> eval_times;
  int norm_order = 2;

  bool operator==(const SweepConfig&) const = default;
};

/// Resolved run configuration. JSON layout:
///
///   {
///     "domain": {"Lx", "Ly", "Lz", "Nx", "Ny", "Nz", "dim"},
///     "ic": {"preset", "params": {...}, "seed"},
///     "solver": {"nu", "t_end", "dt_policy": "cfl" | "fixed", "dt",
///                "cfl_adv", "cfl_visc", "dealias", "growth_factor",
///                "pressure": {"rel_tol", "max_iter", "precond_coeff"}},
///     "snapshot_times": [...],
///     "sweep": {"nu_list", "eval_times", "norm_order"},
///     "output_dir": "..."
///   }
///
/// Required: domain.Nx, domain.Nz (and domain.Ny when dim = 3),
/// ic.preset, solver.nu, solver.t_end. Everything else has a default.
struct Config
{
  DomainSpec domain;
  PresetSpec ic;
  SolverParams solver;
  /// Empty means [solver.t_end].
  std::vector<double> snapshot_times;
  std::optional<SweepConfig> sweep;
  std::filesystem::path output_dir = "out";

  bool operator==(const Config&) const = default;
};

/// Strict parse: unknown keys, wrong types and missing required fields
/// throw ConfigError naming the offending field.
Config parse_config(const std::string& text);
Config parse_config(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);

/// Fully resolved form, every default spelled out.
nlohmann::json emit_config(const Config& c);

} // namespace slipflow
