#include "slipflow/app.hpp"

#include "slipflow/config.hpp"
#include "slipflow/convergence.hpp"
#include "slipflow/diagnostics.hpp"
#include "slipflow/error.hpp"
#include "slipflow/snapshot.hpp"
#include "slipflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#ifndef SLIPFLOW_VERSION
#define SLIPFLOW_VERSION "unknown"
#endif

namespace slipflow {

namespace fs = std::filesystem;

namespace {

constexpr int verify_steps = 10;
constexpr double verify_bc_tol = 1e-12;
constexpr double verify_div_tol = 1e-10;

void
write_json(const fs::path& path, const nlohmann::json& j)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

void
prepare_output(const Config& c)
{
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec || !fs::is_directory(c.output_dir))
    throw ConfigError("output_dir '" + c.output_dir.string() +
                      "' cannot be created");
  const auto probe = c.output_dir / ".write_probe";
  {
    std::ofstream os(probe);
    if (!os)
      throw ConfigError("output_dir '" + c.output_dir.string() +
                        "' is not writable");
  }
  fs::remove(probe, ec);
  write_json(c.output_dir / "config.resolved.json", emit_config(c));
}

FlowState
initial_state(const Config& c)
{
  return make_initial_state(Grid::make(c.domain), c.ic);
}

std::string
snapshot_name(std::size_t i)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.bin", i);
  return buf;
}

nlohmann::json
version_info()
{
  return {{"slipflow", SLIPFLOW_VERSION}, {"fftw", std::string(fftw_version)}};
}

int
simulate(const Config& c, std::ostream& out)
{
  if (c.sweep)
    throw ConfigError("a sweep section is only allowed with the sweep subcommand");
  prepare_output(c);
  const auto state0 = initial_state(c);

  std::ofstream log(c.output_dir / "log.jsonl");
  if (!log)
    throw IoError("cannot write run log");
  auto observer = [&](const FlowState&, const StepInfo& info) {
    log << info.to_json().dump() << '\n';
  };
  const auto times =
    c.snapshot_times.empty() ? std::vector{c.solver.t_end} : c.snapshot_times;
  const auto res = run(state0, c.solver, times, {}, observer);

  nlohmann::json snaps = nlohmann::json::array();
  for (std::size_t i = 0; i < res.snapshots.size(); ++i)
  {
    const auto name = snapshot_name(i);
    write_snapshot(c.output_dir / name, res.snapshots[i]);
    snaps.push_back({{"t", res.snapshots[i].t}, {"file", name}});
  }
  if (res.snapshots.size() >= 2)
    write_trajectory_csv(c.output_dir / "trajectory.csv", res.snapshots,
                         c.solver.nu);

  nlohmann::json summary{{"ok", res.ok},
                         {"failure", res.failure},
                         {"failure_kind", res.failure_kind},
                         {"steps", res.steps},
                         {"h3_initial", res.h3_initial},
                         {"h3_max", res.h3_max},
                         {"growth_exceeded", res.growth_exceeded},
                         {"density_range_excess", res.density_range_excess},
                         {"density_range_ok", res.density_range_ok()},
                         {"snapshots", snaps},
                         {"versions", version_info()}};
  write_json(c.output_dir / "summary.json", summary);
  out << summary.dump(2) << '\n';
  return res.ok ? exit_ok : exit_solver;
}

int
sweep(const Config& c, std::ostream& out)
{
  if (!c.sweep)
    throw ConfigError("the sweep subcommand needs a sweep section");
  prepare_output(c);

  SweepSpec spec;
  spec.nu_list = c.sweep->nu_list;
  spec.t_end = c.solver.t_end;
  spec.eval_times =
    c.sweep->eval_times.empty() ? std::vector{c.solver.t_end} : c.sweep->eval_times;
  spec.norm_order = c.sweep->norm_order;
  spec.ic = c.ic;
  spec.resolution = c.domain;
  spec.solver = c.solver;
  spec.threads = thread_count();
  spec.run_dir = c.output_dir / "runs";

  const auto result = run_sweep(spec);

  std::vector<RateFit> fits;
  if (result.ok)
    for (double t : spec.eval_times)
      fits.push_back(fit_rate(result.records, t));

  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : result.runs)
    runs.push_back(r.to_json());
  nlohmann::json meta{{"ok", result.ok},
                      {"failure", result.failure},
                      {"euler", result.euler.to_json()},
                      {"runs", runs},
                      {"h3_variation", result.ok ? result.h3_variation() : 0.0},
                      {"versions", version_info()},
                      {"config", emit_config(c)}};
  emit_report(result.records, fits, meta, c.output_dir);

  nlohmann::json brief{{"ok", result.ok}, {"fits", nlohmann::json::array()}};
  bool verdict = true;
  for (const auto& f : fits)
  {
    brief["fits"].push_back(f.to_json());
    verdict = verdict && f.verdict;
  }
  if (!result.ok)
    brief["failure"] = result.failure;
  out << brief.dump(2) << '\n';
  if (!result.ok)
    return exit_solver;
  return verdict ? exit_ok : exit_verdict;
}

int
verify(const Config& c, std::ostream& out)
{
  if (c.sweep)
    throw ConfigError("a sweep section is only allowed with the sweep subcommand");
  prepare_output(c);
  const auto state0 = initial_state(c);
  const auto bounds = DensityBounds::from_density(state0.rho);
  const auto initial = validate_initial_data(state0.rho, state0.u, bounds);

  nlohmann::json report{{"initial", initial.to_json()}};
  std::vector<std::string> failures;
  int code = exit_ok;
  if (!initial.passed())
  {
    failures = initial.failures;
    code = exit_validation;
  }
  else
  {
    Integrator integ(c.solver);
    FlowState s = state0;
    nlohmann::json steps = nlohmann::json::array();
    try
    {
      for (int n = 0; n < verify_steps && s.t < c.solver.t_end; ++n)
      {
        const double dt = integ.choose_dt(s, c.solver.t_end - s.t);
        StepInfo info;
        s = integ.step(s, dt, &info);
        const auto bc = boundary_residuals(s);
        const double div = l2_norm(divergence(s.u));
        const double rmin = info.rho_min, rmax = info.rho_max;
        const double excess =
          std::max({rmax - bounds.rho_max, bounds.rho_min - rmin, 0.0});
        steps.push_back({{"t", s.t},
                         {"divergence", div},
                         {"boundary", bc.to_json()},
                         {"rho_min", rmin},
                         {"rho_max", rmax}});
        if (bc.structural_max() > verify_bc_tol)
          failures.push_back("wall trace " + std::to_string(bc.structural_max()) +
                             " at t = " + std::to_string(s.t));
        if (div > verify_div_tol)
          failures.push_back("divergence " + std::to_string(div) +
                             " at t = " + std::to_string(s.t));
        if (!(rmin > 0.0))
          failures.push_back("density lost positivity at t = " +
                             std::to_string(s.t));
        if (excess > RunResult::density_range_tol)
          failures.push_back("density left its initial range by " +
                             std::to_string(excess));
      }
      if (!failures.empty())
        code = exit_validation;
    }
    catch (const SolverAbort& e)
    {
      failures.push_back(e.what());
      code = exit_solver;
    }
    report["steps"] = steps;
  }
  report["failures"] = failures;
  report["passed"] = failures.empty();
  write_json(c.output_dir / "verify.json", report);
  out << report.dump(2) << '\n';
  return code;
}

int
compare(const CliArgs& args, std::ostream& out)
{
  if (args.norm < 0 || args.norm > 3)
    throw ConfigError("--norm must be 0..3");
  const auto a = read_snapshot(args.a);
  const auto b = read_snapshot(args.b);
  if (a.names != b.names)
    throw ValidationError("snapshots hold different fields");
  const NormSpec norm{args.norm, NormSpec::Kind::Full};
  double sq = 0.0;
  for (std::size_t i = 0; i < a.fields.size(); ++i)
  {
    const auto& fa = a.fields[i];
    const auto& fb = b.fields[i];
    if (!(fa.domain() == fb.domain()))
      throw ValidationError("snapshots live on different grids");
    if (fa.parity() != fb.parity())
      throw ValidationError("field '" + a.names[i] + "' differs in parity");
    const double d = sobolev_norm(fa - fb, norm);
    sq += d * d;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::sqrt(sq));
  out << buf << '\n';
  return exit_ok;
}

} // namespace

int
thread_count()
{
  if (const char* env = std::getenv("SLIPFLOW_THREADS"))
  {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1)
      return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int
dispatch(const CliArgs& args, std::ostream& out, std::ostream& err)
{
  try
  {
    if (args.subcommand == "compare")
      return compare(args, out);
    if (!args.config)
      throw ConfigError(args.subcommand + " needs --config");
    const auto config = load_config(*args.config);
    if (args.subcommand == "simulate")
      return simulate(config, out);
    if (args.subcommand == "sweep")
      return sweep(config, out);
    if (args.subcommand == "verify")
      return verify(config, out);
    throw ConfigError("unknown subcommand '" + args.subcommand + "'");
  }
  catch (const ConfigError& e)
  {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  }
  catch (const ValidationError& e)
  {
    err << "validation error: " << e.what() << '\n';
    return exit_validation;
  }
  catch (const SolverAbort& e)
  {
    err << "solver abort: " << e.what() << '\n';
    return exit_solver;
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }
}

} // namespace slipflow
