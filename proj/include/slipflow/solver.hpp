#pragma once

#include "slipflow/elliptic.hpp"
#include "slipflow/state.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slipflow {

enum class DtPolicy
{
  Fixed,
  Cfl
};

struct SolverParams
{
  /// nu = 0 integrates the inviscid system on the same code path.
  double nu = 0.0;
  DtPolicy dt_policy = DtPolicy::Cfl;
  /// Step size for DtPolicy::Fixed; for Cfl, an optional upper cap (<= 0
  /// means uncapped).
  double dt = 0.0;
  double cfl_adv = 0.5;
  double cfl_visc = 0.4;
  PressureSolveParams pressure;
  bool dealias = true;
  double t_end = 1.0;
  /// Monitored H3 norms growing past this factor of their initial value are
  /// flagged in the run result.
  double growth_factor = 10.0;

  void validate() const;
  bool operator==(const SolverParams&) const = default;
};

/// Optional body forcing, used by manufactured-solution checks.
///   rho (du/dt + u . grad u) + grad p - nu lap u = momentum(t)
///   drho/dt + u . grad rho = density(t)
struct Forcing
{
  std::function<VectorField(double)> momentum;
  std::function<ScalarField(double)> density;
};

struct ValidationReport
{
  double divergence = 0.0;
  double u3_trace = 0.0;
  double du1_dz_trace = 0.0;
  double du2_dz_trace = 0.0;
  double drho_dz_trace = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  bool velocity_parities = true;
  bool bounds_ok = true;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  nlohmann::json to_json() const;
};

inline constexpr double initial_data_tol = 1e-10;

/// Checks divergence, slip-wall traces, the density Neumann trace and the
/// density bounds of initial data. Never throws on bad data.
ValidationReport validate_initial_data(const ScalarField& rho0,
                                       const VectorField& u0,
                                       const DensityBounds& bounds);

/// -u . grad rho: the density stage right-hand side.
ScalarField density_rhs(const FlowState& state, bool dealias);

/// Transports rho over dt with u frozen (one SSP-RK3 step).
ScalarField advect_density(const FlowState& state, double dt, bool dealias);

struct MomentumRhs
{
  VectorField dudt;
  PressureResult pressure;
};

/// du/dt = -u . grad u - rho^-1 grad p + nu rho^-1 lap u (+ rho^-1 F),
/// where p makes the result divergence-free.
MomentumRhs momentum_rhs(const FlowState& state, const SolverParams& params,
                         const Forcing* forcing = nullptr,
                         const ScalarField* pressure_guess = nullptr);

/// Per-step record; one JSON line each in the run log.
struct StepInfo
{
  double t = 0.0;
  double dt = 0.0;
  double energy = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double divergence = 0.0;
  int pressure_iterations = 0;
  double pressure_residual = 0.0;
  /// max wall trace of u3, du1/dz, du2/dz, drho/dz, omega1, omega2.
  double bc_trace = 0.0;

  nlohmann::json to_json() const;
};

/// Largest stable step for the state: min of the advective limit
/// cfl_adv h / |u|_max, the viscous limit cfl_visc h^2 / nu, and the
/// SSP-RK3 diffusive stability limit on the retained spectrum.
double max_stable_dt(const FlowState& state, const SolverParams& params);

/// Run-owned SSP-RK3 integrator. Keeps the last pressure as the initial
/// guess of the next elliptic solve.
class Integrator
{
public:
  explicit Integrator(SolverParams params, Forcing forcing = {});

  const SolverParams& params() const { return params_; }

  /// Advances by dt; throws SolverAbort on CFL violation, positivity loss,
  /// or broken state invariants.
  FlowState step(const FlowState& state, double dt, StepInfo* info = nullptr);

  /// dt chosen by the policy, not exceeding max_dt.
  double choose_dt(const FlowState& state, double max_dt) const;

private:
  MomentumRhs rhs(const FlowState& s, double t);
  ScalarField rho_rhs(const FlowState& s, double t) const;

  SolverParams params_;
  Forcing forcing_;
  std::optional<ScalarField> last_pressure_;
};

/// One SSP-RK3 step with dt from the policy.
FlowState step(const FlowState& state, const SolverParams& params);

struct RunResult
{
  std::vector<FlowState> snapshots;
  std::vector<StepInfo> log;
  bool ok = true;
  std::string failure;
  /// Exit category of a failure: "positivity", "cfl", "pressure",
  /// "invariant".
  std::string failure_kind;
  std::size_t steps = 0;

  double h3_initial = 0.0;
  /// max over accepted steps of ||rho||_3 + ||u||_3.
  double h3_max = 0.0;
  bool growth_exceeded = false;
  /// max(rho_max(t) - rho_max(0), rho_min(0) - rho_min(t), 0).
  double density_range_excess = 0.0;

  /// Transport min/max principle, monitored rather than enforced.
  static constexpr double density_range_tol = 1e-4;
  bool density_range_ok() const
  {
    return density_range_excess <= density_range_tol;
  }
};

using StepObserver = std::function<void(const FlowState&, const StepInfo&)>;

/// Integrates from state0 to params.t_end, storing states at each of
/// snapshot_times (steps are shortened to land on them exactly). Throws
/// ValidationError if the initial data do not validate; solver failures
/// end the run early and are reported in the result.
RunResult run(const FlowState& state0, const SolverParams& params,
              std::vector<double> snapshot_times, Forcing forcing = {},
              const StepObserver& observer = {});

} // namespace slipflow
