#include "slipflow/solver.hpp"

#include "slipflow/diagnostics.hpp"
#include "slipflow/error.hpp"
#include "slipflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace slipflow {

namespace {

constexpr double divergence_tol = 1e-10;
constexpr double trace_tol = 1e-12;
// Real-axis extent of the SSP-RK3 stability region, with a safety factor.
constexpr double rk3_real_stability = 2.51 * 0.9;

struct Range
{
  double lo;
  double hi;
};

Range
physical_range(const ScalarField& f)
{
  const auto v = transform_inverse(f);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

double
max_speed(const VectorField& u)
{
  std::vector<double> s(u.grid().physical_size(), 0.0);
  for (int i = 0; i < 3; ++i)
  {
    const auto c = transform_inverse(u[i]);
    for (std::size_t n = 0; n < s.size(); ++n)
      s[n] += c[n] * c[n];
  }
  return std::sqrt(*std::max_element(s.begin(), s.end()));
}

/// Largest |k|^2 the Laplacian can produce on the retained spectrum.
double
max_k2(const Grid& g, bool dealias)
{
  const auto& d = g.spec();
  const double two_pi = 2.0 * std::numbers::pi;
  const int ix = dealias ? (d.Nx - 1) / 3 : d.Nx / 2;
  const int iy = d.Ny == 1 ? 0 : (dealias ? (d.Ny - 1) / 3 : d.Ny / 2);
  const int m = dealias ? (2 * d.Nz - 1) / 3 : d.Nz;
  const double kx = two_pi * ix / d.Lx;
  const double ky = two_pi * iy / d.Ly;
  const double kz = std::numbers::pi * m;
  return kx * kx + ky * ky + kz * kz;
}

/// Pointwise s * f / rho, transformed back with f's parity.
ScalarField
divide_by_density(const ScalarField& f, const std::vector<double>& rho,
                  double s)
{
  auto v = transform_inverse(f);
  for (std::size_t n = 0; n < v.size(); ++n)
    v[n] *= s / rho[n];
  return transform_forward(f.grid_ptr(), v, f.parity());
}

double
h3_monitor(const FlowState& s)
{
  return sobolev_norm(s.rho, {3}) + sobolev_norm(s.u, {3});
}

} // namespace

void
SolverParams::validate() const
{
  if (!(nu >= 0.0))
    throw ConfigError("solver.nu must be >= 0");
  if (dt_policy == DtPolicy::Fixed && !(dt > 0.0))
    throw ConfigError("solver.dt must be positive for the fixed policy");
  if (!(cfl_adv > 0.0) || !(cfl_visc > 0.0))
    throw ConfigError("CFL factors must be positive");
  if (!(t_end >= 0.0))
    throw ConfigError("solver.t_end must be >= 0");
  if (!(growth_factor > 1.0))
    throw ConfigError("solver.growth_factor must exceed 1");
  pressure.validate();
}

nlohmann::json
ValidationReport::to_json() const
{
  return {{"passed", passed()},
          {"divergence", divergence},
          {"u3_trace", u3_trace},
          {"du1_dz_trace", du1_dz_trace},
          {"du2_dz_trace", du2_dz_trace},
          {"drho_dz_trace", drho_dz_trace},
          {"rho_min", rho_min},
          {"rho_max", rho_max},
          {"velocity_parities", velocity_parities},
          {"bounds_ok", bounds_ok},
          {"failures", failures}};
}

ValidationReport
validate_initial_data(const ScalarField& rho0, const VectorField& u0,
                      const DensityBounds& bounds)
{
  ValidationReport r;
  r.divergence = l2_norm(divergence(u0));
  r.u3_trace = max_wall_trace(u0[2]);
  r.du1_dz_trace = max_wall_trace(derivative(u0[0], Axis::Z));
  r.du2_dz_trace = max_wall_trace(derivative(u0[1], Axis::Z));
  r.drho_dz_trace = max_wall_trace(derivative(rho0, Axis::Z));
  const auto range = physical_range(rho0);
  r.rho_min = range.lo;
  r.rho_max = range.hi;
  r.velocity_parities = u0.has_velocity_parities();

  constexpr double slack = 1e-12;
  r.bounds_ok = bounds.rho_min > 0.0 && bounds.rho_min <= bounds.rho_max &&
                range.lo > 0.0 && range.lo >= bounds.rho_min - slack &&
                range.hi <= bounds.rho_max + slack;

  auto check = [&](double v, const char* what) {
    if (!(v <= initial_data_tol))
      r.failures.push_back(std::string(what) + " = " + std::to_string(v));
  };
  check(r.divergence, "divergence of u0");
  check(r.u3_trace, "wall trace of u3");
  check(r.du1_dz_trace, "wall trace of du1/dz");
  check(r.du2_dz_trace, "wall trace of du2/dz");
  check(r.drho_dz_trace, "wall trace of drho0/dz (compatibility)");
  if (!r.velocity_parities)
    r.failures.push_back("velocity parities are not (even, even, odd)");
  if (rho0.parity() != Parity::Even)
    r.failures.push_back("density is not Even");
  if (!r.bounds_ok)
    r.failures.push_back("density outside [" + std::to_string(bounds.rho_min) +
                         ", " + std::to_string(bounds.rho_max) + "]");
  return r;
}

ScalarField
density_rhs(const FlowState& state, bool dealias)
{
  auto r = advect(state.u, state.rho, dealias);
  r *= -1.0;
  return r;
}

ScalarField
advect_density(const FlowState& state, double dt, bool dealias)
{
  FlowState s = state;
  const ScalarField& rho0 = state.rho;

  s.rho = rho0;
  s.rho.axpy(dt, density_rhs(state, dealias));
  ScalarField r1 = s.rho;

  s.rho = r1;
  s.rho.axpy(dt, density_rhs(s, dealias));
  ScalarField r2 = 0.75 * rho0;
  r2.axpy(0.25, s.rho);

  s.rho = r2;
  s.rho.axpy(dt, density_rhs(s, dealias));
  ScalarField out = (1.0 / 3.0) * rho0;
  out.axpy(2.0 / 3.0, s.rho);
  return out;
}

MomentumRhs
momentum_rhs(const FlowState& state, const SolverParams& params,
             const Forcing* forcing, const ScalarField* pressure_guess)
{
  const bool dealias = params.dealias;
  VectorField accel = advect(state.u, state.u, dealias);
  accel *= -1.0;

  const bool need_rho = params.nu > 0.0 || (forcing && forcing->momentum);
  std::vector<double> rho;
  if (need_rho)
    rho = transform_inverse(state.rho);

  if (params.nu > 0.0)
    for (int i = 0; i < 3; ++i)
    {
      auto visc = divide_by_density(laplacian(state.u[i]), rho, params.nu);
      if (dealias)
        truncate(visc);
      accel[i] += visc;
    }
  if (forcing && forcing->momentum)
  {
    const auto f = forcing->momentum(state.t);
    for (int i = 0; i < 3; ++i)
      accel[i] += divide_by_density(f[i], rho, 1.0);
  }

  auto pressure = variable_density_pressure(state.rho, accel, params.pressure,
                                            pressure_guess);
  auto dudt = subtract_pressure_gradient(accel, state.rho, pressure.p);
  if (dealias)
    truncate(dudt);
  return {std::move(dudt), std::move(pressure)};
}

nlohmann::json
StepInfo::to_json() const
{
  return {{"t", t},
          {"dt", dt},
          {"energy", energy},
          {"rho_min", rho_min},
          {"rho_max", rho_max},
          {"divergence", divergence},
          {"pressure_iterations", pressure_iterations},
          {"pressure_residual", pressure_residual},
          {"bc_trace", bc_trace}};
}

double
max_stable_dt(const FlowState& state, const SolverParams& params)
{
  const double h = state.grid().min_spacing();
  double dt = std::numeric_limits<double>::infinity();
  const double umax = max_speed(state.u);
  if (umax > 0.0)
    dt = params.cfl_adv * h / umax;
  if (params.nu > 0.0)
  {
    dt = std::min(dt, params.cfl_visc * h * h / params.nu);
    dt = std::min(dt, rk3_real_stability /
                        (params.nu * max_k2(state.grid(), params.dealias)));
  }
  return dt;
}

Integrator::Integrator(SolverParams params, Forcing forcing)
  : params_(std::move(params)), forcing_(std::move(forcing))
{
  params_.validate();
}

double
Integrator::choose_dt(const FlowState& state, double max_dt) const
{
  double dt;
  if (params_.dt_policy == DtPolicy::Fixed)
    dt = params_.dt;
  else
  {
    dt = max_stable_dt(state, params_);
    if (params_.dt > 0.0)
      dt = std::min(dt, params_.dt);
  }
  return std::min(dt, max_dt);
}

MomentumRhs
Integrator::rhs(const FlowState& s, double t)
{
  FlowState at = s;
  at.t = t;
  const ScalarField* guess = last_pressure_ ? &*last_pressure_ : nullptr;
  auto r = momentum_rhs(at, params_, &forcing_, guess);
  last_pressure_ = r.pressure.p;
  return r;
}

ScalarField
Integrator::rho_rhs(const FlowState& s, double t) const
{
  auto r = density_rhs(s, params_.dealias);
  if (forcing_.density)
    r += forcing_.density(t);
  return r;
}

FlowState
Integrator::step(const FlowState& state, double dt, StepInfo* info)
{
  if (!(dt > 0.0))
    throw CflViolation("step: dt must be positive");
  const double limit = max_stable_dt(state, params_);
  if (dt > limit * (1.0 + 1e-12))
    throw CflViolation("step: dt = " + std::to_string(dt) +
                       " exceeds the stability limit " + std::to_string(limit));

  const double t = state.t;
  int iterations = 0;
  double residual = 0.0;
  auto tally = [&](const MomentumRhs& r) {
    iterations += r.pressure.iterations;
    residual = std::max(residual, r.pressure.residual);
  };

  // Shu-Osher form; stage times t, t + dt, t + dt/2.
  auto m0 = rhs(state, t);
  tally(m0);
  FlowState s1 = state;
  s1.rho.axpy(dt, rho_rhs(state, t));
  s1.u.axpy(dt, m0.dudt);
  s1.u = leray_project(s1.u);

  auto m1 = rhs(s1, t + dt);
  tally(m1);
  FlowState s2 = s1;
  s2.rho.axpy(dt, rho_rhs(s1, t + dt));
  s2.u.axpy(dt, m1.dudt);
  s2.rho *= 0.25;
  s2.rho.axpy(0.75, state.rho);
  s2.u *= 0.25;
  s2.u.axpy(0.75, state.u);
  s2.u = leray_project(s2.u);

  auto m2 = rhs(s2, t + 0.5 * dt);
  tally(m2);
  FlowState out = s2;
  out.rho.axpy(dt, rho_rhs(s2, t + 0.5 * dt));
  out.u.axpy(dt, m2.dudt);
  out.rho *= 2.0 / 3.0;
  out.rho.axpy(1.0 / 3.0, state.rho);
  out.u *= 2.0 / 3.0;
  out.u.axpy(1.0 / 3.0, state.u);
  out.u = leray_project(out.u);
  out.t = t + dt;

  const auto range = physical_range(out.rho);
  if (!(range.lo > 0.0))
    throw PositivityLoss("density positivity lost at t = " +
                         std::to_string(out.t) +
                         ": min rho = " + std::to_string(range.lo));
  const double div = l2_norm(divergence(out.u));
  if (!(div <= divergence_tol))
    throw InvariantViolation("divergence " + std::to_string(div) +
                             " after step at t = " + std::to_string(out.t));
  const auto w = curl(out.u);
  const double bc = std::max(
    {max_wall_trace(out.u[2]), max_wall_trace(derivative(out.u[0], Axis::Z)),
     max_wall_trace(derivative(out.u[1], Axis::Z)),
     max_wall_trace(derivative(out.rho, Axis::Z)), max_wall_trace(w[0]),
     max_wall_trace(w[1])});
  if (!(bc <= trace_tol))
    throw InvariantViolation("wall trace " + std::to_string(bc) +
                             " after step at t = " + std::to_string(out.t));

  if (info)
  {
    info->t = out.t;
    info->dt = dt;
    info->energy = kinetic_energy(out);
    info->rho_min = range.lo;
    info->rho_max = range.hi;
    info->divergence = div;
    info->pressure_iterations = iterations;
    info->pressure_residual = residual;
    info->bc_trace = bc;
  }
  return out;
}

FlowState
step(const FlowState& state, const SolverParams& params)
{
  Integrator integ(params);
  return integ.step(state, integ.choose_dt(state, params.t_end - state.t));
}

RunResult
run(const FlowState& state0, const SolverParams& params,
    std::vector<double> snapshot_times, Forcing forcing,
    const StepObserver& observer)
{
  params.validate();
  const auto bounds = DensityBounds::from_density(state0.rho);
  const auto report = validate_initial_data(state0.rho, state0.u, bounds);
  if (!report.passed())
    throw ValidationError("initial data rejected: " + report.failures.front());

  const double t0 = state0.t;
  const double t_end = params.t_end;
  if (t_end < t0)
    throw ConfigError("t_end precedes the initial time");
  std::sort(snapshot_times.begin(), snapshot_times.end());
  snapshot_times.erase(
    std::unique(snapshot_times.begin(), snapshot_times.end()),
    snapshot_times.end());
  for (double ts : snapshot_times)
    if (ts < t0 || ts > t_end)
      throw ConfigError("snapshot time " + std::to_string(ts) +
                        " outside [t0, t_end]");

  RunResult res;
  res.h3_initial = h3_monitor(state0);
  res.h3_max = res.h3_initial;

  Integrator integ(params, std::move(forcing));
  FlowState state = state0;
  auto next = snapshot_times.begin();
  while (next != snapshot_times.end() && *next == t0)
  {
    res.snapshots.push_back(state);
    ++next;
  }

  try
  {
    while (state.t < t_end)
    {
      const double target = next != snapshot_times.end() ? *next : t_end;
      const double remaining = target - state.t;
      double dt = integ.choose_dt(state, std::numeric_limits<double>::max());
      bool land = false;
      if (dt >= remaining * (1.0 - 1e-9))
      {
        dt = remaining;
        land = true;
      }
      StepInfo info;
      state = integ.step(state, dt, &info);
      if (land)
        state.t = target;
      info.t = state.t;
      ++res.steps;
      res.log.push_back(info);

      const double h3 = h3_monitor(state);
      res.h3_max = std::max(res.h3_max, h3);
      if (h3 > params.growth_factor * res.h3_initial)
        res.growth_exceeded = true;
      res.density_range_excess =
        std::max({res.density_range_excess, info.rho_max - bounds.rho_max,
                  bounds.rho_min - info.rho_min});
      if (observer)
        observer(state, info);

      while (next != snapshot_times.end() && *next <= state.t)
      {
        res.snapshots.push_back(state);
        ++next;
      }
    }
  }
  catch (const PositivityLoss& e)
  {
    res.ok = false;
    res.failure = e.what();
    res.failure_kind = "positivity";
  }
  catch (const CflViolation& e)
  {
    res.ok = false;
    res.failure = e.what();
    res.failure_kind = "cfl";
  }
  catch (const PressureNotConverged& e)
  {
    res.ok = false;
    res.failure = e.what();
    res.failure_kind = "pressure";
  }
  catch (const SolverAbort& e)
  {
    res.ok = false;
    res.failure = e.what();
    res.failure_kind = "invariant";
  }
  return res;
}

} // namespace slipflow
