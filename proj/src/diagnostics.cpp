#include "slipflow/diagnostics.hpp"

#include "slipflow/error.hpp"
#include "slipflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace slipflow {

void
DensityBounds::validate() const
{
  if (!(rho_min > 0.0) || !(rho_min <= rho_max))
    throw ValidationError("density bounds need 0 < rho_min <= rho_max");
}

DensityBounds
DensityBounds::from_density(const ScalarField& rho)
{
  const auto v = transform_inverse(rho);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

double
sobolev_norm(const ScalarField& f, NormSpec spec)
{
  if (spec.order < 0 || spec.order > 3)
    throw ConfigError("sobolev_norm: unsupported order " +
                      std::to_string(spec.order));
  const Grid& g = f.grid();
  const bool semi = spec.kind == NormSpec::Kind::Seminorm;
  double s = 0.0;
  for (int iz = 0; iz < g.nz(); ++iz)
  {
    const double wz = (f.parity() == Parity::Even && iz == 0) ? 1.0 : 0.5;
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nxh(); ++ix)
      {
        const double k2 = g.k2(f.parity(), iz, iy, ix);
        const double mult = std::pow(semi ? k2 : 1.0 + k2, spec.order);
        s += mult * wz * g.hermitian_weight(ix) * std::norm(f.at(iz, iy, ix));
      }
  }
  return std::sqrt(s * f.domain().volume());
}

double
sobolev_norm(const VectorField& v, NormSpec spec)
{
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
  {
    const double n = sobolev_norm(v[i], spec);
    s += n * n;
  }
  return std::sqrt(s);
}

VectorField
vorticity(const VectorField& u)
{
  return curl(u);
}

double
BoundaryReport::structural_max() const
{
  return std::max({u3, du1_dz, du2_dz, drho_dz, omega1, omega2});
}

nlohmann::json
BoundaryReport::to_json() const
{
  return {{"u3", u3},
          {"du1_dz", du1_dz},
          {"du2_dz", du2_dz},
          {"drho_dz", drho_dz},
          {"omega1", omega1},
          {"omega2", omega2},
          {"vortex_stretch1", vortex_stretch1},
          {"vortex_stretch2", vortex_stretch2}};
}

BoundaryReport
boundary_residuals(const FlowState& state)
{
  const auto& u = state.u;
  BoundaryReport r;
  r.u3 = max_wall_trace(u[2]);
  r.du1_dz = max_wall_trace(derivative(u[0], Axis::Z));
  r.du2_dz = max_wall_trace(derivative(u[1], Axis::Z));
  r.drho_dz = max_wall_trace(derivative(state.rho, Axis::Z));

  // Tangential vorticity traces term by term, so that states with broken
  // parities still get a report.
  auto difference_trace = [](const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (Wall wall : {Wall::Bottom, Wall::Top})
    {
      const auto ta = wall_trace(a, wall);
      const auto tb = wall_trace(b, wall);
      for (std::size_t i = 0; i < ta.size(); ++i)
        m = std::max(m, std::abs(ta[i] - tb[i]));
    }
    return m;
  };
  r.omega1 = difference_trace(derivative(u[2], Axis::Y), derivative(u[1], Axis::Z));
  r.omega2 = difference_trace(derivative(u[0], Axis::Z), derivative(u[2], Axis::X));
  if (!u.has_velocity_parities())
  {
    r.vortex_stretch1 = r.vortex_stretch2 =
      std::numeric_limits<double>::quiet_NaN();
    return r;
  }

  const auto w = vorticity(u);

  // rho (u . grad w - w . grad u), tangential components.
  const auto uw = advect(u, w, false);
  const auto rho = transform_inverse(state.rho);
  std::array<std::vector<double>, 3> wp;
  for (int j = 0; j < 3; ++j)
    wp[j] = transform_inverse(w[j]);
  double* out[2] = {&r.vortex_stretch1, &r.vortex_stretch2};
  for (int i = 0; i < 2; ++i)
  {
    auto s = transform_inverse(uw[i]);
    for (int j = 0; j < 3; ++j)
    {
      const auto du = transform_inverse(derivative(u[i], static_cast<Axis>(j)));
      for (std::size_t n = 0; n < s.size(); ++n)
        s[n] -= wp[j][n] * du[n];
    }
    for (std::size_t n = 0; n < s.size(); ++n)
      s[n] *= rho[n];
    *out[i] = max_wall_trace(
      transform_forward(state.grid_ptr(), s, uw[i].parity()));
  }
  return r;
}

double
kinetic_energy(const FlowState& state)
{
  const auto rho = transform_inverse(state.rho);
  std::vector<double> e(rho.size(), 0.0);
  for (int i = 0; i < 3; ++i)
  {
    const auto ui = transform_inverse(state.u[i]);
    for (std::size_t n = 0; n < e.size(); ++n)
      e[n] += ui[n] * ui[n];
  }
  double s = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n)
    s += rho[n] * e[n];
  return 0.5 * s / static_cast<double>(e.size()) * state.grid().spec().volume();
}

double
dissipation_rate(const VectorField& u, double nu)
{
  const double h1 = sobolev_norm(u, {1, NormSpec::Kind::Seminorm});
  return nu * h1 * h1;
}

std::vector<EnergyBudget>
energy_budget(const std::vector<FlowState>& traj, double nu)
{
  if (traj.size() < 2)
    throw ValidationError("energy_budget needs at least two snapshots");
  std::vector<EnergyBudget> out;
  out.reserve(traj.size());
  for (const auto& s : traj)
    out.push_back({s.t, kinetic_energy(s), dissipation_rate(s.u, nu), 0.0});
  for (std::size_t i = 1; i < out.size(); ++i)
  {
    const auto& a = out[i - 1];
    auto& b = out[i];
    const double dissipated =
      0.5 * (a.dissipation_rate + b.dissipation_rate) * (b.t - a.t);
    b.imbalance = std::abs(b.kinetic - a.kinetic + dissipated);
  }
  return out;
}

void
write_trajectory_csv(const std::filesystem::path& path,
                     const std::vector<FlowState>& traj, double nu)
{
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot open " + path.string());
  os << "t,kinetic,dissipation,imbalance,bc_max,vortex_stretch_max\n";
  std::vector<EnergyBudget> budget;
  if (traj.size() >= 2)
    budget = energy_budget(traj, nu);
  char line[256];
  for (std::size_t i = 0; i < traj.size(); ++i)
  {
    const auto b = budget.empty()
                     ? EnergyBudget{traj[i].t, kinetic_energy(traj[i]),
                                    dissipation_rate(traj[i].u, nu), 0.0}
                     : budget[i];
    const auto r = boundary_residuals(traj[i]);
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  b.t, b.kinetic, b.dissipation_rate, b.imbalance,
                  r.structural_max(),
                  std::max(r.vortex_stretch1, r.vortex_stretch2));
    os << line;
  }
  if (!os)
    throw IoError("write failed: " + path.string());
}

} // namespace slipflow
