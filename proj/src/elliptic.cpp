#include "slipflow/elliptic.hpp"

#include "slipflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace slipflow {

namespace {

constexpr double zero_rhs_abs_tol = 1e-14;
constexpr double neumann_tol = 1e-10;
constexpr double divergence_tol = 1e-8;

/// Applies div(inv_rho * grad p) with inv_rho given on the collocation grid.
ScalarField
apply_operator(const ScalarField& p, const std::vector<double>& inv_rho,
               int dim)
{
  ScalarField out(p.grid_ptr(), Parity::Even);
  for (int a = 0; a < 3; ++a)
  {
    if (a == 1 && dim == 2)
      continue;
    const Axis axis = static_cast<Axis>(a);
    auto flux = transform_inverse(derivative(p, axis));
    for (std::size_t i = 0; i < flux.size(); ++i)
      flux[i] *= inv_rho[i];
    const Parity fp = axis == Axis::Z ? Parity::Odd : Parity::Even;
    out += derivative(transform_forward(p.grid_ptr(), flux, fp), axis);
  }
  return out;
}

/// Inverse of div(grad .) as composed from the derivative operators, whose
/// Nyquist wavenumbers are zero. Matches apply_operator for constant rho.
ScalarField
inverse_discrete_laplacian(const ScalarField& r)
{
  const Grid& g = r.grid();
  ScalarField out(r.grid_ptr(), Parity::Even);
  for (int iz = 0; iz < g.nz(); ++iz)
  {
    const double kz = g.kz(Parity::Even, iz);
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nxh(); ++ix)
      {
        const double k2 = g.kx(ix) * g.kx(ix) + g.ky(iy) * g.ky(iy) + kz * kz;
        out.at(iz, iy, ix) = k2 > 0.0 ? -r.at(iz, iy, ix) / k2 : Complex{};
      }
  }
  return out;
}

} // namespace

void
PressureSolveParams::validate() const
{
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw ConfigError("pressure.rel_tol must lie in (0, 1)");
  if (max_iter < 1)
    throw ConfigError("pressure.max_iter must be >= 1");
  if (precond_coeff && !(*precond_coeff > 0.0))
    throw ConfigError("pressure.precond_coeff must be positive");
}

PressureResult
solve_variable_poisson(const ScalarField& rho, const ScalarField& rhs,
                       const PressureSolveParams& params,
                       const ScalarField* initial_guess)
{
  params.validate();
  if (rho.parity() != Parity::Even || rhs.parity() != Parity::Even)
    throw ValidationError("pressure problem needs Even density and RHS");

  const auto rho_phys = transform_inverse(rho);
  std::vector<double> inv_rho(rho_phys.size());
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = 0.0;
  for (std::size_t i = 0; i < rho_phys.size(); ++i)
  {
    if (!(rho_phys[i] > 0.0))
      throw PositivityLoss("pressure_solve: non-positive density " +
                        std::to_string(rho_phys[i]));
    inv_rho[i] = 1.0 / rho_phys[i];
    bmin = std::min(bmin, inv_rho[i]);
    bmax = std::max(bmax, inv_rho[i]);
  }
  const double beta0 = params.precond_coeff.value_or(0.5 * (bmin + bmax));

  ScalarField f = rhs;
  PressureResult result{ScalarField(rho.grid_ptr(), Parity::Even)};
  result.rhs_mean = f.at(0, 0, 0).real();
  f.at(0, 0, 0) = 0.0;

  const double fnorm = l2_norm(f);
  const bool zero_rhs = fnorm < zero_rhs_abs_tol;
  const double tol = zero_rhs ? zero_rhs_abs_tol : params.rel_tol;
  const double scale = zero_rhs ? 1.0 : fnorm;
  const int dim = rho.domain().dim;

  ScalarField& p = result.p;
  if (initial_guess)
  {
    p = *initial_guess;
    p.at(0, 0, 0) = 0.0;
  }

  for (int it = 0;; ++it)
  {
    ScalarField r = f;
    if (it > 0 || initial_guess)
      r -= apply_operator(p, inv_rho, dim);
    r.at(0, 0, 0) = 0.0;
    result.residual = l2_norm(r) / scale;
    result.iterations = it;
    if (result.residual <= tol)
      break;
    if (it == params.max_iter)
      throw PressureNotConverged(
        "pressure_solve: no convergence in " + std::to_string(it) +
          " iterations, residual " + std::to_string(result.residual),
        result.residual);
    p.axpy(1.0 / beta0, inverse_discrete_laplacian(r));
  }
  p.at(0, 0, 0) = 0.0;
  return result;
}

PressureResult
pressure_solve(const ScalarField& rho, const VectorField& u,
               const PressureSolveParams& params)
{
  if (!u.has_velocity_parities())
    throw ValidationError("pressure_solve: velocity has wrong parities");
  const double div = l2_norm(divergence(u));
  if (div > divergence_tol)
    throw ValidationError("pressure_solve: velocity divergence " +
                          std::to_string(div) + " exceeds tolerance");

  const auto conv = advect(u, u, false);
  // rho (u . grad u) . n on the walls: the Neumann datum.
  const double trace = max_wall_trace(multiply(rho, conv[2], false));
  if (trace > neumann_tol)
    throw SolverAbort("pressure_solve: wall-normal forcing trace " +
                      std::to_string(trace) + " is not zero");

  auto rhs = divergence(conv);
  rhs *= -1.0;
  auto result = solve_variable_poisson(rho, rhs, params);
  result.neumann_trace = trace;
  return result;
}

PressureResult
variable_density_pressure(const ScalarField& rho, const VectorField& accel,
                          const PressureSolveParams& params,
                          const ScalarField* initial_guess)
{
  const double trace = max_wall_trace(accel[2]);
  if (trace > neumann_tol)
    throw SolverAbort("wall-normal acceleration trace " +
                      std::to_string(trace) + " is not zero");
  auto result =
    solve_variable_poisson(rho, divergence(accel), params, initial_guess);
  result.neumann_trace = trace;
  return result;
}

VectorField
subtract_pressure_gradient(const VectorField& accel, const ScalarField& rho,
                           const ScalarField& p)
{
  const auto rho_phys = transform_inverse(rho);
  VectorField out = accel;
  const int dim = rho.domain().dim;
  for (int a = 0; a < 3; ++a)
  {
    if (a == 1 && dim == 2)
      continue;
    const Axis axis = static_cast<Axis>(a);
    auto g = transform_inverse(derivative(p, axis));
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] /= rho_phys[i];
    out[a] -= transform_forward(p.grid_ptr(), g, out[a].parity());
  }
  return out;
}

VectorField
leray_project(const VectorField& u)
{
  if (!u.has_velocity_parities())
    throw ValidationError("leray_project: velocity has wrong parities");
  const Grid& g = u.grid();
  const int nz = g.nz(), ny = g.ny(), nxh = g.nxh();
  const double pi = std::numbers::pi;
  VectorField out = u;

  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nxh; ++ix)
    {
      const bool nyquist = g.is_nyquist_x(ix) || g.is_nyquist_y(iy);
      // The top sine slot has no cosine partner.
      out[2].at(nz - 1, iy, ix) = 0.0;
      for (int m = 0; m < nz; ++m)
      {
        Complex& a = out[0].at(m, iy, ix);
        Complex& b = out[1].at(m, iy, ix);
        if (nyquist)
        {
          a = b = 0.0;
          if (m > 0)
            out[2].at(m - 1, iy, ix) = 0.0;
          continue;
        }
        const double kx = g.kx(ix), ky = g.ky(iy), kz = m * pi;
        const double q2 = kx * kx + ky * ky + kz * kz;
        if (q2 == 0.0)
          continue;
        // div = i kx a + i ky b + m pi c; projection u - conj(q) div / |q|^2.
        const Complex I(0.0, 1.0);
        Complex div = I * kx * a + I * ky * b;
        Complex* c = m > 0 ? &out[2].at(m - 1, iy, ix) : nullptr;
        if (c)
          div += kz * *c;
        const Complex s = div / q2;
        a += I * kx * s;
        b += I * ky * s;
        if (c)
          *c -= kz * s;
      }
    }
  return out;
}

} // namespace slipflow
