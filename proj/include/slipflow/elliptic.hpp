#pragma once

#include "slipflow/error.hpp"
#include "slipflow/field.hpp"

#include <optional>

namespace slipflow {

struct PressureSolveParams
{
  double rel_tol = 1e-10;
  int max_iter = 200;
  /// Preconditioner scale beta0; when unset, the midpoint of the range of
  /// 1/rho on the grid.
  std::optional<double> precond_coeff;

  void validate() const;
  bool operator==(const PressureSolveParams&) const = default;
};

struct PressureResult
{
  ScalarField p;
  int iterations = 0;
  /// Achieved residual: relative to ||rhs||, or absolute when the RHS
  /// vanishes.
  double residual = 0.0;
  /// Mean removed from the RHS before solving.
  double rhs_mean = 0.0;
  /// max |trace of the wall-normal forcing|; zero on flat walls.
  double neumann_trace = 0.0;
};

/// Raised when the Richardson iteration exhausts its budget.
class PressureNotConverged : public SolverAbort
{
public:
  PressureNotConverged(const std::string& what, double residual)
    : SolverAbort(what), residual(residual)
  {
  }
  double residual;
};

/// Solves div(rho^-1 grad p) = rhs with homogeneous Neumann data (Even p)
/// by preconditioned Richardson iteration
///   p <- p + beta0^-1 lap^-1 (rhs - div(rho^-1 grad p)).
PressureResult solve_variable_poisson(const ScalarField& rho,
                                      const ScalarField& rhs,
                                      const PressureSolveParams& params,
                                      const ScalarField* initial_guess = nullptr);

/// Pressure of the inviscid momentum balance:
///   div(rho^-1 grad p) = -div(u . grad u).
PressureResult pressure_solve(const ScalarField& rho, const VectorField& u,
                              const PressureSolveParams& params);

/// Variable-density projection of an acceleration: returns the pressure p
/// with div(rho^-1 grad p) = div(accel), so accel - rho^-1 grad p is
/// divergence-free.
PressureResult variable_density_pressure(const ScalarField& rho,
                                         const VectorField& accel,
                                         const PressureSolveParams& params,
                                         const ScalarField* initial_guess = nullptr);

/// accel - rho^-1 grad p, computed pointwise.
VectorField subtract_pressure_gradient(const VectorField& accel,
                                       const ScalarField& rho,
                                       const ScalarField& p);

/// Constant-density (Leray) projection onto divergence-free fields with
/// u3 = 0 on the walls. Nyquist modes and the sin(Nz pi z) mode of u3 are
/// removed.
VectorField leray_project(const VectorField& u);

} // namespace slipflow
