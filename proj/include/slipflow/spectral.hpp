#pragma once

#include "slipflow/field.hpp"

#include <functional>
#include <span>
#include <vector>

namespace slipflow {

enum class Axis
{
  X = 0,
  Y = 1,
  Z = 2
};

enum class Wall
{
  Bottom, // z = 0
  Top     // z = 1
};

/// Collocation values (x fastest, then y, then z) -> coefficients.
ScalarField transform_forward(std::shared_ptr<const Grid> grid,
                              std::span<const double> values, Parity parity);
std::vector<double> transform_inverse(const ScalarField& f);

/// Samples fn on the collocation grid and transforms with the given parity.
ScalarField sample(std::shared_ptr<const Grid> grid,
                   const std::function<double(double, double, double)>& fn,
                   Parity parity);

/// Spectral differentiation. The z-derivative flips parity; the Nyquist
/// modes of x and y, and the sin(Nz pi z) mode, differentiate to zero.
ScalarField derivative(const ScalarField& f, Axis axis);

/// Pointwise product; the result parity follows the product rule of the
/// basis. With dealias set, the 2/3 rule is applied to the result.
ScalarField multiply(const ScalarField& f, const ScalarField& g, bool dealias);

/// Zeroes every mode outside the 2/3-rule band.
void truncate(ScalarField& f);
void truncate(VectorField& v);

ScalarField laplacian(const ScalarField& f);

/// Solves lap g = f with the zero-mean gauge. Even input must have a
/// (0,0,0) coefficient below `tol` (Neumann solvability), otherwise
/// SolvabilityError.
ScalarField inverse_laplacian(const ScalarField& f, double tol = 1e-12);

ScalarField divergence(const VectorField& v);
VectorField gradient(const ScalarField& f);
VectorField curl(const VectorField& v);

/// (u . grad) f for a velocity-parity u; the result keeps f's parity.
ScalarField advect(const VectorField& u, const ScalarField& f, bool dealias);
/// Componentwise (u . grad) v.
VectorField advect(const VectorField& u, const VectorField& v, bool dealias);

/// L2(Omega) norm from the coefficients (Parseval).
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);

/// Volume average of the physical field.
double mean(const ScalarField& f);

/// Values of f on the wall plane, laid out (y, x) with x fastest.
std::vector<double> wall_trace(const ScalarField& f, Wall wall);
/// max |f| over both walls.
double max_wall_trace(const ScalarField& f);

/// Discrete L2 norm over the collocation grid, sqrt(mean(f^2) * volume).
double grid_l2(std::span<const double> values, const DomainSpec& domain);
double max_abs(std::span<const double> values);

} // namespace slipflow
