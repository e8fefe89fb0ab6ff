#pragma once

#include "slipflow/field.hpp"

namespace slipflow {

/// Time plus density and velocity: the evolving solution.
struct FlowState
{
  double t = 0.0;
  ScalarField rho;
  VectorField u;

  const std::shared_ptr<const Grid>& grid_ptr() const { return rho.grid_ptr(); }
  const Grid& grid() const { return rho.grid(); }
};

/// Positive density range recorded from the initial datum.
struct DensityBounds
{
  double rho_min = 1.0;
  double rho_max = 1.0;

  void validate() const;
  static DensityBounds from_density(const ScalarField& rho);
};

} // namespace slipflow
