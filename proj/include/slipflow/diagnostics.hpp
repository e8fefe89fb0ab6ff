#pragma once

#include "slipflow/state.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <vector>

namespace slipflow {

struct NormSpec
{
  enum class Kind
  {
    Full,
    Seminorm
  };

  int order = 0;
  Kind kind = Kind::Full;
};

/// Spectral Sobolev norm:
///   ||f||_s^2 = sum (1 + |k|^2)^s |c|^2 w,   (seminorm: |k|^{2s})
/// with w the basis weights, so that ||f||_0 is the L2(Omega) norm.
/// Orders 0..3 are supported; anything else throws ConfigError.
double sobolev_norm(const ScalarField& f, NormSpec spec);
double sobolev_norm(const VectorField& v, NormSpec spec);

/// Curl of a velocity field; components have parities (Odd, Odd, Even).
VectorField vorticity(const VectorField& u);

/// Maximum absolute wall traces, measured from the actual coefficients of
/// each field rather than inferred from its parity tag.
struct BoundaryReport
{
  double u3 = 0.0;
  double du1_dz = 0.0;
  double du2_dz = 0.0;
  double drho_dz = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  /// Tangential components of rho (u . grad w - w . grad u); NaN when the
  /// velocity does not carry the (Even, Even, Odd) parities.
  double vortex_stretch1 = 0.0;
  double vortex_stretch2 = 0.0;

  /// max of the six basis-exact traces.
  double structural_max() const;
  nlohmann::json to_json() const;
};

BoundaryReport boundary_residuals(const FlowState& state);

/// 1/2 int rho |u|^2, by collocation quadrature.
double kinetic_energy(const FlowState& state);
/// nu int |grad u|^2.
double dissipation_rate(const VectorField& u, double nu);

struct EnergyBudget
{
  double t = 0.0;
  double kinetic = 0.0;
  double dissipation_rate = 0.0;
  /// |E(t2) - E(t1) + int_{t1}^{t2} dissipation dt| over the window ending
  /// at t (trapezoid rule); zero for the first entry.
  double imbalance = 0.0;
};

/// One entry per snapshot; needs at least two snapshots.
std::vector<EnergyBudget> energy_budget(const std::vector<FlowState>& traj,
                                        double nu);

/// CSV with columns t,kinetic,dissipation,imbalance,bc_max,vortex_stretch_max.
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<FlowState>& traj, double nu);

} // namespace slipflow
