#pragma once

#include "slipflow/state.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace slipflow {

/// Named initial condition plus numeric parameters.
///
///  shear_decay        rho = rho0, u = (A cos(pi z), 0, 0).
///                     params: A (1), rho0 (1)
///  stratified_vortex  rho = rho_mean + rho_amp cos(2 pi x/Lx) cos(pi z);
///                     u from a wall-vanishing streamfunction
///                     psi = (U/pi) sin(2 pi x/Lx) sin(pi z), plus a second
///                     cell in (y, z) of amplitude V in 3D.
///                     params: rho_mean (1), rho_amp (0.2), U (0.3), V (0.15)
///  random_smooth      random coefficients with |k|^-decay amplitude decay,
///                     limited to |k| <= kmax, projected divergence-free.
///                     params: decay (3), kmax (4), u_max (0.3),
///                     rho_mean (1), rho_amp (0.1)
struct PresetSpec
{
  std::string name = "shear_decay";
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  bool operator==(const PresetSpec&) const = default;
};

/// Parameter names each preset accepts, with defaults.
const std::map<std::string, double>& preset_defaults(const std::string& name);

/// Builds the initial state at t = 0. Throws ConfigError for an unknown
/// preset or parameter, or a parameter set that breaks positivity.
FlowState make_initial_state(const std::shared_ptr<const Grid>& grid,
                             const PresetSpec& preset);

} // namespace slipflow
