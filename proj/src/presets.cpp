#include "slipflow/presets.hpp"

#include "slipflow/elliptic.hpp"
#include "slipflow/error.hpp"
#include "slipflow/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace slipflow {

namespace {

constexpr double pi = std::numbers::pi;

/// Uniform in [-1, 1) from raw 64-bit output; independent of the standard
/// library's distribution implementations.
double
uniform_pm1(std::mt19937_64& rng)
{
  return (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
}

ScalarField
random_field(const std::shared_ptr<const Grid>& grid, Parity parity,
             double decay, int kmax, std::mt19937_64& rng)
{
  const Grid& g = *grid;
  ScalarField f(grid, parity);
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nxh(); ++ix)
      {
        // Draw unconditionally so the stream does not depend on the cutoff.
        const double re = uniform_pm1(rng);
        const double im = uniform_pm1(rng);
        const int kx = g.kx_int(ix), ky = g.ky_int(iy);
        const int m = g.mode_z(parity, iz);
        const int k2 = kx * kx + ky * ky + m * m;
        if (k2 == 0 || kx > kmax || std::abs(ky) > kmax || m > kmax ||
            g.is_nyquist_x(ix) || g.is_nyquist_y(iy) ||
            !g.dealias_keep(parity, iz, iy, ix))
          continue;
        f.at(iz, iy, ix) =
          Complex(re, im) * std::pow(1.0 + k2, -0.5 * decay);
      }
  // Round trip through physical space enforces Hermitian symmetry.
  return transform_forward(grid, transform_inverse(f), parity);
}

std::map<std::string, double>
resolve(const PresetSpec& preset)
{
  const auto& defaults = preset_defaults(preset.name);
  auto out = defaults;
  for (const auto& [k, v] : preset.params)
  {
    if (!defaults.count(k))
      throw ConfigError("preset '" + preset.name + "' has no parameter '" + k +
                        "'");
    out[k] = v;
  }
  return out;
}

} // namespace

const std::map<std::string, double>&
preset_defaults(const std::string& name)
{
  static const std::map<std::string, std::map<std::string, double>> table{
    {"shear_decay", {{"A", 1.0}, {"rho0", 1.0}}},
    {"stratified_vortex",
     {{"rho_mean", 1.0}, {"rho_amp", 0.2}, {"U", 0.3}, {"V", 0.15}}},
    {"random_smooth",
     {{"decay", 3.0},
      {"kmax", 4.0},
      {"u_max", 0.3},
      {"rho_mean", 1.0},
      {"rho_amp", 0.1}}},
  };
  const auto it = table.find(name);
  if (it == table.end())
    throw ConfigError("unknown initial-condition preset '" + name + "'");
  return it->second;
}

FlowState
make_initial_state(const std::shared_ptr<const Grid>& grid,
                   const PresetSpec& preset)
{
  const auto p = resolve(preset);
  const auto& d = grid->spec();
  FlowState s{0.0, ScalarField(grid, Parity::Even), VectorField(grid)};

  if (preset.name == "shear_decay")
  {
    const double A = p.at("A"), rho0 = p.at("rho0");
    if (!(rho0 > 0.0))
      throw ConfigError("shear_decay: rho0 must be positive");
    s.rho.at(0, 0, 0) = rho0;
    s.u[0].at(1, 0, 0) = A;
  }
  else if (preset.name == "stratified_vortex")
  {
    const double rm = p.at("rho_mean"), ra = p.at("rho_amp");
    const double U = p.at("U"), V = p.at("V");
    if (!(rm > 0.0) || !(std::abs(ra) < rm))
      throw ConfigError("stratified_vortex: need |rho_amp| < rho_mean");
    const double kx = 2.0 * pi / d.Lx, ky = 2.0 * pi / d.Ly;
    const bool three_d = d.dim == 3;
    s.rho = sample(
      grid,
      [&](double x, double, double z) {
        return rm + ra * std::cos(kx * x) * std::cos(pi * z);
      },
      Parity::Even);
    s.u[0] = sample(
      grid,
      [&](double x, double, double z) {
        return U * std::sin(kx * x) * std::cos(pi * z);
      },
      Parity::Even);
    s.u[1] = sample(
      grid,
      [&](double, double y, double z) {
        return three_d ? V * std::sin(ky * y) * std::cos(pi * z) : 0.0;
      },
      Parity::Even);
    s.u[2] = sample(
      grid,
      [&](double x, double y, double z) {
        double w = -U * (kx / pi) * std::cos(kx * x) * std::sin(pi * z);
        if (three_d)
          w -= V * (ky / pi) * std::cos(ky * y) * std::sin(pi * z);
        return w;
      },
      Parity::Odd);
  }
  else // random_smooth
  {
    const double decay = p.at("decay");
    const int kmax = static_cast<int>(p.at("kmax"));
    const double umax = p.at("u_max"), rm = p.at("rho_mean"),
                 ra = p.at("rho_amp");
    if (!(rm > 0.0) || !(std::abs(ra) < rm) || kmax < 1)
      throw ConfigError("random_smooth: need |rho_amp| < rho_mean, kmax >= 1");
    std::mt19937_64 rng(preset.seed);
    VectorField u(random_field(grid, Parity::Even, decay, kmax, rng),
                  random_field(grid, Parity::Even, decay, kmax, rng),
                  random_field(grid, Parity::Odd, decay, kmax, rng));
    if (d.dim == 2)
      u[1].set_zero();
    // Mean flow carries no information here; keep the field zero-mean.
    u[0].at(0, 0, 0) = 0.0;
    u[1].at(0, 0, 0) = 0.0;
    u = leray_project(u);
    double peak = 0.0;
    for (int i = 0; i < 3; ++i)
      peak = std::max(peak, max_abs(transform_inverse(u[i])));
    if (peak > 0.0)
      u *= umax / peak;
    s.u = std::move(u);

    auto r = random_field(grid, Parity::Even, decay, kmax, rng);
    r.at(0, 0, 0) = 0.0;
    const double rpeak = max_abs(transform_inverse(r));
    if (rpeak > 0.0)
      r *= ra / rpeak;
    r.at(0, 0, 0) = rm;
    s.rho = std::move(r);
  }
  return s;
}

} // namespace slipflow
