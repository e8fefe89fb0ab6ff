#pragma once

#include "slipflow/spectral.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

namespace testing {

using namespace slipflow;

inline constexpr double pi = std::numbers::pi;

inline std::shared_ptr<const Grid>
grid3(int nx, int ny, int nz, double lx = 1.0, double ly = 1.0)
{
  return Grid::make({lx, ly, 1.0, nx, ny, nz, 3});
}

inline std::shared_ptr<const Grid>
grid2(int nx, int nz, double lx = 1.0)
{
  return Grid::make({lx, 1.0, 1.0, nx, 1, nz, 2});
}

inline double
uniform(std::mt19937_64& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

/// Random coefficients on every mode except the Nyquist columns and the
/// sin(Nz pi z) slot, made Hermitian by a round trip.
inline ScalarField
random_field(const std::shared_ptr<const Grid>& g, Parity p, std::uint64_t seed,
             bool band_limit = false)
{
  std::mt19937_64 rng(seed);
  ScalarField f(g, p);
  for (int iz = 0; iz < g->nz(); ++iz)
    for (int iy = 0; iy < g->ny(); ++iy)
      for (int ix = 0; ix < g->nxh(); ++ix)
      {
        const Complex c(uniform(rng), uniform(rng));
        if (g->is_nyquist_x(ix) || g->is_nyquist_y(iy))
          continue;
        if (p == Parity::Odd && iz == g->nz() - 1)
          continue;
        if (band_limit && !g->dealias_keep(p, iz, iy, ix))
          continue;
        f.at(iz, iy, ix) = c;
      }
  return transform_forward(g, transform_inverse(f), p);
}

inline VectorField
random_vector(const std::shared_ptr<const Grid>& g, std::uint64_t seed,
              bool band_limit = false)
{
  VectorField v(random_field(g, Parity::Even, seed, band_limit),
                random_field(g, Parity::Even, seed + 1, band_limit),
                random_field(g, Parity::Odd, seed + 2, band_limit));
  if (g->spec().dim == 2)
    v[1].set_zero();
  return v;
}

/// Zeroes every mode with |kx|, |ky| or the wall-normal order above kmax.
inline ScalarField
lowpass(ScalarField f, int kmax)
{
  const Grid& g = f.grid();
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nxh(); ++ix)
        if (g.kx_int(ix) > kmax || std::abs(g.ky_int(iy)) > kmax ||
            g.mode_z(f.parity(), iz) > kmax)
          f.at(iz, iy, ix) = 0.0;
  return f;
}

inline VectorField
lowpass(VectorField v, int kmax)
{
  for (int i = 0; i < 3; ++i)
    v[i] = lowpass(v[i], kmax);
  return v;
}

inline double
max_coeff_diff(const ScalarField& a, const ScalarField& b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

inline double
max_coeff_diff(const VectorField& a, const VectorField& b)
{
  return std::max({max_coeff_diff(a[0], b[0]), max_coeff_diff(a[1], b[1]),
                   max_coeff_diff(a[2], b[2])});
}

inline double
max_coeff(const ScalarField& a)
{
  return max_coeff_diff(a, ScalarField(a.grid_ptr(), a.parity()));
}

inline double
max_coeff(const VectorField& a)
{
  return std::max({max_coeff(a[0]), max_coeff(a[1]), max_coeff(a[2])});
}

/// max |f - fn| over the collocation grid.
template <class Fn>
double
max_point_error(const ScalarField& f, Fn fn)
{
  const auto& g = f.grid();
  const auto v = transform_inverse(f);
  double m = 0.0;
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        m = std::max(m, std::abs(v[(static_cast<std::size_t>(k) * g.ny() + j) * g.nx() + i] -
                                 fn(g.x(i), g.y(j), g.z(k))));
  return m;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path
scratch_dir(const std::string& name)
{
  auto p = std::filesystem::temp_directory_path() / ("slipflow_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

} // namespace testing
