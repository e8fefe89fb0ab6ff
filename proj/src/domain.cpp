#include "slipflow/domain.hpp"

#include "slipflow/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace slipflow {

namespace {

// The FFTW planner is not re-entrant; execution is.
std::mutex&
planner_mutex()
{
  static std::mutex m;
  return m;
}

constexpr unsigned plan_flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

} // namespace

void
DomainSpec::validate() const
{
  if (dim != 2 && dim != 3)
    throw ConfigError("domain.dim must be 2 or 3");
  if (!(Lx > 0) || !(Ly > 0))
    throw ConfigError("domain lengths Lx, Ly must be positive");
  if (Lz != 1.0)
    throw ConfigError("domain.Lz is fixed to 1");
  if (Nx < 4 || Nx % 2 != 0)
    throw ConfigError("domain.Nx must be even and >= 4");
  if (dim == 3 && (Ny < 4 || Ny % 2 != 0))
    throw ConfigError("domain.Ny must be even and >= 4 in 3D");
  if (dim == 2 && Ny != 1)
    throw ConfigError("domain.Ny must be 1 when dim = 2");
  if (Nz < 4)
    throw ConfigError("domain.Nz must be >= 4");
}

std::string
to_string(Parity p)
{
  return p == Parity::Even ? "even" : "odd";
}

Parity
parity_from_string(const std::string& s)
{
  if (s == "even")
    return Parity::Even;
  if (s == "odd")
    return Parity::Odd;
  throw ConfigError("unknown parity '" + s + "'");
}

struct Grid::Plans
{
  fftw_plan z_fwd[2] = {nullptr, nullptr};
  fftw_plan z_inv[2] = {nullptr, nullptr};
  fftw_plan xy_fwd = nullptr;
  fftw_plan xy_inv = nullptr;
  fftw_plan plane_inv = nullptr;

  ~Plans()
  {
    std::lock_guard lock(planner_mutex());
    for (auto* p : {z_fwd[0], z_fwd[1], z_inv[0], z_inv[1], xy_fwd, xy_inv,
                    plane_inv})
      if (p)
        fftw_destroy_plan(p);
  }
};

Grid::Grid(const DomainSpec& spec)
  : spec_(spec), nxh_(spec.Nx / 2 + 1), plans_(std::make_unique<Plans>())
{
  spec_.validate();
  const double two_pi = 2.0 * std::numbers::pi;

  kx_.resize(nxh_);
  for (int i = 0; i < nxh_; ++i)
    kx_[i] = is_nyquist_x(i) ? 0.0 : two_pi * i / spec_.Lx;
  ky_.resize(spec_.Ny);
  for (int j = 0; j < spec_.Ny; ++j)
    ky_[j] = is_nyquist_y(j) ? 0.0 : two_pi * ky_int(j) / spec_.Ly;

  const int nx = spec_.Nx, ny = spec_.Ny, nz = spec_.Nz;
  const int nplane = nx * ny;
  const int cplane = ny * nxh_;

  std::lock_guard lock(planner_mutex());
  double* rbuf = fftw_alloc_real(physical_size());
  fftw_complex* cbuf = fftw_alloc_complex(spectral_size());

  const fftw_r2r_kind fwd_kind[2] = {FFTW_REDFT10, FFTW_RODFT10};
  const fftw_r2r_kind inv_kind[2] = {FFTW_REDFT01, FFTW_RODFT01};
  for (int p = 0; p < 2; ++p)
  {
    int n[] = {nz};
    plans_->z_fwd[p] = fftw_plan_many_r2r(1, n, nplane, rbuf, nullptr, nplane,
                                          1, rbuf, nullptr, nplane, 1,
                                          &fwd_kind[p], plan_flags);
    plans_->z_inv[p] = fftw_plan_many_r2r(1, n, nplane, rbuf, nullptr, nplane,
                                          1, rbuf, nullptr, nplane, 1,
                                          &inv_kind[p], plan_flags);
  }

  // Ny == 1 degenerates to a batch of 1D transforms along x.
  const int rank = ny == 1 ? 1 : 2;
  int dims2[] = {ny, nx};
  int dims1[] = {nx};
  int* dims = rank == 2 ? dims2 : dims1;
  plans_->xy_fwd = fftw_plan_many_dft_r2c(rank, dims, nz, rbuf, nullptr, 1,
                                          nplane, cbuf, nullptr, 1, cplane,
                                          plan_flags);
  plans_->xy_inv = fftw_plan_many_dft_c2r(rank, dims, nz, cbuf, nullptr, 1,
                                          cplane, rbuf, nullptr, 1, nplane,
                                          plan_flags);
  plans_->plane_inv = fftw_plan_many_dft_c2r(rank, dims, 1, cbuf, nullptr, 1,
                                             cplane, rbuf, nullptr, 1, nplane,
                                             plan_flags);
  fftw_free(rbuf);
  fftw_free(cbuf);

  for (auto* p : {plans_->z_fwd[0], plans_->z_fwd[1], plans_->z_inv[0],
                  plans_->z_inv[1], plans_->xy_fwd, plans_->xy_inv,
                  plans_->plane_inv})
    if (!p)
      throw Error("FFTW plan creation failed");
}

Grid::~Grid() = default;

std::shared_ptr<const Grid>
Grid::make(const DomainSpec& spec)
{
  using Key = std::tuple<double, double, double, int, int, int, int>;
  static std::mutex m;
  static std::map<Key, std::weak_ptr<const Grid>> cache;

  const Key key{spec.Lx, spec.Ly, spec.Lz, spec.Nx, spec.Ny, spec.Nz,
                spec.dim};
  std::lock_guard lock(m);
  if (auto it = cache.find(key); it != cache.end())
    if (auto g = it->second.lock())
      return g;
  auto g = std::make_shared<const Grid>(spec);
  cache[key] = g;
  return g;
}

double
Grid::kz(Parity p, int iz) const
{
  return std::numbers::pi * mode_z(p, iz);
}

double
Grid::k2(Parity p, int iz, int iy, int ix) const
{
  const double two_pi = 2.0 * std::numbers::pi;
  const double kxv = two_pi * kx_int(ix) / spec_.Lx;
  const double kyv = spec_.Ny > 1 ? two_pi * ky_int(iy) / spec_.Ly : 0.0;
  const double kzv = kz(p, iz);
  return kxv * kxv + kyv * kyv + kzv * kzv;
}

bool
Grid::dealias_keep(Parity p, int iz, int iy, int ix) const
{
  // Keep |k| < N/3 laterally and m < 2 Nz/3 wall-normally.
  if (3 * ix >= spec_.Nx)
    return false;
  if (spec_.Ny > 1 && 3 * std::abs(ky_int(iy)) >= spec_.Ny)
    return false;
  return 3 * mode_z(p, iz) < 2 * spec_.Nz;
}

double
Grid::min_spacing() const
{
  double h = std::min(spec_.Lx / spec_.Nx, spec_.Lz / spec_.Nz);
  if (spec_.dim == 3)
    h = std::min(h, spec_.Ly / spec_.Ny);
  return h;
}

void
Grid::forward(const double* phys, Complex* spec, Parity p) const
{
  const int pi = p == Parity::Even ? 0 : 1;
  std::vector<double> work(phys, phys + physical_size());
  fftw_execute_r2r(plans_->z_fwd[pi], work.data(), work.data());
  fftw_execute_dft_r2c(plans_->xy_fwd, work.data(),
                       reinterpret_cast<fftw_complex*>(spec));

  const int nz = spec_.Nz;
  const double lateral = 1.0 / (static_cast<double>(spec_.Nx) * spec_.Ny);
  const std::size_t plane = plane_size();
  for (int iz = 0; iz < nz; ++iz)
  {
    const bool half = p == Parity::Even ? iz == 0 : iz == nz - 1;
    const double s = lateral / (half ? 2.0 * nz : 1.0 * nz);
    Complex* c = spec + iz * plane;
    for (std::size_t i = 0; i < plane; ++i)
      c[i] *= s;
  }
}

void
Grid::inverse(const Complex* spec, double* phys, Parity p) const
{
  const int pi = p == Parity::Even ? 0 : 1;
  const int nz = spec_.Nz;
  const std::size_t plane = plane_size();
  std::vector<Complex> work(spec, spec + spectral_size());
  for (int iz = 0; iz < nz; ++iz)
  {
    const bool full = p == Parity::Even ? iz == 0 : iz == nz - 1;
    if (full)
      continue;
    Complex* c = work.data() + iz * plane;
    for (std::size_t i = 0; i < plane; ++i)
      c[i] *= 0.5;
  }
  fftw_execute_dft_c2r(plans_->xy_inv,
                       reinterpret_cast<fftw_complex*>(work.data()), phys);
  fftw_execute_r2r(plans_->z_inv[pi], phys, phys);
}

void
Grid::inverse_plane(const Complex* plane, double* values) const
{
  std::vector<Complex> work(plane, plane + plane_size());
  fftw_execute_dft_c2r(plans_->plane_inv,
                       reinterpret_cast<fftw_complex*>(work.data()), values);
}

} // namespace slipflow
