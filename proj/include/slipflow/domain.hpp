#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace slipflow {

using Complex = std::complex<double>;

/// Periodic-in-(x, y) channel [0,Lx] x [0,Ly] x [0,1] with flat walls at
/// z = 0 and z = 1.
struct DomainSpec
{
  double Lx = 1.0;
  double Ly = 1.0;
  double Lz = 1.0;
  int Nx = 16;
  int Ny = 16;
  int Nz = 16;
  int dim = 3;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  double volume() const { return Lx * (dim == 3 ? Ly : 1.0) * Lz; }
  std::size_t points() const
  {
    return static_cast<std::size_t>(Nx) * Ny * Nz;
  }

  bool operator==(const DomainSpec&) const = default;
};

/// Wall-normal expansion: Even = cos(m pi z), m = 0..Nz-1 (Neumann traces);
/// Odd = sin(m pi z), m = 1..Nz (Dirichlet traces).
enum class Parity
{
  Even,
  Odd
};

inline Parity
flip(Parity p)
{
  return p == Parity::Even ? Parity::Odd : Parity::Even;
}

inline Parity
product_parity(Parity a, Parity b)
{
  return a == b ? Parity::Even : Parity::Odd;
}

std::string to_string(Parity p);
Parity parity_from_string(const std::string& s);

/// Transform plans, wavenumbers and dealiasing masks for one DomainSpec.
///
/// Physical values live on x_i = i Lx/Nx, y_j = j Ly/Ny and the midpoint
/// nodes z_k = (k + 1/2)/Nz, stored x fastest, then y, then z. Spectral
/// coefficients are stored in half-complex form: index (iz, ky, kx) with
/// kx = 0..Nx/2, kx fastest. For Even fields iz is the cosine order m; for
/// Odd fields iz = m - 1.
///
/// A Grid is immutable after construction. Transforms execute FFTW plans
/// through the new-array interface and are safe to call concurrently.
class Grid
{
public:
  explicit Grid(const DomainSpec& spec);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  /// Shared instance per DomainSpec; plans are created once.
  static std::shared_ptr<const Grid> make(const DomainSpec& spec);

  const DomainSpec& spec() const { return spec_; }
  int nx() const { return spec_.Nx; }
  int ny() const { return spec_.Ny; }
  int nz() const { return spec_.Nz; }
  int nxh() const { return nxh_; }
  std::size_t physical_size() const { return spec_.points(); }
  std::size_t spectral_size() const
  {
    return static_cast<std::size_t>(nxh_) * spec_.Ny * spec_.Nz;
  }
  std::size_t plane_size() const
  {
    return static_cast<std::size_t>(nxh_) * spec_.Ny;
  }

  std::size_t index(int iz, int iy, int ix) const
  {
    return (static_cast<std::size_t>(iz) * spec_.Ny + iy) * nxh_ + ix;
  }

  /// Derivative wavenumbers; the Nyquist entries are zero.
  double kx(int ix) const { return kx_[ix]; }
  double ky(int iy) const { return ky_[iy]; }
  /// Signed integer mode numbers (Nyquist reported as +N/2).
  int kx_int(int ix) const { return ix; }
  int ky_int(int iy) const { return iy <= spec_.Ny / 2 ? iy : iy - spec_.Ny; }
  bool is_nyquist_x(int ix) const { return spec_.Nx > 1 && ix == spec_.Nx / 2; }
  bool is_nyquist_y(int iy) const
  {
    return spec_.Ny > 1 && iy == spec_.Ny / 2;
  }

  /// Wall-normal order m for storage slot iz.
  int mode_z(Parity p, int iz) const { return p == Parity::Even ? iz : iz + 1; }
  double kz(Parity p, int iz) const;
  /// |k|^2 of a mode, Nyquist entries included at their true magnitude.
  double k2(Parity p, int iz, int iy, int ix) const;

  /// Multiplicity of a half-complex column in a full-spectrum sum.
  double hermitian_weight(int ix) const
  {
    return (ix == 0 || (spec_.Nx % 2 == 0 && ix == spec_.Nx / 2)) ? 1.0 : 2.0;
  }

  /// True when the mode survives the 2/3-rule truncation.
  bool dealias_keep(Parity p, int iz, int iy, int ix) const;

  /// Collocation coordinates.
  double x(int i) const { return spec_.Lx * i / spec_.Nx; }
  double y(int j) const
  {
    return spec_.dim == 3 ? spec_.Ly * j / spec_.Ny : 0.0;
  }
  double z(int k) const { return (k + 0.5) / spec_.Nz; }

  /// Smallest collocation spacing.
  double min_spacing() const;

  /// Physical (real, physical_size) -> spectral (spectral_size).
  void forward(const double* phys, Complex* spec, Parity p) const;
  /// Spectral -> physical. The input is left untouched.
  void inverse(const Complex* spec, double* phys, Parity p) const;
  /// Single-plane inverse: half-complex (ny, nxh) -> real (ny, nx).
  void inverse_plane(const Complex* plane, double* values) const;

private:
  struct Plans;

  DomainSpec spec_;
  int nxh_;
  std::vector<double> kx_;
  std::vector<double> ky_;
  std::unique_ptr<Plans> plans_;
};

} // namespace slipflow
