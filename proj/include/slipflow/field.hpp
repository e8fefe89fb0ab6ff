#pragma once

#include "slipflow/domain.hpp"

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace slipflow {

/// One scalar unknown in spectral form, tagged with its wall-normal parity.
///
/// f(x, y, z) = sum_{kx, ky, m} c(kx, ky, m) exp(i (kx x + ky y)) phi_m(z)
/// with phi_m = cos(m pi z) (Even) or sin(m pi z) (Odd); the stored
/// half-complex coefficients imply Hermitian symmetry, so f is real.
class ScalarField
{
public:
  ScalarField(std::shared_ptr<const Grid> grid, Parity parity);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const DomainSpec& domain() const { return grid_->spec(); }
  Parity parity() const { return parity_; }

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  Complex& at(int iz, int iy, int ix) { return coeffs_[grid_->index(iz, iy, ix)]; }
  const Complex& at(int iz, int iy, int ix) const
  {
    return coeffs_[grid_->index(iz, iy, ix)];
  }

  void set_zero();

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// this += a * o
  ScalarField& axpy(double a, const ScalarField& o);

  /// Throws ValidationError unless o lives on the same domain with the same
  /// parity.
  void check_compatible(const ScalarField& o) const;

private:
  std::shared_ptr<const Grid> grid_;
  Parity parity_;
  std::vector<Complex> coeffs_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Velocity-like field with the slip-wall parities (Even, Even, Odd).
///
/// The checked constructor rejects any other parity combination. Fields with
/// other layouts (vorticity, or deliberately corrupted states in negative
/// controls) go through `unchecked`.
class VectorField
{
public:
  static constexpr std::array<Parity, 3> velocity_parities{
    Parity::Even, Parity::Even, Parity::Odd};
  static constexpr std::array<Parity, 3> pseudo_parities{
    Parity::Odd, Parity::Odd, Parity::Even};

  explicit VectorField(std::shared_ptr<const Grid> grid);
  VectorField(ScalarField u1, ScalarField u2, ScalarField u3);

  /// Builds a zero vector field with arbitrary component parities.
  static VectorField zeros(std::shared_ptr<const Grid> grid,
                           std::array<Parity, 3> parities);
  static VectorField unchecked(ScalarField u1, ScalarField u2, ScalarField u3);

  ScalarField& operator[](int i) { return c_[i]; }
  const ScalarField& operator[](int i) const { return c_[i]; }

  const Grid& grid() const { return c_[0].grid(); }
  const std::shared_ptr<const Grid>& grid_ptr() const { return c_[0].grid_ptr(); }
  std::array<Parity, 3> parities() const
  {
    return {c_[0].parity(), c_[1].parity(), c_[2].parity()};
  }
  bool has_velocity_parities() const { return parities() == velocity_parities; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField& axpy(double a, const VectorField& o);

private:
  struct Raw
  {
  };
  VectorField(Raw, ScalarField u1, ScalarField u2, ScalarField u3);

  std::array<ScalarField, 3> c_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

} // namespace slipflow
