#include "slipflow/field.hpp"

#include "slipflow/error.hpp"

#include <algorithm>

namespace slipflow {

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, Parity parity)
  : grid_(std::move(grid)), parity_(parity), coeffs_(grid_->spectral_size())
{
}

void
ScalarField::set_zero()
{
  std::fill(coeffs_.begin(), coeffs_.end(), Complex{});
}

void
ScalarField::check_compatible(const ScalarField& o) const
{
  if (!(grid_->spec() == o.grid_->spec()))
    throw ValidationError("fields live on different domains");
  if (parity_ != o.parity_)
    throw ValidationError("parity mismatch: " + to_string(parity_) + " vs " +
                          to_string(o.parity_));
}

ScalarField&
ScalarField::operator+=(const ScalarField& o)
{
  return axpy(1.0, o);
}

ScalarField&
ScalarField::operator-=(const ScalarField& o)
{
  return axpy(-1.0, o);
}

ScalarField&
ScalarField::operator*=(double s)
{
  for (auto& c : coeffs_)
    c *= s;
  return *this;
}

ScalarField&
ScalarField::axpy(double a, const ScalarField& o)
{
  check_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] += a * o.coeffs_[i];
  return *this;
}

ScalarField
operator+(ScalarField a, const ScalarField& b)
{
  return a += b;
}

ScalarField
operator-(ScalarField a, const ScalarField& b)
{
  return a -= b;
}

ScalarField
operator*(double s, ScalarField a)
{
  return a *= s;
}

VectorField::VectorField(std::shared_ptr<const Grid> grid)
  : c_{ScalarField(grid, Parity::Even), ScalarField(grid, Parity::Even),
       ScalarField(grid, Parity::Odd)}
{
}

VectorField::VectorField(ScalarField u1, ScalarField u2, ScalarField u3)
  : c_{std::move(u1), std::move(u2), std::move(u3)}
{
  if (!has_velocity_parities())
    throw ValidationError(
      "velocity components must have parities (even, even, odd)");
  for (int i = 1; i < 3; ++i)
    if (!(c_[i].domain() == c_[0].domain()))
      throw ValidationError("velocity components live on different domains");
}

VectorField::VectorField(Raw, ScalarField u1, ScalarField u2, ScalarField u3)
  : c_{std::move(u1), std::move(u2), std::move(u3)}
{
}

VectorField
VectorField::zeros(std::shared_ptr<const Grid> grid,
                   std::array<Parity, 3> parities)
{
  return VectorField(Raw{}, ScalarField(grid, parities[0]),
                     ScalarField(grid, parities[1]),
                     ScalarField(grid, parities[2]));
}

VectorField
VectorField::unchecked(ScalarField u1, ScalarField u2, ScalarField u3)
{
  return VectorField(Raw{}, std::move(u1), std::move(u2), std::move(u3));
}

VectorField&
VectorField::operator+=(const VectorField& o)
{
  return axpy(1.0, o);
}

VectorField&
VectorField::operator-=(const VectorField& o)
{
  return axpy(-1.0, o);
}

VectorField&
VectorField::operator*=(double s)
{
  for (auto& c : c_)
    c *= s;
  return *this;
}

VectorField&
VectorField::axpy(double a, const VectorField& o)
{
  for (int i = 0; i < 3; ++i)
    c_[i].axpy(a, o.c_[i]);
  return *this;
}

VectorField
operator+(VectorField a, const VectorField& b)
{
  return a += b;
}

VectorField
operator-(VectorField a, const VectorField& b)
{
  return a -= b;
}

VectorField
operator*(double s, VectorField a)
{
  return a *= s;
}

} // namespace slipflow
