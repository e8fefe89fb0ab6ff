#include "slipflow/spectral.hpp"

#include "slipflow/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace slipflow {

ScalarField
transform_forward(std::shared_ptr<const Grid> grid,
                  std::span<const double> values, Parity parity)
{
  if (values.size() != grid->physical_size())
    throw ValidationError("collocation array has " +
                          std::to_string(values.size()) + " values, expected " +
                          std::to_string(grid->physical_size()));
  ScalarField f(grid, parity);
  grid->forward(values.data(), f.coeffs().data(), parity);
  return f;
}

std::vector<double>
transform_inverse(const ScalarField& f)
{
  std::vector<double> out(f.grid().physical_size());
  f.grid().inverse(f.coeffs().data(), out.data(), f.parity());
  return out;
}

ScalarField
sample(std::shared_ptr<const Grid> grid,
       const std::function<double(double, double, double)>& fn, Parity parity)
{
  const Grid& g = *grid;
  std::vector<double> v(g.physical_size());
  std::size_t n = 0;
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        v[n++] = fn(g.x(i), g.y(j), g.z(k));
  return transform_forward(std::move(grid), v, parity);
}

ScalarField
derivative(const ScalarField& f, Axis axis)
{
  const Grid& g = f.grid();
  const int nz = g.nz(), ny = g.ny(), nxh = g.nxh();

  if (axis == Axis::X || axis == Axis::Y)
  {
    ScalarField out(f.grid_ptr(), f.parity());
    for (int iz = 0; iz < nz; ++iz)
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nxh; ++ix)
        {
          const double k = axis == Axis::X ? g.kx(ix) : g.ky(iy);
          out.at(iz, iy, ix) = Complex(0.0, k) * f.at(iz, iy, ix);
        }
    return out;
  }

  const double pi = std::numbers::pi;
  ScalarField out(f.grid_ptr(), flip(f.parity()));
  if (f.parity() == Parity::Even)
  {
    // a_m cos(m pi z) -> -m pi a_m sin(m pi z); slot m-1 in the Odd layout.
    for (int m = 1; m < nz; ++m)
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nxh; ++ix)
          out.at(m - 1, iy, ix) = -m * pi * f.at(m, iy, ix);
  }
  else
  {
    // b_m sin(m pi z) -> m pi b_m cos(m pi z); m = Nz has no Even slot.
    for (int m = 1; m < nz; ++m)
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nxh; ++ix)
          out.at(m, iy, ix) = m * pi * f.at(m - 1, iy, ix);
  }
  return out;
}

ScalarField
multiply(const ScalarField& f, const ScalarField& g, bool dealias)
{
  if (!(f.domain() == g.domain()))
    throw ValidationError("multiply: fields live on different domains");
  auto a = transform_inverse(f);
  const auto b = transform_inverse(g);
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] *= b[i];
  auto out = transform_forward(f.grid_ptr(), a,
                               product_parity(f.parity(), g.parity()));
  if (dealias)
    truncate(out);
  return out;
}

void
truncate(ScalarField& f)
{
  const Grid& g = f.grid();
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nxh(); ++ix)
        if (!g.dealias_keep(f.parity(), iz, iy, ix))
          f.at(iz, iy, ix) = 0.0;
}

void
truncate(VectorField& v)
{
  for (int i = 0; i < 3; ++i)
    truncate(v[i]);
}

ScalarField
laplacian(const ScalarField& f)
{
  const Grid& g = f.grid();
  ScalarField out(f.grid_ptr(), f.parity());
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nxh(); ++ix)
        out.at(iz, iy, ix) = -g.k2(f.parity(), iz, iy, ix) * f.at(iz, iy, ix);
  return out;
}

ScalarField
inverse_laplacian(const ScalarField& f, double tol)
{
  const Grid& g = f.grid();
  if (f.parity() == Parity::Even && std::abs(f.at(0, 0, 0)) > tol)
    throw SolvabilityError(
      "inverse_laplacian: Even input has non-zero mean " +
      std::to_string(std::abs(f.at(0, 0, 0))));
  ScalarField out(f.grid_ptr(), f.parity());
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nxh(); ++ix)
      {
        const double k2 = g.k2(f.parity(), iz, iy, ix);
        out.at(iz, iy, ix) = k2 > 0.0 ? -f.at(iz, iy, ix) / k2 : Complex{};
      }
  return out;
}

ScalarField
divergence(const VectorField& v)
{
  auto d = derivative(v[0], Axis::X);
  d += derivative(v[1], Axis::Y);
  d += derivative(v[2], Axis::Z);
  return d;
}

VectorField
gradient(const ScalarField& f)
{
  return VectorField::unchecked(derivative(f, Axis::X), derivative(f, Axis::Y),
                                derivative(f, Axis::Z));
}

VectorField
curl(const VectorField& v)
{
  auto w1 = derivative(v[2], Axis::Y);
  w1 -= derivative(v[1], Axis::Z);
  auto w2 = derivative(v[0], Axis::Z);
  w2 -= derivative(v[2], Axis::X);
  auto w3 = derivative(v[1], Axis::X);
  w3 -= derivative(v[0], Axis::Y);
  return VectorField::unchecked(std::move(w1), std::move(w2), std::move(w3));
}

namespace {

struct PhysicalVelocity
{
  std::array<std::vector<double>, 3> c;
};

PhysicalVelocity
to_physical(const VectorField& u)
{
  return {{transform_inverse(u[0]), transform_inverse(u[1]),
           transform_inverse(u[2])}};
}

ScalarField
advect_physical(const PhysicalVelocity& up, const ScalarField& f, bool dealias,
                int dim)
{
  const auto fx = transform_inverse(derivative(f, Axis::X));
  const auto fz = transform_inverse(derivative(f, Axis::Z));
  std::vector<double> out(fx.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = up.c[0][i] * fx[i] + up.c[2][i] * fz[i];
  if (dim == 3)
  {
    const auto fy = transform_inverse(derivative(f, Axis::Y));
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += up.c[1][i] * fy[i];
  }
  auto r = transform_forward(f.grid_ptr(), out, f.parity());
  if (dealias)
    truncate(r);
  return r;
}

} // namespace

ScalarField
advect(const VectorField& u, const ScalarField& f, bool dealias)
{
  return advect_physical(to_physical(u), f, dealias, f.domain().dim);
}

VectorField
advect(const VectorField& u, const VectorField& v, bool dealias)
{
  const auto up = to_physical(u);
  const int dim = v.grid().spec().dim;
  return VectorField::unchecked(advect_physical(up, v[0], dealias, dim),
                                advect_physical(up, v[1], dealias, dim),
                                advect_physical(up, v[2], dealias, dim));
}

double
l2_norm(const ScalarField& f)
{
  const Grid& g = f.grid();
  double s = 0.0;
  for (int iz = 0; iz < g.nz(); ++iz)
  {
    const double wz =
      (f.parity() == Parity::Even && iz == 0) ? 1.0 : 0.5;
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nxh(); ++ix)
        s += wz * g.hermitian_weight(ix) * std::norm(f.at(iz, iy, ix));
  }
  return std::sqrt(s * f.domain().volume());
}

double
l2_norm(const VectorField& v)
{
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
  {
    const double n = l2_norm(v[i]);
    s += n * n;
  }
  return std::sqrt(s);
}

double
mean(const ScalarField& f)
{
  const Grid& g = f.grid();
  if (f.parity() == Parity::Even)
    return f.at(0, 0, 0).real();
  // Odd: integral of sin(m pi z) over [0,1] is (1 - (-1)^m) / (m pi).
  double s = 0.0;
  for (int iz = 0; iz < g.nz(); ++iz)
  {
    const int m = g.mode_z(Parity::Odd, iz);
    if (m % 2 == 1)
      s += f.at(iz, 0, 0).real() * 2.0 / (m * std::numbers::pi);
  }
  return s;
}

std::vector<double>
wall_trace(const ScalarField& f, Wall wall)
{
  const Grid& g = f.grid();
  const std::size_t plane = g.plane_size();
  std::vector<Complex> tr(plane);
  // Basis values at z = 0, 1 taken exactly: sin(m pi z) vanishes, cos(m pi z)
  // is 1 or (-1)^m.
  for (int iz = 0; iz < g.nz(); ++iz)
  {
    const int m = g.mode_z(f.parity(), iz);
    double basis = 0.0;
    if (f.parity() == Parity::Even)
      basis = wall == Wall::Bottom || m % 2 == 0 ? 1.0 : -1.0;
    const Complex* c = f.coeffs().data() + iz * plane;
    for (std::size_t i = 0; i < plane; ++i)
      tr[i] += basis * c[i];
  }
  std::vector<double> out(static_cast<std::size_t>(g.nx()) * g.ny());
  g.inverse_plane(tr.data(), out.data());
  return out;
}

double
max_wall_trace(const ScalarField& f)
{
  return std::max(max_abs(wall_trace(f, Wall::Bottom)),
                  max_abs(wall_trace(f, Wall::Top)));
}

double
grid_l2(std::span<const double> values, const DomainSpec& domain)
{
  double s = 0.0;
  for (double v : values)
    s += v * v;
  return std::sqrt(s / static_cast<double>(values.size()) * domain.volume());
}

double
max_abs(std::span<const double> values)
{
  double m = 0.0;
  for (double v : values)
    m = std::max(m, std::abs(v));
  return m;
}

} // namespace slipflow
