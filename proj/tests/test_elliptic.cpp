#include "helpers.hpp"

#include "slipflow/elliptic.hpp"
#include "slipflow/error.hpp"

#include <doctest.h>

using namespace testing;

namespace {

ScalarField
constant(const std::shared_ptr<const Grid>& g, double c)
{
  ScalarField f(g, Parity::Even);
  f.at(0, 0, 0) = c;
  return f;
}

/// div(rho^-1 grad p) evaluated pointwise in physical space.
ScalarField
variable_operator(const ScalarField& rho, const ScalarField& p)
{
  const auto r = transform_inverse(rho);
  const auto gp = gradient(p);
  VectorField flux = VectorField::zeros(p.grid_ptr(), VectorField::velocity_parities);
  for (int a = 0; a < 3; ++a)
  {
    auto v = transform_inverse(gp[a]);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] /= r[i];
    flux[a] = transform_forward(p.grid_ptr(), v, gp[a].parity());
  }
  return divergence(flux);
}

VectorField
random_solenoidal(const std::shared_ptr<const Grid>& g, std::uint64_t seed, int kmax)
{
  return leray_project(lowpass(random_vector(g, seed), kmax));
}

} // namespace

TEST_CASE("uniform density shear flow has zero pressure")
{
  const auto g = grid3(8, 8, 16);
  VectorField u(g);
  u[0].at(1, 0, 0) = 2.0;
  const auto res = pressure_solve(constant(g, 1.0), u, {});
  CHECK(max_coeff(res.p) == 0.0);
  CHECK(res.residual <= 1e-14);
}

TEST_CASE("uniform density pressure matches the direct Poisson solve")
{
  const auto g = grid3(16, 16, 16, 2.0, 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed)
  {
    const auto u = random_solenoidal(g, 10 * seed, 3);
    const auto res = pressure_solve(constant(g, 1.0), u, {});
    auto rhs = divergence(advect(u, u, false));
    rhs *= -1.0;
    const auto direct = inverse_laplacian(rhs);
    CHECK(max_coeff_diff(res.p, direct) <= 1e-10);
    CHECK(res.iterations == 1);
  }
}

TEST_CASE("manufactured pressure with layered density is recovered")
{
  const double lx = 2.0;
  const auto g = grid3(16, 8, 16, lx, 1.0);
  const auto rho = sample(g, [](double, double, double z) { return 1.0 + 0.3 * std::cos(pi * z); },
                          Parity::Even);
  const auto pstar = sample(g,
                            [&](double x, double, double z) {
                              return std::cos(2 * pi * x / lx) * std::cos(pi * z);
                            },
                            Parity::Even);
  const auto f = variable_operator(rho, pstar);
  PressureSolveParams params;
  params.rel_tol = 1e-12;
  const auto res = solve_variable_poisson(rho, f, params);
  CHECK(res.residual <= 1e-12);
  CHECK(l2_norm(res.p - pstar) / l2_norm(pstar) <= 1e-10);
  CHECK(std::abs(res.rhs_mean) < 1e-14);
}

TEST_CASE("iteration converges for coefficient ratios below 3")
{
  const auto g = grid3(32, 32, 32, 1.0, 1.0);
  // 1/rho spans [1/1.47, 1/0.53]: ratio 2.77.
  const auto rho = sample(g,
                          [](double x, double y, double z) {
                            return 1.0 + 0.47 * std::cos(2 * pi * x) * std::cos(2 * pi * y) *
                                           std::cos(pi * z);
                          },
                          Parity::Even);
  auto f = lowpass(random_field(g, Parity::Even, 77), 8);
  f.at(0, 0, 0) = 0.0;
  const auto res = solve_variable_poisson(rho, f, {});
  CHECK(res.iterations <= 200);
  CHECK(res.residual <= 1e-10);
  // The reported residual is the one actually achieved.
  const double check = l2_norm(f - variable_operator(rho, res.p)) / l2_norm(f);
  CHECK(check == doctest::Approx(res.residual).epsilon(1e-3));
}

TEST_CASE("exhausted iteration budget is an error carrying the residual")
{
  const auto g = grid2(16, 16);
  const auto rho = sample(g, [](double x, double, double z) {
                            return 1.0 + 0.45 * std::cos(2 * pi * x) * std::cos(pi * z);
                          },
                          Parity::Even);
  auto f = random_field(g, Parity::Even, 5);
  f.at(0, 0, 0) = 0.0;
  PressureSolveParams params;
  params.max_iter = 2;
  try
  {
    solve_variable_poisson(rho, f, params);
    FAIL("expected PressureNotConverged");
  }
  catch (const PressureNotConverged& e)
  {
    CHECK(e.residual > params.rel_tol);
  }
}

TEST_CASE("warm start from the solution converges immediately")
{
  const auto g = grid2(16, 16);
  const auto rho = sample(g, [](double x, double, double) { return 1.2 + 0.2 * std::cos(2 * pi * x); },
                          Parity::Even);
  auto f = lowpass(random_field(g, Parity::Even, 9), 5);
  f.at(0, 0, 0) = 0.0;
  const auto first = solve_variable_poisson(rho, f, {});
  const auto again = solve_variable_poisson(rho, f, {}, &first.p);
  CHECK(again.iterations == 0);
}

TEST_CASE("RHS mean is removed and reported")
{
  const auto g = grid2(8, 8);
  auto f = lowpass(random_field(g, Parity::Even, 3), 2);
  f.at(0, 0, 0) = 1e-9;
  const auto res = solve_variable_poisson(constant(g, 1.0), f, {});
  CHECK(res.rhs_mean == 1e-9);
  CHECK(res.residual <= 1e-10);
}

TEST_CASE("pressure_solve rejects a divergent velocity")
{
  const auto g = grid2(8, 8, 2.0);
  const auto u = gradient(sample(g, [](double x, double, double z) {
                                   return std::cos(pi * x) * std::cos(pi * z);
                                 },
                                 Parity::Even));
  CHECK_THROWS_AS(pressure_solve(constant(g, 1.0), u, {}), ValidationError);
}

TEST_CASE("variable-density projection yields a divergence-free acceleration")
{
  const auto g = grid3(16, 16, 16, 1.0, 2.0);
  const auto rho = sample(g, [](double x, double, double z) {
                            return 1.0 + 0.3 * std::sin(2 * pi * x) * std::cos(2 * pi * z);
                          },
                          Parity::Even);
  auto a = lowpass(random_vector(g, 31), 5);
  PressureSolveParams params;
  params.rel_tol = 1e-13;
  const auto res = variable_density_pressure(rho, a, params);
  const auto proj = subtract_pressure_gradient(a, rho, res.p);
  CHECK(l2_norm(divergence(proj)) <= 1e-11 * l2_norm(divergence(a)));
}

TEST_CASE("Leray projection examples")
{
  const double lx = 2.0;
  const auto g = grid3(16, 8, 16, lx, 1.0);
  const auto grad = gradient(sample(g,
                                    [&](double x, double, double z) {
                                      return std::cos(2 * pi * x / lx) * std::cos(pi * z);
                                    },
                                    Parity::Even));
  CHECK(max_coeff(leray_project(grad)) <= 1e-14);

  VectorField shear(g);
  shear[0].at(1, 0, 0) = 1.0;
  CHECK(max_coeff_diff(leray_project(shear), shear) == 0.0);
}

TEST_CASE("Leray projection is idempotent and solenoidal")
{
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    const auto g = seed % 2 ? grid3(16, 12, 16, 1.0, 3.0) : grid2(32, 24, 2.0);
    const auto u = random_vector(g, seed);
    const auto once = leray_project(u);
    const auto twice = leray_project(once);
    CHECK(max_coeff_diff(once, twice) <= 1e-13);
    CHECK(l2_norm(divergence(once)) <= 1e-12);
    CHECK(max_wall_trace(once[2]) == 0.0);
    // Orthogonality: the removed part is orthogonal to the kept part.
    const auto removed = u - once;
    double dot = 0.0;
    for (int i = 0; i < 3; ++i)
    {
      const auto a = transform_inverse(once[i]);
      const auto b = transform_inverse(removed[i]);
      for (std::size_t n = 0; n < a.size(); ++n)
        dot += a[n] * b[n];
    }
    CHECK(std::abs(dot) / g->physical_size() <= 1e-12);
  }
}
