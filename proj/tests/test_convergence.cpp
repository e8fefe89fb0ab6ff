#include "helpers.hpp"

#include "slipflow/convergence.hpp"
#include "slipflow/error.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace testing;

namespace {

std::vector<ErrorRecord>
synthetic(double (*law)(double), double t = 1.0)
{
  std::vector<ErrorRecord> out;
  for (double nu : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3})
    out.push_back({nu, t, 0.0, law(nu), law(nu)});
  return out;
}

SweepSpec
shear_sweep()
{
  SweepSpec s;
  s.ic = {"shear_decay", {{"A", 0.8}}, 0};
  s.resolution = {1.0, 1.0, 1.0, 4, 1, 16, 2};
  s.t_end = 0.5;
  s.eval_times = {0.0, 0.25, 0.5};
  return s;
}

std::string
slurp(const std::filesystem::path& p)
{
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("linear law fits slope 1")
{
  const auto fit = fit_rate(synthetic([](double nu) { return nu; }), 1.0);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.constant == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.fit_residual <= 1e-12);
  CHECK(fit.verdict);
  CHECK(fit.points == 5);
}

TEST_CASE("quadratic law fits slope 2 and passes")
{
  const auto fit = fit_rate(synthetic([](double nu) { return 3 * nu * nu; }), 1.0);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.constant == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.ratio_non_increasing);
  CHECK(fit.verdict);
}

TEST_CASE("square-root law violates the bound")
{
  const auto fit = fit_rate(synthetic([](double nu) { return std::sqrt(nu); }), 1.0);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(fit.ratio_non_increasing);
  CHECK_FALSE(fit.verdict);
}

TEST_CASE("ratio slack tolerates small wobbles")
{
  auto recs = synthetic([](double nu) { return nu; });
  recs[2].total_sq *= 1.08; // ratio up 8% from the previous nu
  auto fit = fit_rate(recs, 1.0);
  CHECK(fit.ratio_non_increasing);
  recs[2].total_sq *= 1.05;
  fit = fit_rate(recs, 1.0);
  CHECK_FALSE(fit.ratio_non_increasing);
  // Still passes on the slope.
  CHECK(fit.verdict);
}

TEST_CASE("fit selects records by time and needs three viscosities")
{
  auto recs = synthetic([](double nu) { return nu; }, 1.0);
  const auto other = synthetic([](double nu) { return nu * nu; }, 2.0);
  recs.insert(recs.end(), other.begin(), other.end());
  CHECK(fit_rate(recs, 2.0).slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_rate(recs, 3.0), ValidationError);
  recs.resize(2);
  CHECK_THROWS_AS(fit_rate(recs, 1.0), ValidationError);
}

TEST_CASE("all-zero errors fit as an unbounded rate")
{
  const auto fit = fit_rate(synthetic([](double) { return 0.0; }), 1.0);
  CHECK(std::isinf(fit.slope));
  CHECK(fit.verdict);
  auto recs = synthetic([](double nu) { return nu; });
  recs[1].total_sq = 0.0;
  CHECK_THROWS_AS(fit_rate(recs, 1.0), ValidationError);
}

TEST_CASE("differencing a state against itself gives zero")
{
  const auto g = grid3(8, 8, 8);
  FlowState s{0.3, random_field(g, Parity::Even, 1), random_vector(g, 2)};
  const auto r = error_record(0.01, s, s, 2);
  CHECK(r.err_rho_sq == 0.0);
  CHECK(r.err_u_sq == 0.0);
  CHECK(r.total_sq == 0.0);
  CHECK(r.t == 0.3);
}

TEST_CASE("shear sweep reproduces the closed-form errors")
{
  auto spec = shear_sweep();
  const auto dir = scratch_dir("sweep_shear");
  spec.run_dir = dir / "runs";
  const auto res = run_sweep(spec);
  REQUIRE(res.ok);
  REQUIRE(res.records.size() == spec.nu_list.size() * spec.eval_times.size());

  const double A = 0.8, V = 1.0;
  for (const auto& r : res.records)
  {
    CHECK(r.err_rho_sq == 0.0);
    const double decay = std::exp(-r.nu * pi * pi * r.t) - 1.0;
    const double exact = A * A * decay * decay * std::pow(1 + pi * pi, 2) * V / 2;
    if (r.t == 0.0)
      CHECK(r.total_sq == 0.0);
    else
      CHECK(std::abs(r.err_u_sq - exact) <= 1e-6 * exact);
  }
  // Sorted by (nu, t).
  for (std::size_t i = 1; i < res.records.size(); ++i)
  {
    const auto& a = res.records[i - 1];
    const auto& b = res.records[i];
    CHECK((a.nu < b.nu || (a.nu == b.nu && a.t < b.t)));
  }
  // One log per run, one line per step.
  for (const auto& run : res.runs)
  {
    char name[64];
    std::snprintf(name, sizeof name, "run_nu_%.17g.jsonl", run.nu);
    std::ifstream is(*spec.run_dir / name);
    REQUIRE(is);
    std::size_t lines = 0;
    for (std::string line; std::getline(is, line);)
      ++lines;
    CHECK(lines == run.steps);
  }
  CHECK(std::filesystem::exists(*spec.run_dir / "run_euler.jsonl"));

  // (e^{-a} - 1)^2 behaves like a^2 for small a = nu pi^2 t.
  const auto fit = fit_rate(res.records, 0.5);
  CHECK(fit.slope > 1.7);
  CHECK(fit.slope < 2.0);
  CHECK(fit.verdict);
}

TEST_CASE("sweep results do not depend on the thread count")
{
  auto spec = shear_sweep();
  spec.ic = {"random_smooth", {{"u_max", 0.2}}, 9};
  spec.resolution = {1.0, 1.0, 1.0, 16, 1, 16, 2};
  spec.t_end = 0.1;
  spec.eval_times = {0.05, 0.1};
  spec.threads = 1;
  const auto a = run_sweep(spec);
  spec.threads = 3;
  const auto b = run_sweep(spec);
  REQUIRE(a.ok);
  CHECK(a.records == b.records);
  CHECK(records_csv(a.records) == records_csv(b.records));
}

TEST_CASE("errors grow with the viscosity for the stratified vortex")
{
  SweepSpec spec;
  spec.ic = {"stratified_vortex", {}, 0};
  spec.resolution = {2.0, 1.0, 1.0, 32, 1, 32, 2};
  spec.t_end = 0.25;
  spec.eval_times = {0.25};
  const auto res = run_sweep(spec);
  REQUIRE(res.ok);
  // records are sorted by increasing nu
  for (std::size_t i = 1; i < res.records.size(); ++i)
    CHECK(res.records[i].total_sq >= 0.95 * res.records[i - 1].total_sq);
  CHECK(fit_rate(res.records, 0.25).verdict);
  for (const auto& r : res.runs)
    CHECK(r.max_bc_trace <= 1e-12);
}

TEST_CASE("sweep settings are validated")
{
  auto spec = shear_sweep();
  spec.nu_list = {1e-3, 1e-2, 1e-1};
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
  spec = shear_sweep();
  spec.nu_list = {1e-1, 1e-2};
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
  spec = shear_sweep();
  spec.eval_times = {0.7};
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
  spec = shear_sweep();
  spec.norm_order = 5;
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
}

TEST_CASE("empty report is a header-only CSV")
{
  const auto dir = scratch_dir("report_empty");
  emit_report({}, {}, nlohmann::json::object(), dir);
  CHECK(slurp(dir / "report.csv") == "nu,t,err_rho_sq,err_u_sq,total_sq\n");
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["records"] == 0);
  CHECK(parse_records_csv(slurp(dir / "report.csv")).empty());
}

TEST_CASE("report CSV round trips exactly")
{
  std::mt19937_64 rng(123);
  std::vector<ErrorRecord> recs;
  for (int i = 0; i < 50; ++i)
  {
    ErrorRecord r{std::ldexp(std::abs(uniform(rng)), -i % 20), std::abs(uniform(rng)),
                  std::abs(uniform(rng)) * 1e-300, std::abs(uniform(rng)) * 1e10, 0.0};
    r.total_sq = r.err_rho_sq + r.err_u_sq;
    recs.push_back(r);
  }
  const auto dir = scratch_dir("report_roundtrip");
  const auto fits = std::vector<RateFit>{fit_rate(synthetic([](double nu) { return nu; }), 1.0)};
  emit_report(recs, fits, {{"note", "x"}}, dir);
  CHECK(parse_records_csv(slurp(dir / "report.csv")) == recs);

  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["verdict"] == "pass");
  CHECK(j["fits"].size() == 1);
  CHECK(j["metadata"]["note"] == "x");
}

TEST_CASE("malformed CSV is rejected")
{
  CHECK_THROWS_AS(parse_records_csv("a,b\n"), IoError);
  CHECK_THROWS_AS(parse_records_csv("nu,t,err_rho_sq,err_u_sq,total_sq\n1,2,3\n"), IoError);
  CHECK_THROWS_AS(parse_records_csv("nu,t,err_rho_sq,err_u_sq,total_sq\n1,2,3,4,x\n"), IoError);
}
