#include "slipflow/convergence.hpp"

#include "slipflow/diagnostics.hpp"
#include "slipflow/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace slipflow {

namespace {

constexpr double time_match = 1e-12;

std::string
format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string
log_name(double nu)
{
  return nu == 0.0 ? "run_euler.jsonl" : "run_nu_" + format_double(nu) + ".jsonl";
}

struct RunOutcome
{
  RunSummary summary;
  std::vector<FlowState> snapshots;
};

RunOutcome
execute(const FlowState& state0, SolverParams params, double nu,
        const SweepSpec& spec)
{
  params.nu = nu;
  params.t_end = spec.t_end;

  std::ofstream log;
  if (spec.run_dir)
  {
    log.open(*spec.run_dir / log_name(nu));
    if (!log)
      throw IoError("cannot open run log in " + spec.run_dir->string());
  }
  double bc = 0.0;
  auto observer = [&](const FlowState&, const StepInfo& info) {
    bc = std::max(bc, info.bc_trace);
    if (log.is_open())
      log << info.to_json().dump() << '\n';
  };

  auto res = run(state0, params, spec.eval_times, {}, observer);
  RunOutcome out;
  auto& s = out.summary;
  s.nu = nu;
  s.ok = res.ok;
  s.failure = res.failure;
  s.failure_kind = res.failure_kind;
  s.steps = res.steps;
  s.h3_initial = res.h3_initial;
  s.h3_max = res.h3_max;
  s.growth_exceeded = res.growth_exceeded;
  s.density_range_excess = res.density_range_excess;
  s.max_bc_trace = bc;
  out.snapshots = std::move(res.snapshots);
  return out;
}

} // namespace

void
SweepSpec::validate() const
{
  if (nu_list.size() < 3)
    throw ConfigError("sweep.nu_list needs at least 3 viscosities");
  for (std::size_t i = 0; i < nu_list.size(); ++i)
  {
    if (!(nu_list[i] > 0.0))
      throw ConfigError("sweep.nu_list entries must be positive");
    if (i > 0 && !(nu_list[i] < nu_list[i - 1]))
      throw ConfigError("sweep.nu_list must be strictly decreasing");
  }
  if (!(t_end > 0.0))
    throw ConfigError("sweep t_end must be positive");
  if (eval_times.empty())
    throw ConfigError("sweep.eval_times must not be empty");
  for (double t : eval_times)
    if (t < 0.0 || t > t_end)
      throw ConfigError("sweep.eval_times must lie in [0, t_end]");
  if (norm_order < 0 || norm_order > 3)
    throw ConfigError("sweep.norm_order must be 0..3");
  if (threads < 1)
    throw ConfigError("sweep threads must be >= 1");
  resolution.validate();
}

nlohmann::json
RunSummary::to_json() const
{
  return {{"nu", nu},
          {"ok", ok},
          {"failure", failure},
          {"failure_kind", failure_kind},
          {"steps", steps},
          {"h3_initial", h3_initial},
          {"h3_max", h3_max},
          {"growth_exceeded", growth_exceeded},
          {"density_range_excess", density_range_excess},
          {"max_bc_trace", max_bc_trace}};
}

double
SweepResult::h3_variation() const
{
  if (runs.empty())
    return 0.0;
  const double large = runs.front().h3_max;
  const double small = runs.back().h3_max;
  return std::abs(large - small) / small;
}

ErrorRecord
error_record(double nu, const FlowState& viscous, const FlowState& inviscid,
             int norm_order)
{
  const NormSpec norm{norm_order, NormSpec::Kind::Full};
  const double er = sobolev_norm(viscous.rho - inviscid.rho, norm);
  const double eu = sobolev_norm(viscous.u - inviscid.u, norm);
  ErrorRecord r{nu, viscous.t, er * er, eu * eu, 0.0};
  r.total_sq = r.err_rho_sq + r.err_u_sq;
  return r;
}

SweepResult
run_sweep(const SweepSpec& spec)
{
  spec.validate();
  const auto grid = Grid::make(spec.resolution);
  const FlowState state0 = make_initial_state(grid, spec.ic);
  const auto report = validate_initial_data(
    state0.rho, state0.u, DensityBounds::from_density(state0.rho));
  if (!report.passed())
    throw ValidationError("sweep initial data rejected: " +
                          report.failures.front());
  if (spec.run_dir)
    std::filesystem::create_directories(*spec.run_dir);

  // Job 0 is the inviscid reference.
  const std::size_t njobs = spec.nu_list.size() + 1;
  std::vector<RunOutcome> outcomes(njobs);
  std::vector<std::exception_ptr> errors(njobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < njobs;)
    {
      try
      {
        const double nu = j == 0 ? 0.0 : spec.nu_list[j - 1];
        outcomes[j] = execute(state0, spec.solver, nu, spec);
      }
      catch (...)
      {
        errors[j] = std::current_exception();
      }
    }
  };
  const int nthreads =
    static_cast<int>(std::min<std::size_t>(spec.threads, njobs));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  for (const auto& e : errors)
    if (e)
      std::rethrow_exception(e);

  SweepResult result;
  result.euler = outcomes[0].summary;
  for (std::size_t j = 1; j < njobs; ++j)
    result.runs.push_back(outcomes[j].summary);

  const auto& ref = outcomes[0];
  if (!ref.summary.ok)
  {
    result.ok = false;
    result.failure = "inviscid reference failed: " + ref.summary.failure;
    return result;
  }
  for (std::size_t j = 1; j < njobs; ++j)
  {
    const auto& o = outcomes[j];
    if (!o.summary.ok)
    {
      result.ok = false;
      if (result.failure.empty())
        result.failure = "run nu = " + format_double(o.summary.nu) +
                         " failed: " + o.summary.failure;
      continue;
    }
    for (const auto& snap : o.snapshots)
    {
      const auto it = std::find_if(
        ref.snapshots.begin(), ref.snapshots.end(),
        [&](const FlowState& r) { return std::abs(r.t - snap.t) <= time_match; });
      if (it == ref.snapshots.end())
        throw Error("no inviscid snapshot at t = " + format_double(snap.t));
      result.records.push_back(
        error_record(o.summary.nu, snap, *it, spec.norm_order));
    }
  }
  std::sort(result.records.begin(), result.records.end(),
            [](const ErrorRecord& a, const ErrorRecord& b) {
              return a.nu != b.nu ? a.nu < b.nu : a.t < b.t;
            });
  return result;
}

nlohmann::json
RateFit::to_json() const
{
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v))
      return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  };
  return {{"t", t},
          {"points", points},
          {"slope", num(slope)},
          {"constant", num(constant)},
          {"fit_residual", num(fit_residual)},
          {"bound_ratio_max", num(bound_ratio_max)},
          {"ratios", ratios},
          {"ratio_non_increasing", ratio_non_increasing},
          {"verdict", verdict ? "pass" : "fail"}};
}

RateFit
fit_rate(const std::vector<ErrorRecord>& records, double at)
{
  std::vector<ErrorRecord> pts;
  for (const auto& r : records)
    if (std::abs(r.t - at) <= time_match)
      pts.push_back(r);
  std::sort(pts.begin(), pts.end(),
            [](const ErrorRecord& a, const ErrorRecord& b) { return a.nu > b.nu; });
  std::set<double> distinct;
  for (const auto& r : pts)
    distinct.insert(r.nu);
  if (distinct.size() < 3 || distinct.size() != pts.size())
    throw ValidationError("fit_rate needs >= 3 distinct viscosities at t = " +
                          format_double(at));

  RateFit fit;
  fit.t = at;
  fit.points = pts.size();

  const bool all_zero = std::all_of(pts.begin(), pts.end(),
                                    [](const auto& r) { return r.total_sq == 0.0; });
  if (all_zero)
  {
    fit.slope = std::numeric_limits<double>::infinity();
    fit.constant = 0.0;
    fit.ratios.assign(pts.size(), 0.0);
    return fit;
  }
  for (const auto& r : pts)
    if (!(r.total_sq > 0.0))
      throw ValidationError("fit_rate: zero error mixed with non-zero errors");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& r : pts)
  {
    const double x = std::log(r.nu), y = std::log(r.total_sq);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - fit.slope * sx) / n;
  fit.constant = std::exp(intercept);
  double ss = 0.0;
  for (const auto& r : pts)
  {
    const double e = std::log(r.total_sq) - (intercept + fit.slope * std::log(r.nu));
    ss += e * e;
  }
  fit.fit_residual = std::sqrt(ss / n);

  for (const auto& r : pts)
  {
    fit.ratios.push_back(r.total_sq / r.nu);
    fit.bound_ratio_max = std::max(fit.bound_ratio_max, fit.ratios.back());
  }
  for (std::size_t i = 1; i < fit.ratios.size(); ++i)
    if (fit.ratios[i] > (1.0 + ratio_slack) * fit.ratios[i - 1])
      fit.ratio_non_increasing = false;
  fit.verdict = fit.ratio_non_increasing || fit.slope >= slope_threshold;
  return fit;
}

std::string
records_csv(const std::vector<ErrorRecord>& records)
{
  std::string out = "nu,t,err_rho_sq,err_u_sq,total_sq\n";
  for (const auto& r : records)
    out += format_double(r.nu) + ',' + format_double(r.t) + ',' +
           format_double(r.err_rho_sq) + ',' + format_double(r.err_u_sq) +
           ',' + format_double(r.total_sq) + '\n';
  return out;
}

std::vector<ErrorRecord>
parse_records_csv(const std::string& text)
{
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "nu,t,err_rho_sq,err_u_sq,total_sq")
    throw IoError("report CSV: unexpected header");
  std::vector<ErrorRecord> out;
  while (std::getline(is, line))
  {
    if (line.empty())
      continue;
    ErrorRecord r;
    double* dst[] = {&r.nu, &r.t, &r.err_rho_sq, &r.err_u_sq, &r.total_sq};
    std::istringstream ls(line);
    std::string cell;
    int k = 0;
    while (std::getline(ls, cell, ','))
    {
      if (k >= 5)
        throw IoError("report CSV: too many columns");
      char* end = nullptr;
      *dst[k++] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw IoError("report CSV: bad number '" + cell + "'");
    }
    if (k != 5)
      throw IoError("report CSV: expected 5 columns");
    out.push_back(r);
  }
  return out;
}

void
emit_report(const std::vector<ErrorRecord>& records,
            const std::vector<RateFit>& fits, const nlohmann::json& metadata,
            const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "report.csv", std::ios::binary);
    if (!os)
      throw IoError("cannot write " + (dir / "report.csv").string());
    os << records_csv(records);
    if (!os)
      throw IoError("write failed: " + (dir / "report.csv").string());
  }

  nlohmann::json j;
  j["fits"] = nlohmann::json::array();
  bool verdict = true;
  for (const auto& f : fits)
  {
    j["fits"].push_back(f.to_json());
    verdict = verdict && f.verdict;
  }
  j["verdict"] = verdict ? "pass" : "fail";
  j["records"] = records.size();
  j["metadata"] = metadata;
  std::ofstream os(dir / "report.json", std::ios::binary);
  if (!os)
    throw IoError("cannot write " + (dir / "report.json").string());
  os << j.dump(2) << '\n';
  if (!os)
    throw IoError("write failed: " + (dir / "report.json").string());
}

} // namespace slipflow
