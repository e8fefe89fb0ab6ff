#include "slipflow/config.hpp"

#include "slipflow/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace slipflow {

namespace {

using nlohmann::json;

/// Reads one JSON object, remembering which keys were consumed so that
/// anything left over can be reported.
class Section
{
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object())
      throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key)
  {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string field(const std::string& key) const
  {
    return path_.empty() ? key : path_ + "." + key;
  }

  double number(const std::string& key, std::optional<double> def)
  {
    if (!has(key))
      return required(key, def);
    const auto& v = raw(key);
    if (!v.is_number())
      throw ConfigError(field(key) + " must be a number");
    return v.get<double>();
  }

  int integer(const std::string& key, std::optional<int> def)
  {
    if (!has(key))
      return required(key, def);
    const auto& v = raw(key);
    if (!v.is_number_integer())
      throw ConfigError(field(key) + " must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool def)
  {
    if (!has(key))
      return def;
    const auto& v = raw(key);
    if (!v.is_boolean())
      throw ConfigError(field(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> def)
  {
    if (!has(key))
      return required(key, def);
    const auto& v = raw(key);
    if (!v.is_string())
      throw ConfigError(field(key) + " must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key,
                              std::optional<std::vector<double>> def)
  {
    if (!has(key))
      return required(key, def);
    const auto& v = raw(key);
    if (!v.is_array())
      throw ConfigError(field(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v)
    {
      if (!e.is_number())
        throw ConfigError(field(key) + " must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Section sub(const std::string& key)
  {
    if (!has(key))
      return Section(empty(), field(key));
    return Section(raw(key), field(key));
  }

  void finish() const
  {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key))
        throw ConfigError("unknown configuration key '" + field(key) + "'");
  }

private:
  static const json& empty()
  {
    static const json e = json::object();
    return e;
  }

  std::string where() const { return path_.empty() ? "configuration" : path_; }

  template <class T>
  T required(const std::string& key, const std::optional<T>& def) const
  {
    if (!def)
      throw ConfigError("missing required field '" + field(key) + "'");
    return *def;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void
check_times(const std::vector<double>& ts, double t_end, const std::string& name)
{
  if (ts.empty())
    throw ConfigError(name + " must not be empty");
  for (std::size_t i = 0; i < ts.size(); ++i)
  {
    if (!(ts[i] >= 0.0 && ts[i] <= t_end))
      throw ConfigError(name + " entries must lie in [0, solver.t_end]");
    if (i > 0 && !(ts[i] > ts[i - 1]))
      throw ConfigError(name + " must be strictly increasing");
  }
}

} // namespace

Config
parse_config(const nlohmann::json& j)
{
  Config c;
  Section top(j, "");

  {
    auto d = top.sub("domain");
    if (!top.has("domain"))
      throw ConfigError("missing required section 'domain'");
    auto& dom = c.domain;
    dom.dim = d.integer("dim", 3);
    dom.Lx = d.number("Lx", 1.0);
    dom.Ly = d.number("Ly", 1.0);
    dom.Lz = d.number("Lz", 1.0);
    dom.Nx = d.integer("Nx", std::nullopt);
    dom.Ny = d.integer("Ny", dom.dim == 2 ? std::optional<int>(1) : std::nullopt);
    dom.Nz = d.integer("Nz", std::nullopt);
    d.finish();
    dom.validate();
  }

  {
    if (!top.has("ic"))
      throw ConfigError("missing required section 'ic'");
    auto s = top.sub("ic");
    c.ic.name = s.string("preset", std::nullopt);
    const auto& defaults = preset_defaults(c.ic.name);
    c.ic.params = defaults;
    auto p = s.sub("params");
    for (const auto& [name, def] : defaults)
      c.ic.params[name] = p.number(name, def);
    p.finish();
    if (s.has("seed"))
    {
      const auto& v = s.raw("seed");
      if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError("ic.seed must be a non-negative integer");
      c.ic.seed = v.get<std::uint64_t>();
    }
    s.finish();
  }

  {
    if (!top.has("solver"))
      throw ConfigError("missing required section 'solver'");
    auto s = top.sub("solver");
    auto& sp = c.solver;
    sp.nu = s.number("nu", std::nullopt);
    sp.t_end = s.number("t_end", std::nullopt);
    const auto policy = s.string("dt_policy", "cfl");
    if (policy == "cfl")
      sp.dt_policy = DtPolicy::Cfl;
    else if (policy == "fixed")
      sp.dt_policy = DtPolicy::Fixed;
    else
      throw ConfigError("solver.dt_policy must be \"cfl\" or \"fixed\"");
    sp.dt = s.number("dt", 0.0);
    sp.cfl_adv = s.number("cfl_adv", sp.cfl_adv);
    sp.cfl_visc = s.number("cfl_visc", sp.cfl_visc);
    sp.dealias = s.boolean("dealias", sp.dealias);
    sp.growth_factor = s.number("growth_factor", sp.growth_factor);
    auto p = s.sub("pressure");
    sp.pressure.rel_tol = p.number("rel_tol", sp.pressure.rel_tol);
    sp.pressure.max_iter = p.integer("max_iter", sp.pressure.max_iter);
    if (p.has("precond_coeff") && !p.raw("precond_coeff").is_null())
      sp.pressure.precond_coeff = p.number("precond_coeff", std::nullopt);
    p.finish();
    s.finish();
    sp.validate();
  }

  c.snapshot_times = top.numbers("snapshot_times", std::vector{c.solver.t_end});
  check_times(c.snapshot_times, c.solver.t_end, "snapshot_times");

  if (top.has("sweep"))
  {
    auto s = top.sub("sweep");
    SweepConfig sw;
    sw.nu_list = s.numbers("nu_list", sw.nu_list);
    sw.eval_times = s.numbers("eval_times", std::vector{c.solver.t_end});
    sw.norm_order = s.integer("norm_order", sw.norm_order);
    s.finish();
    if (sw.nu_list.size() < 3)
      throw ConfigError("sweep.nu_list needs at least 3 viscosities");
    for (std::size_t i = 0; i < sw.nu_list.size(); ++i)
      if (!(sw.nu_list[i] > 0.0) || (i > 0 && !(sw.nu_list[i] < sw.nu_list[i - 1])))
        throw ConfigError(
          "sweep.nu_list must be positive and strictly decreasing");
    check_times(sw.eval_times, c.solver.t_end, "sweep.eval_times");
    if (sw.norm_order < 0 || sw.norm_order > 3)
      throw ConfigError("sweep.norm_order must be 0..3");
    c.sweep = std::move(sw);
  }

  c.output_dir = top.string("output_dir", std::string("out"));
  if (c.output_dir.empty())
    throw ConfigError("output_dir must not be empty");
  top.finish();
  return c;
}

Config
parse_config(const std::string& text)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

Config
load_config(const std::filesystem::path& path)
{
  std::ifstream is(path);
  if (!is)
    throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json
emit_config(const Config& c)
{
  const auto& d = c.domain;
  const auto& s = c.solver;
  nlohmann::json j;
  j["domain"] = {{"dim", d.dim}, {"Lx", d.Lx}, {"Ly", d.Ly}, {"Lz", d.Lz},
                 {"Nx", d.Nx},   {"Ny", d.Ny}, {"Nz", d.Nz}};
  j["ic"] = {{"preset", c.ic.name}, {"params", c.ic.params}, {"seed", c.ic.seed}};
  nlohmann::json pressure{{"rel_tol", s.pressure.rel_tol},
                          {"max_iter", s.pressure.max_iter},
                          {"precond_coeff", nullptr}};
  if (s.pressure.precond_coeff)
    pressure["precond_coeff"] = *s.pressure.precond_coeff;
  j["solver"] = {{"nu", s.nu},
                 {"t_end", s.t_end},
                 {"dt_policy", s.dt_policy == DtPolicy::Cfl ? "cfl" : "fixed"},
                 {"dt", s.dt},
                 {"cfl_adv", s.cfl_adv},
                 {"cfl_visc", s.cfl_visc},
                 {"dealias", s.dealias},
                 {"growth_factor", s.growth_factor},
                 {"pressure", pressure}};
  j["snapshot_times"] =
    c.snapshot_times.empty() ? std::vector{s.t_end} : c.snapshot_times;
  if (c.sweep)
    j["sweep"] = {{"nu_list", c.sweep->nu_list},
                  {"eval_times", c.sweep->eval_times.empty()
                                   ? std::vector{s.t_end}
                                   : c.sweep->eval_times},
                  {"norm_order", c.sweep->norm_order}};
  j["output_dir"] = c.output_dir.string();
  return j;
}

} // namespace slipflow
