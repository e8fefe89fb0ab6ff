#include "slipflow/snapshot.hpp"

#include "slipflow/error.hpp"
#include "slipflow/spectral.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace slipflow {

namespace {

constexpr const char* format_tag = "slipflow-snapshot";

nlohmann::json
domain_json(const DomainSpec& d)
{
  return {{"Lx", d.Lx}, {"Ly", d.Ly}, {"Lz", d.Lz}, {"Nx", d.Nx},
          {"Ny", d.Ny}, {"Nz", d.Nz}, {"dim", d.dim}};
}

std::uint64_t
to_little(std::uint64_t v)
{
  if constexpr (std::endian::native == std::endian::big)
  {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i)
      r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

void
write_values(std::ostream& os, const std::vector<double>& v)
{
  std::vector<std::uint64_t> raw(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    raw[i] = to_little(std::bit_cast<std::uint64_t>(v[i]));
  os.write(reinterpret_cast<const char*>(raw.data()),
           static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
}

void
write_fields(const std::filesystem::path& path, double time,
             const std::vector<std::pair<std::string, const ScalarField*>>& fs)
{
  nlohmann::json header{{"format", format_tag},
                        {"version", 1},
                        {"endianness", "little"},
                        {"dtype", "float64"},
                        {"layout", "x,y,z"},
                        {"time", time},
                        {"domain", domain_json(fs.front().second->domain())}};
  auto& fields = header["fields"] = nlohmann::json::array();
  for (const auto& [name, f] : fs)
    fields.push_back({{"name", name}, {"parity", to_string(f->parity())}});

  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open " + path.string() + " for writing");
  os << header.dump() << '\n';
  for (const auto& [name, f] : fs)
    write_values(os, transform_inverse(*f));
  if (!os)
    throw IoError("write failed: " + path.string());
}

} // namespace

const ScalarField&
Snapshot::field(const std::string& name) const
{
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name)
      return fields[i];
  throw ValidationError("snapshot has no field '" + name + "'");
}

FlowState
Snapshot::to_state() const
{
  return {time, field("rho"), VectorField(field("u1"), field("u2"), field("u3"))};
}

void
write_snapshot(const std::filesystem::path& path, const FlowState& state)
{
  write_fields(path, state.t,
               {{"rho", &state.rho},
                {"u1", &state.u[0]},
                {"u2", &state.u[1]},
                {"u3", &state.u[2]}});
}

void
write_field(const std::filesystem::path& path, const ScalarField& f,
            const std::string& name, double time)
{
  write_fields(path, time, {{name, &f}});
}

Snapshot
read_snapshot(const std::filesystem::path& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line))
    throw IoError(path.string() + ": missing header");

  nlohmann::json header;
  try
  {
    header = nlohmann::json::parse(line);
  }
  catch (const nlohmann::json::exception& e)
  {
    throw IoError(path.string() + ": bad header: " + e.what());
  }
  if (header.value("format", "") != format_tag)
    throw IoError(path.string() + ": not a snapshot file");
  if (header.value("endianness", "") != "little" ||
      header.value("dtype", "") != "float64")
    throw IoError(path.string() + ": unsupported encoding");

  DomainSpec d;
  try
  {
    const auto& dj = header.at("domain");
    d.Lx = dj.at("Lx");
    d.Ly = dj.at("Ly");
    d.Lz = dj.at("Lz");
    d.Nx = dj.at("Nx");
    d.Ny = dj.at("Ny");
    d.Nz = dj.at("Nz");
    d.dim = dj.at("dim");
  }
  catch (const nlohmann::json::exception& e)
  {
    throw IoError(path.string() + ": bad domain: " + e.what());
  }
  const auto grid = Grid::make(d);

  Snapshot snap;
  snap.time = header.at("time");
  std::vector<std::uint64_t> raw(grid->physical_size());
  std::vector<double> values(raw.size());
  for (const auto& fj : header.at("fields"))
  {
    is.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
    if (!is)
      throw IoError(path.string() + ": truncated data");
    for (std::size_t i = 0; i < raw.size(); ++i)
      values[i] = std::bit_cast<double>(to_little(raw[i]));
    snap.names.push_back(fj.at("name"));
    snap.fields.push_back(transform_forward(
      grid, values, parity_from_string(fj.at("parity"))));
  }
  return snap;
}

} // namespace slipflow
