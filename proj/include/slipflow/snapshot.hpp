#pragma once

#include "slipflow/state.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace slipflow {

/// Snapshot file: one line of JSON header terminated by '\n', then the raw
/// little-endian float64 collocation values of each field in header order,
/// each laid out x fastest, then y, then z.
///
///   {"format":"slipflow-snapshot","version":1,"endianness":"little",
///    "dtype":"float64","layout":"x,y,z","time":...,
///    "domain":{"Lx":..,"Ly":..,"Lz":1,"Nx":..,"Ny":..,"Nz":..,"dim":..},
///    "fields":[{"name":"rho","parity":"even"}, ...]}
struct Snapshot
{
  double time = 0.0;
  std::vector<std::string> names;
  std::vector<ScalarField> fields;

  const ScalarField& field(const std::string& name) const;
  /// Requires fields rho, u1, u2, u3.
  FlowState to_state() const;
};

void write_snapshot(const std::filesystem::path& path, const FlowState& state);
void write_field(const std::filesystem::path& path, const ScalarField& f,
                 const std::string& name, double time);
Snapshot read_snapshot(const std::filesystem::path& path);

} // namespace slipflow
