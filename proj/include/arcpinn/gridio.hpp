#ifndef ARCPINN_GRIDIO_HPP
#define ARCPINN_GRIDIO_HPP

#include <string>

#include "arcpinn/grid.hpp"
#include "arcpinn/metrics.hpp"

namespace arcpinn {

/// Grid CSV: commented metadata header, then "x,y,z,t,T" rows with 12
/// significant digits, t-major with i varying fastest. Deterministic
/// byte-for-byte for identical inputs.
void write_grid_csv(const std::string& path, const TemperatureGrid& grid);
TemperatureGrid read_grid_csv(const std::string& path);

/// Legacy-VTK STRUCTURED_POINTS, one file per stored slice named
/// <prefix>_NNN.vtk.
void write_grid_vtk(const std::string& prefix, const TemperatureGrid& grid);

void write_probe_csv(const std::string& path, const ProbeTable& table);
void write_path_csv(const std::string& path, const PathProfile& profile);

}  // namespace arcpinn

#endif  // ARCPINN_GRIDIO_HPP
