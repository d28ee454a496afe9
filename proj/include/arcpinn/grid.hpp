#ifndef ARCPINN_GRID_HPP
#define ARCPINN_GRID_HPP

#include <cstddef>
#include <vector>

#include "arcpinn/config.hpp"

namespace arcpinn {

/// Uniform lattice over the plate: spacing dx on all three axes, time step
/// dt. Spacing must divide each extent (and dt the duration) within 1e-9.
struct GridSpec {
  double dx = 0.5;  // mm
  double dt = 0.02; // s

  void validate(const DomainSpec& dom) const;
};

/// Structured-grid temperature field with stored time slices, shared by the
/// PINN evaluation path and the finite-difference reference solver.
/// Node (i,j,k) sits at (i dx, j dx, k dx); i varies fastest in storage.
struct TemperatureGrid {
  int nx = 0, ny = 0, nz = 0;
  double dx = 0.0;
  std::vector<double> times;
  std::vector<double> data;  // size times.size() * nx*ny*nz

  std::size_t nodes() const {
    return static_cast<std::size_t>(nx) * ny * nz;
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny + j) * nx + i;
  }
  double& at(std::size_t slice, int i, int j, int k) {
    return data[slice * nodes() + index(i, j, k)];
  }
  double at(std::size_t slice, int i, int j, int k) const {
    return data[slice * nodes() + index(i, j, k)];
  }
  const double* slice(std::size_t s) const { return data.data() + s * nodes(); }
  double* slice(std::size_t s) { return data.data() + s * nodes(); }

  bool same_lattice(const TemperatureGrid& other, double tol = 1e-12) const;

  /// Trilinear interpolation in space on one stored slice.
  double sample_slice(std::size_t slice, double x, double y, double z) const;
  /// Trilinear in space, linear in time between stored slices.
  double sample(double x, double y, double z, double t) const;
};

TemperatureGrid make_grid(const DomainSpec& dom, const GridSpec& spec,
                          const std::vector<double>& times);

}  // namespace arcpinn

#endif  // ARCPINN_GRID_HPP
