#ifndef ARCPINN_FDM_HPP
#define ARCPINN_FDM_HPP

#include <functional>
#include <string>
#include <vector>

#include "arcpinn/grid.hpp"

namespace arcpinn {

/// Reference-solver knobs. The physical problem comes from the RunConfig;
/// these expose the variants used to validate the solver itself
/// (prescribed initial fields, an insulated Dirichlet-free mode).
struct FdmOptions {
  bool bottom_dirichlet = true;
  double initial_temp = -1.0;  // negative = material t_ambient
  double bottom_temp = -1.0;   // negative = material t_ambient
  std::function<double(double, double, double)> initial_field;  // optional
  int max_picard = 20;
  double picard_tol = 1e-6;  // degC, max change per sweep
  double cg_tol = 1e-10;     // relative residual
  int threads = 1;
};

/// Implicit (backward-Euler) finite-difference solution of the plate
/// problem: 7-point conduction stencil on node-centered control volumes,
/// Goldak source sampled at the nodes, convection implicit, radiation
/// lagged through Picard sweeps, bottom face clamped. Deterministic for
/// any thread count.
TemperatureGrid fdm_solve(const RunConfig& cfg, const GridSpec& grid,
                          const std::vector<double>& output_times,
                          const FdmOptions& opt = {});

/// Named lattice presets mirroring the benchmark meshes: cc = 0.5 mm/20 ms,
/// fc = 0.1 mm/20 ms, ff = 0.1 mm/5 ms (ff is a long-running preset).
GridSpec oracle_preset(const std::string& name);

/// Every lattice time 0..t_end for a grid spec.
std::vector<double> lattice_times(const DomainSpec& dom, const GridSpec& g);

/// Fourier-series slab solution: both ends held at t_boundary, uniform
/// initial t_init, diffusivity alpha. Series truncated at relative 1e-12.
double analytic_slab_1d(double x, double t, double length, double t_init,
                        double t_boundary, double alpha);

/// Classical quasi-steady moving point source on a semi-infinite body:
/// T0 + eta P / (2 pi k R) exp(-v (R + xi) / (2 alpha)). The observation
/// point must be at least 0.5 mm from the source center.
double rosenthal_field(double x, double y, double z, double t,
                       const GoldakParams& gp, const MaterialProps& mat,
                       double lz);

}  // namespace arcpinn

#endif  // ARCPINN_FDM_HPP
