#ifndef ARCPINN_PHYSICS_HPP
#define ARCPINN_PHYSICS_HPP

#include <vector>

#include "arcpinn/config.hpp"
#include "arcpinn/mlp.hpp"
#include "arcpinn/sampler.hpp"

namespace arcpinn {

/// Goldak double-ellipsoid volumetric flux, g/(mm s^3). The source rides the
/// top surface z = lz and moves along +x at the configured velocity; the
/// front branch applies for x - (x0 + v t) <= 0. Returns 0 after t_on.
double goldak_flux(double x, double y, double z, double t,
                   const GoldakParams& gp, double lz);

/// Heat-conduction residual from a physical-units temperature jet:
/// rho cp dT/dt - k lap(T) - Q, multiplied by `scale`.
double pde_residual(const Jet& jet, double flux, const MaterialProps& mat,
                    double scale = 1.0);

/// Convective surface flux h (T - T0), g/s^3.
double conv_flux(double temp, const MaterialProps& mat);

/// Radiative surface flux sigma epsilon (Theta^4 - Theta0^4); Theta follows
/// the configured temperature convention.
double rad_flux(double temp, const MaterialProps& mat,
                RadiationConvention convention);

/// Robin (convection + radiation) residual on a non-bottom face:
/// -k dT/dn - (q_conv + q_rad), multiplied by `scale`.
double robin_residual(const Jet& jet, Face face, const MaterialProps& mat,
                      RadiationConvention convention, double scale = 1.0);

/// Bottom-face Dirichlet residual, plain degC difference.
double dirichlet_residual(double temp, const MaterialProps& mat);

/// Residuals of a full collocation set under one parameter vector.
struct ResidualBatch {
  std::vector<double> pde;        // domain + source-following points
  std::vector<double> robin;      // non-bottom boundary points
  std::vector<Face> robin_faces;
  std::vector<double> dirichlet;  // bottom boundary points
  double pde_scale = 1.0;
  double bc_scale = 1.0;
};

ResidualBatch evaluate_residuals(const MlpParams& params,
                                 const CollocationSet& set,
                                 const RunConfig& cfg);

}  // namespace arcpinn

#endif  // ARCPINN_PHYSICS_HPP
