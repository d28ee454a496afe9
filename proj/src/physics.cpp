#include "arcpinn/physics.hpp"

#include <cmath>

#include "arcpinn/common.hpp"

namespace arcpinn {

double goldak_flux(double x, double y, double z, double t,
                   const GoldakParams& gp, double lz) {
  if (t > gp.t_on) return 0.0;
  const double xi = x - (gp.x0 + gp.velocity * t);
  const double f = xi <= 0.0 ? gp.f_f : gp.f_r;
  const double a = xi <= 0.0 ? gp.a_f : gp.a_r;
  const double dy = y - gp.y0;
  const double dz = z - lz;
  const double coeff = 6.0 * std::sqrt(3.0) * f * gp.power * gp.efficiency /
                       (a * gp.b * gp.c * M_PI * std::sqrt(M_PI));
  const double arg = -3.0 * (xi * xi / (a * a) + dy * dy / (gp.b * gp.b) +
                             dz * dz / (gp.c * gp.c));
  return coeff * std::exp(arg);
}

double pde_residual(const Jet& jet, double flux, const MaterialProps& mat,
                    double scale) {
  const double lap = jet.lap[0] + jet.lap[1] + jet.lap[2];
  return scale * (mat.rho * mat.cp * jet.grad[3] - mat.k * lap - flux);
}

double conv_flux(double temp, const MaterialProps& mat) {
  return mat.h_conv * (temp - mat.t_ambient);
}

double rad_flux(double temp, const MaterialProps& mat,
                RadiationConvention convention) {
  const double shift =
      convention == RadiationConvention::kKelvinShifted ? kCelsiusToKelvin : 0.0;
  const double th = temp + shift;
  const double th0 = mat.t_ambient + shift;
  const double th2 = th * th, th02 = th0 * th0;
  return kStefanBoltzmann * mat.emissivity * (th2 * th2 - th02 * th02);
}

double robin_residual(const Jet& jet, Face face, const MaterialProps& mat,
                      RadiationConvention convention, double scale) {
  if (face == Face::kMinusZ || face == Face::kNone)
    throw NumericError(
        "robin_residual: bottom or unlabeled face passed to the Robin "
        "condition (mislabeled point)");
  const auto n = face_normal(face);
  const double dTdn =
      n[0] * jet.grad[0] + n[1] * jet.grad[1] + n[2] * jet.grad[2];
  const double q = conv_flux(jet.value, mat) + rad_flux(jet.value, mat, convention);
  return scale * (-mat.k * dTdn - q);
}

double dirichlet_residual(double temp, const MaterialProps& mat) {
  return temp - mat.t_ambient;
}

ResidualBatch evaluate_residuals(const MlpParams& params,
                                 const CollocationSet& set,
                                 const RunConfig& cfg) {
  ResidualBatch out;
  out.pde_scale = cfg.pde_scale();
  out.bc_scale = cfg.bc_scale();
  const OutputTransform xf{cfg.material.t_ambient, cfg.network.delta_t};

  out.pde.reserve(set.domain.size());
  for (const auto& p : set.domain) {
    const Jet jet = temperature_jet(params, xf, cfg.domain, {p.x, p.y, p.z, p.t});
    const double q = goldak_flux(p.x, p.y, p.z, p.t, cfg.goldak, cfg.domain.lz);
    out.pde.push_back(pde_residual(jet, q, cfg.material, out.pde_scale));
  }
  for (const auto& p : set.boundary) {
    const Jet jet = temperature_jet(params, xf, cfg.domain, {p.x, p.y, p.z, p.t});
    if (p.face == Face::kMinusZ) {
      out.dirichlet.push_back(dirichlet_residual(jet.value, cfg.material));
    } else {
      out.robin.push_back(robin_residual(jet, p.face, cfg.material,
                                         cfg.residuals.radiation,
                                         out.bc_scale));
      out.robin_faces.push_back(p.face);
    }
  }
  return out;
}

}  // namespace arcpinn
