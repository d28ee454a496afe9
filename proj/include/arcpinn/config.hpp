#ifndef ARCPINN_CONFIG_HPP
#define ARCPINN_CONFIG_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "arcpinn/common.hpp"

namespace arcpinn {

/// Thermophysical constants in g-mm-s-degC units.
struct MaterialProps {
  double rho = 7.85e-3;       // density, g/mm^3
  double cp = 6.2e8;          // specific heat, mm^2/(s^2 degC)
  double k = 4.5e7;           // conductivity, g mm/(s^3 degC)
  double emissivity = 0.2;    // dimensionless
  double h_conv = 2.0e4;      // convection coefficient, g/(s^3 degC)
  double t_ambient = 25.0;    // ambient / initial temperature, degC
};

/// Double-ellipsoid source geometry, power and path kinematics.
struct GoldakParams {
  double a_f = 2.57;          // front half-length, mm
  double a_r = 6.0;           // rear half-length, mm
  double b = 6.0;             // half-width, mm
  double c = 4.0;             // depth, mm
  double f_f = 0.6;           // front distribution factor
  double f_r = 1.4;           // rear distribution factor
  double power = 2.45e12;     // g mm^2/s^3
  double efficiency = 0.9;
  double x0 = 0.0;            // initial source position, mm
  double y0 = 3.0;
  double velocity = 10.0;     // mm/s along +x
  double t_on = -1.0;         // active duration, s; negative = full run
};

struct DomainSpec {
  double lx = 40.0;  // mm
  double ly = 6.0;
  double lz = 4.0;
  double t_end = 3.0;  // s
};

struct SamplingSpec {
  std::int64_t n_boundary = 185669;   // totals before `scale`
  std::int64_t n_domain = 112635;     // includes source-following points
  std::int64_t n_initial = 3509;
  std::int64_t source_per_step = 64;
  double dt = 0.005;            // s, time lattice step
  double scale = 1.0;           // fraction applied to all counts
  double z_warp_exponent = 2.0; // p in z -> z^(1/p)
  double ellipsoid_scale = 2.0; // source-following sampling region scale
  std::uint64_t seed = 0;
};

struct NetworkSpec {
  int depth = 4;          // hidden layers
  int width = 64;         // neurons per hidden layer
  double delta_t = 2000;  // output temperature range, degC
};

struct TrainingSpec {
  double adam_lr = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.99;
  double adam_epsilon = 1e-8;
  int adam_epochs = 14850;
  double lbfgs_lr = 0.01;
  int lbfgs_max_iterations = 50;
  int lbfgs_max_evaluations = 62;
  int lbfgs_epochs = 150;
  int lbfgs_history = 50;
  int weight_update_period = 1000;  // epochs
  double weight_alpha = 0.9;        // balance in the adaptive update
  int threads = 0;                  // 0 = hardware concurrency
  std::int64_t minibatch_size = 0;  // 0 = full batch
};

enum class RadiationConvention {
  kKelvinShifted,  // T + 273.15 inside the T^4 law
  kCelsiusRaw,     // temperatures used as-is
};

struct ResidualSpec {
  RadiationConvention radiation = RadiationConvention::kKelvinShifted;
  bool scaling = true;
  double scale_pde = -1.0;  // negative = auto: 1/(rho*cp)
  double scale_bc = -1.0;   // negative = auto: 1/h
};

struct ProbeSpec {
  std::vector<std::array<double, 3>> points = {
      {8.0, 3.0, 4.0}, {20.0, 3.0, 4.0}, {32.0, 3.0, 4.0},
      {20.0, 0.5, 4.0}, {32.0, 1.5, 4.0}};
  std::vector<double> times = {0.6, 1.6, 2.6};  // path-profile times, s
};

struct RunConfig {
  MaterialProps material;
  GoldakParams goldak;
  DomainSpec domain;
  SamplingSpec sampling;
  NetworkSpec network;
  TrainingSpec training;
  ResidualSpec residuals;
  ProbeSpec probes;

  /// Applies defaults that depend on other fields and validates every
  /// invariant. Throws ConfigError naming the offending field.
  void finalize();

  double pde_scale() const;  // resolved residual scaling constants
  double bc_scale() const;
};

/// Parses the sectioned key=value config format. Unknown sections or keys
/// and invariant violations are reported with the offending line/field.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Serializes every field; parse_config(serialize_config(c)) reproduces all
/// numeric fields bit-identically.
std::string serialize_config(const RunConfig& cfg);

/// Affine map of a physical point onto [-1,1]^4; corners map exactly.
std::array<double, 4> normalize_point(const std::array<double, 4>& p,
                                      const DomainSpec& dom);
std::array<double, 4> denormalize_point(const std::array<double, 4>& q,
                                        const DomainSpec& dom);

struct DerivedConstants {
  double alpha;     // thermal diffusivity k/(rho cp), mm^2/s
  double sigma_sb;  // Stefan-Boltzmann in g/(s^3 K^4)
};

DerivedConstants derived_constants(const MaterialProps& mat);

}  // namespace arcpinn

#endif  // ARCPINN_CONFIG_HPP
