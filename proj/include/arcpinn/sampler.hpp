#ifndef ARCPINN_SAMPLER_HPP
#define ARCPINN_SAMPLER_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "arcpinn/config.hpp"

namespace arcpinn {

enum class PointLabel : std::uint8_t {
  kInitial,
  kDomain,
  kBoundary,
  kSourceFollowing,
};

enum class Face : std::uint8_t {
  kPlusX, kMinusX, kPlusY, kMinusY, kPlusZ, kMinusZ,
  kNone,
};

std::array<double, 3> face_normal(Face f);
const char* label_name(PointLabel l);
const char* face_name(Face f);

struct CollocationPoint {
  double x, y, z, t;
  PointLabel label;
  Face face = Face::kNone;  // set for boundary points only
};

/// Labeled quasi-random sample of the spatiotemporal domain. Source-following
/// points are stored with the domain batch (they feed the same residual) but
/// keep their own label and sub-count.
struct CollocationSet {
  std::vector<CollocationPoint> initial;
  std::vector<CollocationPoint> boundary;
  std::vector<CollocationPoint> domain;  // includes source-following points
  std::size_t n_source_following = 0;
  std::uint64_t seed = 0;
  SamplingSpec spec;

  std::size_t n_bc() const { return boundary.size(); }
  std::size_t n_pde() const { return domain.size(); }
  std::size_t n_initial() const { return initial.size(); }
  std::size_t total() const {
    return initial.size() + boundary.size() + domain.size();
  }
};

/// Power-law warp on a unit coordinate: z -> z^(1/p). For p > 1 the output
/// majorizes the input, biasing samples toward the top surface once mapped
/// to physical z.
double apply_z_warp(double z_unit, double exponent);

/// Builds the full labeled set from one continuous 8-dimensional Sobol
/// stream. Deterministic for a fixed (seed, config).
CollocationSet build_collocation_set(const RunConfig& cfg);

/// Splits `total` across `steps` so each share is within one of the exact
/// linear fraction and the shares sum to `total`.
std::vector<std::int64_t> apportion(std::int64_t total, std::int64_t steps);

void write_collocation_csv(std::ostream& out, const CollocationSet& set);

}  // namespace arcpinn

#endif  // ARCPINN_SAMPLER_HPP
