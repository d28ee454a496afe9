#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "arcpinn/common.hpp"
#include "arcpinn/sampler.hpp"

using namespace arcpinn;

namespace {

RunConfig desk_config(double scale = 0.1) {
  RunConfig cfg;
  cfg.sampling.scale = scale;
  cfg.finalize();
  return cfg;
}

}  // namespace

TEST_CASE("z-warp endpoints, square root and identity") {
  CHECK(apply_z_warp(0.0, 2.0) == 0.0);
  CHECK(apply_z_warp(1.0, 2.0) == 1.0);
  CHECK(apply_z_warp(0.0, 7.3) == 0.0);
  CHECK(apply_z_warp(1.0, 7.3) == 1.0);
  CHECK(apply_z_warp(0.25, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform();
    CHECK(apply_z_warp(u, 1.0) == u);  // p = 1 is the identity
    CHECK(apply_z_warp(u, 2.0) >= u);  // p > 1 biases upward
  }
  CHECK_THROWS_AS(apply_z_warp(0.5, 0.0), NumericError);
  CHECK_THROWS_AS(apply_z_warp(0.5, -1.0), NumericError);
}

TEST_CASE("paper-scale request hits the published totals") {
  const RunConfig cfg = desk_config(1.0);
  const CollocationSet set = build_collocation_set(cfg);
  CHECK(set.n_bc() == 185669);
  CHECK(set.n_pde() == 112635);
  CHECK(set.n_initial() == 3509);
  CHECK(set.total() == 301813);
  CHECK(set.n_source_following == 64 * 600);
}

TEST_CASE("initial points sit exactly at t = 0") {
  const CollocationSet set = build_collocation_set(desk_config());
  CHECK(set.n_initial() == 351);
  for (const auto& p : set.initial) {
    REQUIRE(p.t == 0.0);
    REQUIRE(p.label == PointLabel::kInitial);
  }
}

TEST_CASE("desk-scale per-step counts follow linear apportionment") {
  const RunConfig cfg = desk_config(0.1);
  const CollocationSet set = build_collocation_set(cfg);
  CHECK(set.n_bc() == 18567);
  CHECK(set.n_pde() == 11264);

  // Brute-force regrouping by time step.
  std::map<double, std::int64_t> boundary_per_step, domain_per_step;
  for (const auto& p : set.boundary) boundary_per_step[p.t]++;
  for (const auto& p : set.domain) domain_per_step[p.t]++;
  CHECK(boundary_per_step.size() == 600);
  CHECK(domain_per_step.size() == 600);

  const double b_exact = 18567.0 / 600.0;  // ~30.9
  for (const auto& [t, n] : boundary_per_step) {
    CAPTURE(t);
    CHECK(std::abs(static_cast<double>(n) - b_exact) <= 1.0);
  }
  const double d_exact = 11264.0 / 600.0;  // ~18.8 incl. source points
  for (const auto& [t, n] : domain_per_step) {
    CAPTURE(t);
    CHECK(std::abs(static_cast<double>(n) - d_exact) <= 1.0);
  }
}

TEST_CASE("apportionment sums exactly and stays within one of the fraction") {
  for (std::int64_t total : {7663, 11264, 185669, 3}) {
    const auto parts = apportion(total, 600);
    std::int64_t sum = 0;
    const double exact = static_cast<double>(total) / 600.0;
    for (auto n : parts) {
      sum += n;
      CHECK(std::abs(static_cast<double>(n) - exact) <= 1.0);
    }
    CHECK(sum == total);
  }
}

TEST_CASE("determinism: identical seed and config give identical sets") {
  const RunConfig cfg = desk_config();
  const CollocationSet a = build_collocation_set(cfg);
  const CollocationSet b = build_collocation_set(cfg);
  REQUIRE(a.total() == b.total());
  for (std::size_t i = 0; i < a.domain.size(); ++i) {
    REQUIRE(a.domain[i].x == b.domain[i].x);
    REQUIRE(a.domain[i].y == b.domain[i].y);
    REQUIRE(a.domain[i].z == b.domain[i].z);
    REQUIRE(a.domain[i].t == b.domain[i].t);
  }
  RunConfig other = cfg;
  other.sampling.seed = 1;
  const CollocationSet c = build_collocation_set(other);
  CHECK(c.domain[0].x != a.domain[0].x);
}

TEST_CASE("boundary points lie on their face and carry the outward normal") {
  const RunConfig cfg = desk_config();
  const CollocationSet set = build_collocation_set(cfg);
  const DomainSpec& d = cfg.domain;
  for (const auto& p : set.boundary) {
    switch (p.face) {
      case Face::kPlusX: REQUIRE(p.x == d.lx); break;
      case Face::kMinusX: REQUIRE(p.x == 0.0); break;
      case Face::kPlusY: REQUIRE(p.y == d.ly); break;
      case Face::kMinusY: REQUIRE(p.y == 0.0); break;
      case Face::kPlusZ: REQUIRE(p.z == d.lz); break;
      case Face::kMinusZ: REQUIRE(p.z == 0.0); break;
      case Face::kNone: REQUIRE(false);
    }
    const auto n = face_normal(p.face);
    const double len = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    REQUIRE(len == 1.0);
  }
  // Outward direction spot check.
  CHECK(face_normal(Face::kPlusX)[0] == 1.0);
  CHECK(face_normal(Face::kMinusZ)[2] == -1.0);
}

TEST_CASE("every point stays inside the plate box") {
  const RunConfig cfg = desk_config();
  const CollocationSet set = build_collocation_set(cfg);
  const DomainSpec& d = cfg.domain;
  auto inside = [&](const CollocationPoint& p) {
    return p.x >= 0 && p.x <= d.lx && p.y >= 0 && p.y <= d.ly && p.z >= 0 &&
           p.z <= d.lz && p.t >= 0 && p.t <= d.t_end;
  };
  for (const auto& p : set.initial) REQUIRE(inside(p));
  for (const auto& p : set.domain) REQUIRE(inside(p));
  for (const auto& p : set.boundary) REQUIRE(inside(p));
}

TEST_CASE("source-following points stay inside the scaled ellipsoid") {
  const RunConfig cfg = desk_config();
  const CollocationSet set = build_collocation_set(cfg);
  const GoldakParams& g = cfg.goldak;
  const double r = cfg.sampling.ellipsoid_scale;
  std::size_t seen = 0;
  for (const auto& p : set.domain) {
    if (p.label != PointLabel::kSourceFollowing) continue;
    ++seen;
    const double xs = g.x0 + g.velocity * p.t;
    const double ex = (p.x - xs) / (r * g.a_r);
    const double ey = (p.y - g.y0) / (r * g.b);
    const double ez = (p.z - cfg.domain.lz) / (r * g.c);
    REQUIRE(ex * ex + ey * ey + ez * ez <= 1.0 + 1e-12);
    REQUIRE(p.z <= cfg.domain.lz);
  }
  CHECK(seen == set.n_source_following);
  CHECK(seen == 6 * 600);  // 10% of 64 per step
}

TEST_CASE("zero counts for a required category are rejected") {
  RunConfig cfg = desk_config();
  cfg.sampling.n_boundary = 0;
  CHECK_THROWS_AS(build_collocation_set(cfg), ConfigError);
  cfg = desk_config();
  cfg.sampling.n_domain = 0;
  cfg.sampling.source_per_step = 0;
  CHECK_THROWS_AS(build_collocation_set(cfg), ConfigError);
}
