#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "arcpinn/common.hpp"
#include "arcpinn/config.hpp"

using namespace arcpinn;

TEST_CASE("defaults reproduce the deposition table") {
  const RunConfig cfg = parse_config("");
  CHECK(cfg.goldak.power == 2.45e12);
  CHECK(cfg.goldak.efficiency == 0.9);
  CHECK(cfg.goldak.velocity == 10.0);
  CHECK(cfg.goldak.a_f == 2.57);
  CHECK(cfg.goldak.f_f + cfg.goldak.f_r == 2.0);
  CHECK(cfg.material.rho == 7.85e-3);
  CHECK(cfg.material.cp == 6.2e8);
  CHECK(cfg.material.k == 4.5e7);
  CHECK(cfg.material.t_ambient == 25.0);
  CHECK(cfg.domain.lx == 40.0);
  CHECK(cfg.goldak.t_on == cfg.domain.t_end);  // active for the whole pass
}

TEST_CASE("empty optional sections still yield full defaults") {
  const RunConfig cfg = parse_config("[goldak]\n\n[training]\n");
  CHECK(cfg.goldak.power == 2.45e12);
  CHECK(cfg.training.adam_epochs == 14850);
  CHECK(cfg.training.lbfgs_epochs == 150);
  CHECK(cfg.training.lbfgs_max_iterations == 50);
  CHECK(cfg.training.lbfgs_max_evaluations == 62);
}

TEST_CASE("invariant violations name the offending field") {
  CHECK_THROWS_WITH_AS(parse_config("[material]\nemissivity = 1.5\n"),
                       doctest::Contains("emissivity"), ConfigError);
  CHECK_THROWS_AS(parse_config("[goldak]\nf_f = 1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[domain]\nlx = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sampling]\ndt = 0.007\n"), ConfigError);
}

TEST_CASE("single override leaves everything else at defaults") {
  const RunConfig cfg = parse_config("[domain]\nlx = 80\n");
  CHECK(cfg.domain.lx == 80.0);
  CHECK(cfg.domain.ly == 6.0);
  CHECK(cfg.goldak.power == 2.45e12);
}

TEST_CASE("parser reports positions and rejects unknown keys") {
  CHECK_THROWS_WITH_AS(parse_config("[material]\nrho 7.85\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("rho = 1\n"),
                       doctest::Contains("before any section"), ConfigError);
  CHECK_THROWS_AS(parse_config("[material]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nope]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[material]\nrho = abc\n"), ConfigError);
}

TEST_CASE("normalization maps corners and midpoint exactly") {
  const DomainSpec dom;  // 40 x 6 x 4 mm, 3 s
  const auto lo = normalize_point({0, 0, 0, 0}, dom);
  const auto mid = normalize_point({20, 3, 2, 1.5}, dom);
  const auto hi = normalize_point({40, 6, 4, 3}, dom);
  for (int i = 0; i < 4; ++i) {
    CHECK(lo[i] == -1.0);
    CHECK(mid[i] == 0.0);
    CHECK(hi[i] == 1.0);
  }
  CHECK_THROWS_AS(normalize_point({41, 0, 0, 0}, dom), NumericError);
}

TEST_CASE("normalize and denormalize compose to the identity") {
  const DomainSpec dom;
  Rng rng(7);
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const std::array<double, 4> p = {rng.uniform() * dom.lx,
                                     rng.uniform() * dom.ly,
                                     rng.uniform() * dom.lz,
                                     rng.uniform() * dom.t_end};
    const auto q = normalize_point(p, dom);
    const auto r = denormalize_point(q, dom);
    const auto q2 = normalize_point(r, dom);
    for (int i = 0; i < 4; ++i)
      worst = std::max(worst, std::abs(q2[i] - q[i]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("serialize -> parse round trip is bit identical") {
  RunConfig cfg = parse_config("");
  cfg.goldak.a_f = 2.5700000000000003;  // exercise the 17-digit path
  cfg.sampling.dt = 0.005;
  cfg.finalize();
  const RunConfig back = parse_config(serialize_config(cfg));
  CHECK(back.goldak.a_f == cfg.goldak.a_f);
  CHECK(back.material.cp == cfg.material.cp);
  CHECK(back.sampling.dt == cfg.sampling.dt);
  CHECK(back.network.delta_t == cfg.network.delta_t);
  CHECK(back.training.adam_lr == cfg.training.adam_lr);
  CHECK(back.training.weight_alpha == cfg.training.weight_alpha);
  CHECK(back.probes.points.size() == cfg.probes.points.size());
  for (std::size_t i = 0; i < cfg.probes.points.size(); ++i)
    for (int d = 0; d < 3; ++d)
      CHECK(back.probes.points[i][d] == cfg.probes.points[i][d]);
}

TEST_CASE("derived constants") {
  const MaterialProps mat;
  const auto d = derived_constants(mat);
  CHECK(d.alpha == 4.5e7 / (7.85e-3 * 6.2e8));  // exact quotient
  CHECK(d.alpha == doctest::Approx(9.246).epsilon(1e-3));
  CHECK(d.sigma_sb == 5.670374419e-5);

  MaterialProps doubled = mat;
  doubled.k *= 2.0;
  CHECK(derived_constants(doubled).alpha == 2.0 * d.alpha);
}

TEST_CASE("front and rear source branches nearly agree at the source plane") {
  const GoldakParams gp;
  const double front = gp.f_f / gp.a_f;
  const double rear = gp.f_r / gp.a_r;
  CHECK(front == doctest::Approx(0.23346).epsilon(1e-4));
  CHECK(rear == doctest::Approx(0.23333).epsilon(1e-4));
  CHECK(std::abs(front - rear) / front < 1e-2);
}

TEST_CASE("seed environment override") {
  setenv("ARCPINN_SEED", "123", 1);
  const RunConfig cfg = parse_config("");
  unsetenv("ARCPINN_SEED");
  CHECK(cfg.sampling.seed == 123);
  const RunConfig cfg2 = parse_config("");
  CHECK(cfg2.sampling.seed == 0);
}

TEST_CASE("resolved residual scales") {
  RunConfig cfg = parse_config("");
  CHECK(cfg.pde_scale() == 1.0 / (7.85e-3 * 6.2e8));
  CHECK(cfg.bc_scale() == 1.0 / 2.0e4);
  cfg = parse_config("[residuals]\nscaling = off\n");
  CHECK(cfg.pde_scale() == 1.0);
  CHECK(cfg.bc_scale() == 1.0);
  cfg = parse_config("[residuals]\nscale_pde = 0.5\nscale_bc = 2\n");
  CHECK(cfg.pde_scale() == 0.5);
  CHECK(cfg.bc_scale() == 2.0);
}
