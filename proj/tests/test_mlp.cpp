#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "arcpinn/common.hpp"
#include "arcpinn/mlp.hpp"
#include "test_util.hpp"

using namespace arcpinn;
using testutil::rel_err;

namespace {

std::array<double, 4> random_input(Rng& rng) {
  return {2 * rng.uniform() - 1, 2 * rng.uniform() - 1, 2 * rng.uniform() - 1,
          2 * rng.uniform() - 1};
}

}  // namespace

TEST_CASE("initialization statistics match the gain rule") {
  const MlpParams p = init_params(11, 4, 4, 64, 1);
  // 64 x 64 layer -> 4096 draws with std 1.48 / 8.
  const auto w = p.weights(1);
  double mean = 0.0, ssq = 0.0;
  for (int r = 0; r < w.rows(); ++r)
    for (int c = 0; c < w.cols(); ++c) mean += w(r, c);
  mean /= static_cast<double>(w.size());
  for (int r = 0; r < w.rows(); ++r)
    for (int c = 0; c < w.cols(); ++c) {
      const double d = w(r, c) - mean;
      ssq += d * d;
    }
  const double stddev = std::sqrt(ssq / static_cast<double>(w.size() - 1));
  CHECK(stddev == doctest::Approx(1.48 / 8.0).epsilon(0.05));

  for (std::size_t l = 0; l < p.layer_count(); ++l)
    CHECK(p.biases(l).cwiseAbs().maxCoeff() == 0.0);

  const MlpParams q = init_params(11, 4, 4, 64, 1);
  REQUIRE(p.data.size() == q.data.size());
  for (Eigen::Index i = 0; i < p.data.size(); ++i)
    REQUIRE(p.data[i] == q.data[i]);
  const MlpParams other = init_params(12, 4, 4, 64, 1);
  CHECK(other.data[0] != p.data[0]);
}

TEST_CASE("gelu value and derivatives at anchor points") {
  const auto g0 = gelu_derivs(0.0);
  CHECK(g0.value == 0.0);
  CHECK(g0.d1 == 0.5);
  CHECK(g0.d2 == doctest::Approx(0.7978845608028654).epsilon(1e-12));
  CHECK(g0.d3 == 0.0);

  const auto gp = gelu_derivs(20.0);
  CHECK(gp.value == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(gp.d1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(gp.d2) < 1e-12);

  const auto gn = gelu_derivs(-20.0);
  CHECK(std::abs(gn.value) < 1e-12);
  CHECK(std::abs(gn.d1) < 1e-12);

  CHECK(gelu_jet(1.0)[0] == doctest::Approx(0.8413447460685429).epsilon(1e-14));
}

TEST_CASE("gelu derivatives agree with central differences") {
  Rng rng(5);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const double x = 6.0 * rng.uniform() - 3.0;
    const auto g = gelu_derivs(x);
    const double fd1 =
        (gelu_derivs(x + h).value - gelu_derivs(x - h).value) / (2 * h);
    const double fd2 = (gelu_derivs(x + h).d1 - gelu_derivs(x - h).d1) / (2 * h);
    const double fd3 = (gelu_derivs(x + h).d2 - gelu_derivs(x - h).d2) / (2 * h);
    CHECK(rel_err(g.d1, fd1, 1e-6) <= 1e-8);
    CHECK(rel_err(g.d2, fd2, 1e-6) <= 1e-7);
    CHECK(rel_err(g.d3, fd3, 1e-6) <= 1e-6);
  }
}

TEST_CASE("softplus derivatives are a consistent sigmoid chain") {
  Rng rng(6);
  const double h = 1e-5;
  for (int i = 0; i < 50; ++i) {
    const double x = 40.0 * rng.uniform() - 20.0;
    const auto s = softplus_derivs(x);
    CHECK(s.value >= 0.0);
    const double fd1 =
        (softplus_derivs(x + h).value - softplus_derivs(x - h).value) / (2 * h);
    CHECK(rel_err(s.d1, fd1, 1e-6) <= 1e-7);
  }
  CHECK(softplus_derivs(800.0).value == 800.0);     // stable overflow path
  CHECK(softplus_derivs(-800.0).value == 0.0);
}

TEST_CASE("zero network maps everything to zero") {
  const MlpParams p = MlpParams::make(4, 4, 64, 1);
  Rng rng(9);
  for (int i = 0; i < 10; ++i)
    CHECK(forward(p, random_input(rng)) == 0.0);
}

TEST_CASE("rigged single hidden neuron reproduces gelu") {
  MlpParams p = MlpParams::make(4, 1, 1, 1);
  p.weights(0)(0, 0) = 1.0;  // picks up the x input
  p.weights(1)(0, 0) = 1.0;
  const double out = forward(p, {1, 0, 0, 0});
  CHECK(out == doctest::Approx(0.8413447460685429).epsilon(1e-14));
}

TEST_CASE("forward equals the jet value channel bitwise") {
  Rng rng(21);
  for (int net = 0; net < 10; ++net) {
    const MlpParams p = init_params(100 + net, 4, 3, 16, 1);
    for (int i = 0; i < 100; ++i) {
      const auto x = random_input(rng);
      REQUIRE(forward(p, x) == forward_jet(p, x).value);
    }
  }
}

TEST_CASE("jet first and second derivatives match finite differences") {
  Rng rng(33);
  const double h = 1e-3;
  // Richardson-extrapolated central differences (h and h/2) keep the
  // oracle's truncation error well below the tolerance being checked.
  auto central1 = [](auto&& f, double step) {
    return (f(step) - f(-step)) / (2 * step);
  };
  auto central2 = [](auto&& f, double step) {
    return (f(step) - 2 * f(0.0) + f(-step)) / (step * step);
  };
  for (int net = 0; net < 100; ++net) {
    const MlpParams p = init_params(500 + net, 4, 2, 8, 1);
    const auto x0 = random_input(rng);
    const Jet jet = forward_jet(p, x0);
    const double scale =
        std::max({std::abs(jet.grad[0]), std::abs(jet.grad[1]),
                  std::abs(jet.grad[2]), std::abs(jet.grad[3]), 1e-3});
    for (int d = 0; d < 4; ++d) {
      auto f = [&](double step) {
        auto x = x0;
        x[d] += step;
        return forward(p, x);
      };
      const double fd =
          (4 * central1(f, h / 2) - central1(f, h)) / 3.0;
      CAPTURE(net);
      CAPTURE(d);
      CHECK(rel_err(jet.grad[d], fd, 1e-3 * scale) <= 1e-4);
    }
    for (int e = 0; e < 3; ++e) {
      auto f = [&](double step) {
        auto x = x0;
        x[e] += step;
        return forward(p, x);
      };
      const double fd =
          (4 * central2(f, h / 2) - central2(f, h)) / 3.0;
      CAPTURE(net);
      CAPTURE(e);
      CHECK(rel_err(jet.lap[e], fd, 1e-2 * scale) <= 1e-3);
    }
  }
}

TEST_CASE("identity activation zeroes all second derivatives") {
  MlpParams p = init_params(77, 4, 3, 16, 1);
  p.activation = Activation::kIdentity;
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const Jet jet = forward_jet(p, random_input(rng));
    for (int e = 0; e < 3; ++e) REQUIRE(jet.lap[e] == 0.0);
  }
}

TEST_CASE("output transform enforces the initial condition exactly") {
  const DomainSpec dom;
  const OutputTransform xf{25.0, 2000.0};
  Rng rng(13);
  for (int set = 0; set < 10; ++set) {
    const MlpParams p = init_params(900 + set, 4, 4, 64, 1);
    for (int i = 0; i < 1000; ++i) {
      const std::array<double, 4> phys = {rng.uniform() * dom.lx,
                                          rng.uniform() * dom.ly,
                                          rng.uniform() * dom.lz, 0.0};
      const Jet u = temperature_jet(p, xf, dom, phys);
      REQUIRE(u.value == 25.0);  // machine-exact hard constraint
    }
  }
}

TEST_CASE("transformed output never falls below ambient") {
  const DomainSpec dom;
  const OutputTransform xf{25.0, 2000.0};
  Rng rng(14);
  for (int set = 0; set < 5; ++set) {
    const MlpParams p = init_params(1300 + set, 4, 4, 32, 1);
    for (int i = 0; i < 500; ++i) {
      const std::array<double, 4> phys = {
          rng.uniform() * dom.lx, rng.uniform() * dom.ly,
          rng.uniform() * dom.lz, rng.uniform() * dom.t_end};
      CHECK(temperature(p, xf, dom, phys) >= 25.0);
    }
  }
  // Softplus floor: a strongly negative raw output approaches ambient.
  Jet raw;
  raw.value = -200.0;
  const Jet u = apply_output_transform(raw, {1, 1, 1, dom.t_end}, xf, dom);
  CHECK(u.value == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("transform derivative channels agree with finite differences") {
  const DomainSpec dom;
  const OutputTransform xf{25.0, 2000.0};
  Rng rng(15);
  const MlpParams p = init_params(4242, 4, 4, 32, 1);
  auto temp_at = [&](std::array<double, 4> phys) {
    return temperature(p, xf, dom, phys);
  };
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    std::array<double, 4> phys = {
        (0.1 + 0.8 * rng.uniform()) * dom.lx,
        (0.1 + 0.8 * rng.uniform()) * dom.ly,
        (0.1 + 0.8 * rng.uniform()) * dom.lz,
        (0.1 + 0.8 * rng.uniform()) * dom.t_end};
    const Jet u = temperature_jet(p, xf, dom, phys);
    const double ht = 1e-4 * dom.t_end;  // finite difference across tau
    auto tp = phys, tm = phys;
    tp[3] += ht;
    tm[3] -= ht;
    const double fd_t = (temp_at(tp) - temp_at(tm)) / (2 * ht);
    CHECK(rel_err(u.grad[3], fd_t, 1e-3 * std::abs(u.grad[3]) + 1e-6) <= 1e-4);

    const double hx = 1e-4 * dom.lx;
    auto xp = phys, xm = phys;
    xp[0] += hx;
    xm[0] -= hx;
    const double fd_x = (temp_at(xp) - temp_at(xm)) / (2 * hx);
    CHECK(rel_err(u.grad[0], fd_x, 1e-3 * std::abs(u.grad[0]) + 1e-6) <= 1e-4);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("checkpoint round trip is bit exact") {
  const MlpParams p = init_params(2024, 4, 4, 64, 1);
  Checkpoint ckpt{p, {25.0, 2000.0}, {}};
  const std::string path = "/tmp/arcpinn_test.ckpt";
  save_checkpoint(path, ckpt);
  const Checkpoint back = load_checkpoint(path);
  REQUIRE(back.params.data.size() == p.data.size());
  for (Eigen::Index i = 0; i < p.data.size(); ++i)
    REQUIRE(back.params.data[i] == p.data[i]);
  CHECK(back.params.layers.size() == p.layers.size());
  CHECK(back.transform.t_ambient == 25.0);
  CHECK(back.transform.delta_t == 2000.0);
  CHECK(back.domain.lx == 40.0);

  // Corrupt magic.
  std::FILE* f = std::fopen(path.c_str(), "r+b");
  std::fputc('X', f);
  std::fclose(f);
  CHECK_THROWS_AS(load_checkpoint(path), IoError);
  CHECK_THROWS_AS(load_checkpoint("/tmp/definitely_missing.ckpt"), IoError);
}
