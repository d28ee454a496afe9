#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "arcpinn/common.hpp"
#include "arcpinn/sobol.hpp"

using namespace arcpinn;

namespace {

// Base-2 radical inverse (van der Corput), the oracle for dimension 0.
double radical_inverse_2(std::uint64_t n) {
  double v = 0.0, base = 0.5;
  while (n) {
    if (n & 1) v += base;
    base *= 0.5;
    n >>= 1;
  }
  return v;
}

// Star-discrepancy proxy over a fixed grid of anchored boxes.
double discrepancy_2d(const std::vector<std::array<double, 2>>& pts,
                      int grid = 32) {
  const double n = static_cast<double>(pts.size());
  double worst = 0.0;
  for (int a = 1; a <= grid; ++a)
    for (int b = 1; b <= grid; ++b) {
      const double ax = static_cast<double>(a) / grid;
      const double by = static_cast<double>(b) / grid;
      std::size_t inside = 0;
      for (const auto& p : pts) inside += (p[0] < ax && p[1] < by) ? 1 : 0;
      worst = std::max(worst, std::abs(inside / n - ax * by));
    }
  return worst;
}

// Exact 1D star discrepancy of a point set.
double discrepancy_1d(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    worst = std::max(worst, xs[i] - static_cast<double>(i) / n);
    worst = std::max(worst, static_cast<double>(i + 1) / n - xs[i]);
  }
  return worst;
}

}  // namespace

TEST_CASE("dimension 0 equals the base-2 radical inverse") {
  SobolStream s(1);
  CHECK(s.at(0)[0] == 0.0);  // origin point, skipped by default streams
  CHECK(s.at(1)[0] == 0.5);
  CHECK(s.at(2)[0] == 0.25);
  CHECK(s.at(3)[0] == 0.75);
  for (std::uint64_t i = 1; i <= 4096; ++i)
    REQUIRE(s.at(i)[0] == radical_inverse_2(i));
}

TEST_CASE("streams start past the origin and advance deterministically") {
  SobolStream s(4);
  CHECK(s.index() == 1);
  const auto p1 = s.next();
  CHECK(p1[0] == 0.5);
  CHECK(s.index() == 2);
  SobolStream again(4);
  const auto q1 = again.next();
  for (int d = 0; d < 4; ++d) CHECK(p1[d] == q1[d]);
}

TEST_CASE("dimension count beyond the table is rejected") {
  CHECK_THROWS_AS(SobolStream(9), NumericError);
  CHECK_THROWS_AS(SobolStream(0), NumericError);
}

TEST_CASE("2D prefix beats the median pseudo-random discrepancy") {
  SobolStream s(2);
  std::vector<std::array<double, 2>> sobol_pts;
  for (int i = 0; i < 1024; ++i) {
    const auto p = s.next();
    sobol_pts.push_back({p[0], p[1]});
  }
  const double d_sobol = discrepancy_2d(sobol_pts);

  std::vector<double> d_random;
  for (int rep = 0; rep < 10; ++rep) {
    Rng rng(1000 + rep);
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 1024; ++i) pts.push_back({rng.uniform(), rng.uniform()});
    d_random.push_back(discrepancy_2d(pts));
  }
  std::sort(d_random.begin(), d_random.end());
  const double median = 0.5 * (d_random[4] + d_random[5]);
  CAPTURE(d_sobol);
  CAPTURE(median);
  CHECK(d_sobol < median);
}

TEST_CASE("axis projections of 4D prefixes stay low-discrepancy") {
  const int n = 4096;
  SobolStream s4(4);
  std::vector<std::vector<double>> proj(4);
  for (int i = 0; i < n; ++i) {
    const auto p = s4.next();
    for (int d = 0; d < 4; ++d) proj[d].push_back(p[d]);
  }
  SobolStream s1(1);
  std::vector<double> base;
  for (int i = 0; i < n; ++i) base.push_back(s1.next()[0]);
  const double d_base = discrepancy_1d(base);
  for (int d = 0; d < 4; ++d) {
    const double dd = discrepancy_1d(proj[d]);
    CAPTURE(d);
    CHECK(dd <= 2.0 * d_base);
  }
}

TEST_CASE("random access matches sequential generation") {
  SobolStream s(8);
  SobolStream seq(8);
  for (int i = 0; i < 100; ++i) {
    const auto a = seq.next();
    const auto b = s.at(static_cast<std::uint64_t>(i) + 1);
    for (int d = 0; d < 8; ++d) REQUIRE(a[d] == b[d]);
  }
  s.seek(51);
  CHECK(s.next()[0] == s.at(51)[0]);
}
