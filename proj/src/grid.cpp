#include "arcpinn/grid.hpp"

#include <algorithm>
#include <cmath>

#include "arcpinn/common.hpp"

namespace arcpinn {

namespace {

int lattice_count(double extent, double step, const char* what) {
  const double n = extent / step;
  const long long r = std::llround(n);
  if (r < 1 || std::abs(n - static_cast<double>(r)) > 1e-9)
    throw ConfigError(std::string(what) + " must divide the extent");
  return static_cast<int>(r) + 1;
}

}  // namespace

void GridSpec::validate(const DomainSpec& dom) const {
  if (dx <= 0 || dt <= 0) throw ConfigError("grid spacing must be positive");
  lattice_count(dom.lx, dx, "grid dx");
  lattice_count(dom.ly, dx, "grid dx");
  lattice_count(dom.lz, dx, "grid dx");
  lattice_count(dom.t_end, dt, "grid dt");
}

TemperatureGrid make_grid(const DomainSpec& dom, const GridSpec& spec,
                          const std::vector<double>& times) {
  spec.validate(dom);
  TemperatureGrid g;
  g.nx = lattice_count(dom.lx, spec.dx, "grid dx");
  g.ny = lattice_count(dom.ly, spec.dx, "grid dx");
  g.nz = lattice_count(dom.lz, spec.dx, "grid dx");
  g.dx = spec.dx;
  g.times = times;
  g.data.assign(times.size() * g.nodes(), 0.0);
  return g;
}

bool TemperatureGrid::same_lattice(const TemperatureGrid& o,
                                   double tol) const {
  if (nx != o.nx || ny != o.ny || nz != o.nz) return false;
  if (std::abs(dx - o.dx) > tol) return false;
  if (times.size() != o.times.size()) return false;
  for (std::size_t s = 0; s < times.size(); ++s)
    if (std::abs(times[s] - o.times[s]) > tol) return false;
  return true;
}

double TemperatureGrid::sample_slice(std::size_t s, double x, double y,
                                     double z) const {
  auto locate = [&](double v, int n) {
    double u = v / dx;
    int i0 = static_cast<int>(std::floor(u));
    i0 = std::clamp(i0, 0, n - 2);
    return std::pair<int, double>(i0, std::clamp(u - i0, 0.0, 1.0));
  };
  const auto [i0, fx] = locate(x, nx);
  const auto [j0, fy] = locate(y, ny);
  const auto [k0, fz] = locate(z, nz);
  double acc = 0.0;
  for (int dk = 0; dk < 2; ++dk)
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) {
        const double w = (di ? fx : 1 - fx) * (dj ? fy : 1 - fy) *
                         (dk ? fz : 1 - fz);
        acc += w * at(s, i0 + di, j0 + dj, k0 + dk);
      }
  return acc;
}

double TemperatureGrid::sample(double x, double y, double z, double t) const {
  if (times.empty()) throw NumericError("sampling an empty grid");
  if (times.size() == 1) return sample_slice(0, x, y, z);
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t s1 = std::clamp<std::size_t>(it - times.begin(), 1,
                                           times.size() - 1);
  const std::size_t s0 = s1 - 1;
  const double t0 = times[s0], t1 = times[s1];
  const double f = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
  return (1 - f) * sample_slice(s0, x, y, z) + f * sample_slice(s1, x, y, z);
}

}  // namespace arcpinn
