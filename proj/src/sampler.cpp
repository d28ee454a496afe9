#include "arcpinn/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "arcpinn/sobol.hpp"

namespace arcpinn {

std::array<double, 3> face_normal(Face f) {
  switch (f) {
    case Face::kPlusX: return {1, 0, 0};
    case Face::kMinusX: return {-1, 0, 0};
    case Face::kPlusY: return {0, 1, 0};
    case Face::kMinusY: return {0, -1, 0};
    case Face::kPlusZ: return {0, 0, 1};
    case Face::kMinusZ: return {0, 0, -1};
    case Face::kNone: break;
  }
  return {0, 0, 0};
}

const char* label_name(PointLabel l) {
  switch (l) {
    case PointLabel::kInitial: return "initial";
    case PointLabel::kDomain: return "domain";
    case PointLabel::kBoundary: return "boundary";
    case PointLabel::kSourceFollowing: return "source";
  }
  return "?";
}

const char* face_name(Face f) {
  switch (f) {
    case Face::kPlusX: return "+x";
    case Face::kMinusX: return "-x";
    case Face::kPlusY: return "+y";
    case Face::kMinusY: return "-y";
    case Face::kPlusZ: return "+z";
    case Face::kMinusZ: return "-z";
    case Face::kNone: return "";
  }
  return "";
}

double apply_z_warp(double z_unit, double exponent) {
  if (exponent <= 0) throw NumericError("z-warp exponent must be positive");
  if (z_unit < 0 || z_unit > 1)
    throw NumericError("z-warp input outside [0,1]");
  return std::pow(z_unit, 1.0 / exponent);
}

std::vector<std::int64_t> apportion(std::int64_t total, std::int64_t steps) {
  std::vector<std::int64_t> out(steps);
  std::int64_t prev = 0;
  for (std::int64_t i = 0; i < steps; ++i) {
    const std::int64_t cum = std::llround(
        static_cast<double>(total) * static_cast<double>(i + 1) /
        static_cast<double>(steps));
    out[i] = cum - prev;
    prev = cum;
  }
  return out;
}

namespace {

// Largest-remainder split of `count` over the six faces, proportional to
// face area. Ties go to the lower face index.
std::array<std::int64_t, 6> split_faces(std::int64_t count,
                                        const DomainSpec& d) {
  const double area[6] = {d.ly * d.lz, d.ly * d.lz, d.lx * d.lz,
                          d.lx * d.lz, d.lx * d.ly, d.lx * d.ly};
  const double total = 2.0 * (area[0] + area[2] + area[4]);
  std::array<std::int64_t, 6> n{};
  double frac[6];
  std::int64_t assigned = 0;
  for (int f = 0; f < 6; ++f) {
    const double q = count * area[f] / total;
    n[f] = static_cast<std::int64_t>(std::floor(q));
    frac[f] = q - static_cast<double>(n[f]);
    assigned += n[f];
  }
  std::array<int, 6> order = {0, 1, 2, 3, 4, 5};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::int64_t r = 0; r < count - assigned; ++r) ++n[order[r % 6]];
  return n;
}

std::int64_t scaled(std::int64_t n, double scale) {
  return std::llround(static_cast<double>(n) * scale);
}

}  // namespace

CollocationSet build_collocation_set(const RunConfig& cfg) {
  const DomainSpec& dom = cfg.domain;
  const SamplingSpec& sp = cfg.sampling;
  const GoldakParams& gp = cfg.goldak;

  const double steps_f = dom.t_end / sp.dt;
  const std::int64_t steps = std::llround(steps_f);
  if (std::abs(steps_f - static_cast<double>(steps)) > 1e-9)
    throw ConfigError("sampling.dt does not divide t_end");

  const std::int64_t n_boundary = scaled(sp.n_boundary, sp.scale);
  const std::int64_t n_domain_total = scaled(sp.n_domain, sp.scale);
  const std::int64_t n_initial = scaled(sp.n_initial, sp.scale);
  const std::int64_t src_per_step = scaled(sp.source_per_step, sp.scale);
  const std::int64_t n_source = src_per_step * steps;
  const std::int64_t n_domain_sobol = n_domain_total - n_source;

  if (n_boundary <= 0)
    throw ConfigError("boundary collocation count is zero");
  if (n_domain_sobol < 0)
    throw ConfigError(
        "source-following points exceed the requested domain count");
  if (n_domain_total <= 0)
    throw ConfigError("domain collocation count is zero");

  CollocationSet set;
  set.seed = sp.seed;
  set.spec = sp;
  set.initial.reserve(n_initial);
  set.boundary.reserve(n_boundary);
  set.domain.reserve(n_domain_total);

  // One continuous stream; every point of every category consumes one draw.
  // The seed offsets the start index so distinct seeds give distinct sets.
  SobolStream stream(8, 1 + sp.seed);

  // Initial block: spatial samples at t = 0 (dims 0..2, no warp).
  for (std::int64_t i = 0; i < n_initial; ++i) {
    const auto u = stream.next();
    set.initial.push_back({u[0] * dom.lx, u[1] * dom.ly, u[2] * dom.lz, 0.0,
                           PointLabel::kInitial});
  }

  const auto per_step_domain = apportion(n_domain_sobol, steps);
  const auto per_step_boundary = apportion(n_boundary, steps);

  for (std::int64_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s + 1) * sp.dt;

    // Domain points: dims 0..2, z warped toward the top surface.
    for (std::int64_t i = 0; i < per_step_domain[s]; ++i) {
      const auto u = stream.next();
      const double zw = apply_z_warp(u[2], sp.z_warp_exponent);
      set.domain.push_back({u[0] * dom.lx, u[1] * dom.ly, zw * dom.lz, t,
                            PointLabel::kDomain});
    }

    // Source-following points: dims 5..7 mapped into the lower half of a
    // scaled source ellipsoid, squeezed per axis to stay inside the plate.
    const double xs = std::clamp(gp.x0 + gp.velocity * t, 0.0, dom.lx);
    const double ys = std::clamp(gp.y0, 0.0, dom.ly);
    const double rx = sp.ellipsoid_scale * gp.a_r;
    const double ry = sp.ellipsoid_scale * gp.b;
    const double rz = sp.ellipsoid_scale * gp.c;
    const double ax_m = std::min(rx, xs - 0.0), ax_p = std::min(rx, dom.lx - xs);
    const double ay_m = std::min(ry, ys - 0.0), ay_p = std::min(ry, dom.ly - ys);
    const double az_m = std::min(rz, dom.lz);
    for (std::int64_t i = 0; i < src_per_step; ++i) {
      const auto u = stream.next();
      const double rad = std::cbrt(u[5]);
      const double phi = 2.0 * M_PI * u[6];
      const double cpsi = -u[7];  // lower half-ball
      const double spsi = std::sqrt(std::max(0.0, 1.0 - cpsi * cpsi));
      const double bx = rad * spsi * std::cos(phi);
      const double by = rad * spsi * std::sin(phi);
      const double bz = rad * cpsi;
      const double x = xs + (bx < 0 ? ax_m : ax_p) * bx;
      const double y = ys + (by < 0 ? ay_m : ay_p) * by;
      const double z = dom.lz + az_m * bz;
      set.domain.push_back({x, y, z, t, PointLabel::kSourceFollowing});
      ++set.n_source_following;
    }

    // Boundary points: dims 3..4 mapped onto each face plane.
    const auto on_face = split_faces(per_step_boundary[s], dom);
    for (int f = 0; f < 6; ++f) {
      const Face face = static_cast<Face>(f);
      for (std::int64_t i = 0; i < on_face[f]; ++i) {
        const auto u = stream.next();
        CollocationPoint p{0, 0, 0, t, PointLabel::kBoundary, face};
        switch (face) {
          case Face::kPlusX:
            p.x = dom.lx; p.y = u[3] * dom.ly; p.z = u[4] * dom.lz; break;
          case Face::kMinusX:
            p.x = 0.0; p.y = u[3] * dom.ly; p.z = u[4] * dom.lz; break;
          case Face::kPlusY:
            p.y = dom.ly; p.x = u[3] * dom.lx; p.z = u[4] * dom.lz; break;
          case Face::kMinusY:
            p.y = 0.0; p.x = u[3] * dom.lx; p.z = u[4] * dom.lz; break;
          case Face::kPlusZ:
            p.z = dom.lz; p.x = u[3] * dom.lx; p.y = u[4] * dom.ly; break;
          case Face::kMinusZ:
            p.z = 0.0; p.x = u[3] * dom.lx; p.y = u[4] * dom.ly; break;
          case Face::kNone: break;
        }
        set.boundary.push_back(p);
      }
    }
  }

  return set;
}

void write_collocation_csv(std::ostream& out, const CollocationSet& set) {
  out << "x,y,z,t,label,face\n";
  char buf[160];
  auto emit = [&](const CollocationPoint& p) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%s,%s\n", p.x,
                  p.y, p.z, p.t, label_name(p.label), face_name(p.face));
    out << buf;
  };
  for (const auto& p : set.initial) emit(p);
  for (const auto& p : set.domain) emit(p);
  for (const auto& p : set.boundary) emit(p);
}

}  // namespace arcpinn
