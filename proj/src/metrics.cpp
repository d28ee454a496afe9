#include "arcpinn/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "arcpinn/common.hpp"

namespace arcpinn {

namespace {

void require_same_lattice(const TemperatureGrid& a, const TemperatureGrid& b) {
  if (!a.same_lattice(b))
    throw NumericError("comparison lattices do not match");
}

}  // namespace

double relative_l2(const TemperatureGrid& pred, const TemperatureGrid& ref) {
  require_same_lattice(pred, ref);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i) {
    const double d = pred.data[i] - ref.data[i];
    num += d * d;
    den += ref.data[i] * ref.data[i];
  }
  if (den == 0) return num == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num) / std::sqrt(den);
}

std::vector<double> per_slice_l2(const TemperatureGrid& pred,
                                 const TemperatureGrid& ref) {
  require_same_lattice(pred, ref);
  std::vector<double> out(ref.times.size());
  const std::size_t n = ref.nodes();
  for (std::size_t s = 0; s < ref.times.size(); ++s) {
    double num = 0.0, den = 0.0;
    const double* p = pred.slice(s);
    const double* r = ref.slice(s);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = p[i] - r[i];
      num += d * d;
      den += r[i] * r[i];
    }
    out[s] = den == 0 ? 0.0 : std::sqrt(num) / std::sqrt(den);
  }
  return out;
}

double max_abs_diff(const TemperatureGrid& pred, const TemperatureGrid& ref) {
  require_same_lattice(pred, ref);
  double m = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i)
    m = std::max(m, std::abs(pred.data[i] - ref.data[i]));
  return m;
}

double max_percent_error(const TemperatureGrid& pred,
                         const TemperatureGrid& ref) {
  require_same_lattice(pred, ref);
  double m = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i) {
    const double floor = std::max(std::abs(ref.data[i]), 1.0);
    m = std::max(m, std::abs(pred.data[i] - ref.data[i]) / floor);
  }
  return m;
}

TemperatureGrid evaluate_on_grid(const Checkpoint& ckpt, const GridSpec& spec,
                                 const std::vector<double>& times,
                                 int threads) {
  TemperatureGrid g = make_grid(ckpt.domain, spec, times);
  const std::size_t n = g.nodes();
  const DomainSpec& dom = ckpt.domain;

  // One block per (slice, z-plane): deterministic partition, value-only
  // batched forward per block.
  const std::size_t planes = times.size() * g.nz;
  parallel_blocks(planes, threads, [&](std::size_t blk) {
    const std::size_t s = blk / g.nz;
    const int k = static_cast<int>(blk % g.nz);
    const double t = times[s];
    const double tau = t / dom.t_end;
    Eigen::MatrixXd in(4, g.nx * g.ny);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto q = normalize_point(
            {i * g.dx, j * g.dx, k * g.dx, t}, dom);
        in.col(j * g.nx + i) << q[0], q[1], q[2], q[3];
      }
    const Eigen::VectorXd raw = forward_batch(ckpt.params, in);
    double* slice = g.slice(s);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double sp = softplus_derivs(raw[j * g.nx + i]).value;
        slice[g.index(i, j, k)] =
            ckpt.transform.t_ambient + tau * ckpt.transform.delta_t * sp;
      }
  });
  return g;
}

ProbeTable probe_history(const TemperatureGrid& grid,
                         const std::vector<std::array<double, 3>>& probes,
                         const std::vector<double>& times) {
  ProbeTable t;
  t.probes = probes;
  t.times = times;
  for (double tv : times) {
    std::vector<double> row;
    row.reserve(probes.size());
    for (const auto& p : probes) row.push_back(grid.sample(p[0], p[1], p[2], tv));
    t.values.push_back(std::move(row));
  }
  return t;
}

ProbeTable probe_history(const Checkpoint& ckpt,
                         const std::vector<std::array<double, 3>>& probes,
                         const std::vector<double>& times) {
  ProbeTable t;
  t.probes = probes;
  t.times = times;
  for (double tv : times) {
    std::vector<double> row;
    row.reserve(probes.size());
    for (const auto& p : probes)
      row.push_back(temperature(ckpt.params, ckpt.transform, ckpt.domain,
                                {p[0], p[1], p[2], tv}));
    t.values.push_back(std::move(row));
  }
  return t;
}

PathProfile path_profile(const TemperatureGrid& grid, double t, double y0,
                         double z0, double lx, int samples) {
  if (samples < 2) throw NumericError("path profile needs >= 2 samples");
  PathProfile p;
  p.t = t;
  for (int i = 0; i < samples; ++i) {
    const double x = lx * static_cast<double>(i) / (samples - 1);
    p.x.push_back(x);
    p.temperature.push_back(grid.sample(x, y0, z0, t));
  }
  return p;
}

PathProfile path_profile(const Checkpoint& ckpt, double t, double y0,
                         double z0, int samples) {
  if (samples < 2) throw NumericError("path profile needs >= 2 samples");
  PathProfile p;
  p.t = t;
  for (int i = 0; i < samples; ++i) {
    const double x = ckpt.domain.lx * static_cast<double>(i) / (samples - 1);
    p.x.push_back(x);
    p.temperature.push_back(temperature(ckpt.params, ckpt.transform,
                                        ckpt.domain, {x, y0, z0, t}));
  }
  return p;
}

ComparisonReport compare_fields(const Checkpoint& ckpt,
                                const TemperatureGrid& ref,
                                const RunConfig& cfg, double threshold,
                                int threads) {
  GridSpec spec{ref.dx, ref.times.size() > 1 ? ref.times[1] - ref.times[0]
                                             : cfg.domain.t_end};
  const TemperatureGrid pred =
      evaluate_on_grid(ckpt, spec, ref.times, threads);

  ComparisonReport rep;
  rep.relative_l2 = relative_l2(pred, ref);
  rep.slice_times = ref.times;
  rep.slice_l2 = per_slice_l2(pred, ref);
  rep.max_abs_diff = max_abs_diff(pred, ref);
  rep.max_percent_error = max_percent_error(pred, ref);
  rep.threshold = threshold;
  rep.pass = rep.relative_l2 <= threshold;

  // Probe histories at every reference time; path profiles at the
  // configured comparison times.
  rep.pred_probes = probe_history(ckpt, cfg.probes.points, ref.times);
  rep.ref_probes = probe_history(ref, cfg.probes.points, ref.times);
  const int n_path = 161;
  for (double t : cfg.probes.times) {
    rep.pred_paths.push_back(
        path_profile(ckpt, t, cfg.goldak.y0, cfg.domain.lz, n_path));
    rep.ref_paths.push_back(path_profile(ref, t, cfg.goldak.y0, cfg.domain.lz,
                                         cfg.domain.lx, n_path));
  }
  return rep;
}

std::string report_to_json(const ComparisonReport& r) {
  nlohmann::json j;
  j["relative_l2"] = r.relative_l2;
  j["max_abs_diff"] = r.max_abs_diff;
  j["max_percent_error"] = r.max_percent_error;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  j["slices"] = nlohmann::json::array();
  for (std::size_t s = 0; s < r.slice_times.size(); ++s)
    j["slices"].push_back({{"t", r.slice_times[s]}, {"l2", r.slice_l2[s]}});
  auto probes_json = [](const ProbeTable& t) {
    nlohmann::json p;
    p["points"] = t.probes;
    p["times"] = t.times;
    p["values"] = t.values;
    return p;
  };
  j["probes"] = {{"pred", probes_json(r.pred_probes)},
                 {"ref", probes_json(r.ref_probes)}};
  auto paths_json = [](const std::vector<PathProfile>& ps) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : ps)
      out.push_back({{"t", p.t}, {"x", p.x}, {"temperature", p.temperature}});
    return out;
  };
  j["paths"] = {{"pred", paths_json(r.pred_paths)},
                {"ref", paths_json(r.ref_paths)}};
  return j.dump(2);
}

std::string report_summary(const ComparisonReport& r) {
  std::ostringstream o;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "relative L2:        %.6g\n", r.relative_l2);
  o << buf;
  std::snprintf(buf, sizeof(buf), "max |diff|:         %.6g degC\n",
                r.max_abs_diff);
  o << buf;
  std::snprintf(buf, sizeof(buf), "max percent error:  %.6g\n",
                r.max_percent_error);
  o << buf;
  std::snprintf(buf, sizeof(buf), "threshold:          %.6g -> %s\n",
                r.threshold, r.pass ? "PASS" : "FAIL");
  o << buf;
  return o.str();
}

}  // namespace arcpinn
