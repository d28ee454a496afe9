#ifndef ARCPINN_METRICS_HPP
#define ARCPINN_METRICS_HPP

#include <array>
#include <string>
#include <vector>

#include "arcpinn/grid.hpp"
#include "arcpinn/mlp.hpp"

namespace arcpinn {

/// ||pred - ref||_2 / ||ref||_2 pooled over all nodes and stored times.
/// Lattices must match exactly.
double relative_l2(const TemperatureGrid& pred, const TemperatureGrid& ref);

/// Per-slice relative L2, one value per stored time.
std::vector<double> per_slice_l2(const TemperatureGrid& pred,
                                 const TemperatureGrid& ref);

double max_abs_diff(const TemperatureGrid& pred, const TemperatureGrid& ref);

/// Max |pred - ref| / max(|ref|, 1 degC): percent-style error with a
/// documented denominator floor near ambient.
double max_percent_error(const TemperatureGrid& pred,
                         const TemperatureGrid& ref);

/// Evaluates the network temperature on a full lattice.
TemperatureGrid evaluate_on_grid(const Checkpoint& ckpt, const GridSpec& spec,
                                 const std::vector<double>& times,
                                 int threads);

/// One row per time: {t, T_probe1, ..., T_probeN}.
struct ProbeTable {
  std::vector<std::array<double, 3>> probes;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // [time][probe]
};

ProbeTable probe_history(const TemperatureGrid& grid,
                         const std::vector<std::array<double, 3>>& probes,
                         const std::vector<double>& times);
ProbeTable probe_history(const Checkpoint& ckpt,
                         const std::vector<std::array<double, 3>>& probes,
                         const std::vector<double>& times);

/// Temperature along the deposition line y = y0, z = lz at one time.
struct PathProfile {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> temperature;
};

PathProfile path_profile(const TemperatureGrid& grid, double t, double y0,
                         double z0, double lx, int samples);
PathProfile path_profile(const Checkpoint& ckpt, double t, double y0,
                         double z0, int samples);

struct ComparisonReport {
  double relative_l2 = 0.0;
  std::vector<double> slice_times;
  std::vector<double> slice_l2;
  double max_abs_diff = 0.0;
  double max_percent_error = 0.0;
  ProbeTable pred_probes, ref_probes;
  std::vector<PathProfile> pred_paths, ref_paths;
  double threshold = 0.0;
  bool pass = false;
};

/// Full comparison of a checkpoint against a reference grid: the network is
/// evaluated on the reference lattice, then all metrics and the probe/path
/// tables are assembled.
ComparisonReport compare_fields(const Checkpoint& ckpt,
                                const TemperatureGrid& ref,
                                const RunConfig& cfg, double threshold,
                                int threads);

std::string report_to_json(const ComparisonReport& report);
std::string report_summary(const ComparisonReport& report);

}  // namespace arcpinn

#endif  // ARCPINN_METRICS_HPP
