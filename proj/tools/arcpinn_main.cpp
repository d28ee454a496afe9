#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arcpinn/fdm.hpp"
#include "arcpinn/gridio.hpp"
#include "arcpinn/metrics.hpp"
#include "arcpinn/physics.hpp"
#include "arcpinn/sampler.hpp"
#include "arcpinn/train.hpp"

using namespace arcpinn;

namespace {

struct Common {
  std::string config_path;
  long long seed = -1;
  int threads = -1;
};

RunConfig load(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? [] {
    RunConfig d;
    d.finalize();
    return d;
  }()
                                        : load_config_file(c.config_path);
  if (c.seed >= 0) cfg.sampling.seed = static_cast<std::uint64_t>(c.seed);
  if (c.threads >= 0) cfg.training.threads = c.threads;
  return cfg;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "Config file (defaults apply)");
  app->add_option("--seed", c.seed, "Random seed override");
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

std::size_t scaled_total(const RunConfig& cfg) {
  const double s = cfg.sampling.scale;
  return static_cast<std::size_t>(
      std::llround(cfg.sampling.n_boundary * s) +
      std::llround(cfg.sampling.n_domain * s) +
      std::llround(cfg.sampling.n_initial * s));
}

int cmd_train(const Common& c, const std::string& ckpt_out,
              const std::string& log_path, int adam_override,
              int lbfgs_override) {
  RunConfig cfg = load(c);
  if (adam_override >= 0) cfg.training.adam_epochs = adam_override;
  if (lbfgs_override >= 0) cfg.training.lbfgs_epochs = lbfgs_override;

  std::printf("sampling %zu collocation points...\n", scaled_total(cfg));
  const CollocationSet set = build_collocation_set(cfg);
  std::printf("collocation: %zu boundary, %zu domain (%zu source), %zu initial\n",
              set.n_bc(), set.n_pde(), set.n_source_following, set.n_initial());

  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::trunc);
    if (!log) throw IoError("cannot open log file: " + log_path);
  }
  const TrainResult result =
      train(cfg, set, log.is_open() ? &log : nullptr, ckpt_out);
  std::printf("adam phase: %.1f s, lbfgs phase: %.1f s\n",
              result.report.adam_seconds, result.report.lbfgs_seconds);
  if (result.report.aborted_non_finite) {
    std::fprintf(stderr,
                 "training aborted: non-finite loss at epoch %d "
                 "(last good checkpoint retained)\n",
                 result.report.abort_epoch);
    return 2;
  }
  if (!result.report.history.empty()) {
    const auto& last = result.report.history.back();
    std::printf("final: L_bc=%.6g L_pde=%.6g L=%.6g\n", last.l_bc, last.l_pde,
                last.l_total);
  }
  return 0;
}

int cmd_sample(const Common& c, const std::string& out_path) {
  const RunConfig cfg = load(c);
  const CollocationSet set = build_collocation_set(cfg);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + out_path);
  write_collocation_csv(out, set);
  std::printf("%zu points -> %s\n", set.total(), out_path.c_str());
  return 0;
}

int cmd_flux(const Common& c, double t, const std::string& axis, double value,
             double dx, const std::string& out_path) {
  const RunConfig cfg = load(c);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + out_path);
  out << "x,y,z,t,q\n";
  char buf[160];
  auto emit = [&](double x, double y, double z) {
    const double q = goldak_flux(x, y, z, t, cfg.goldak, cfg.domain.lz);
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g\n", x, y, z,
                  t, q);
    out << buf;
  };
  if (axis == "z") {
    for (double y = 0; y <= cfg.domain.ly + 1e-12; y += dx)
      for (double x = 0; x <= cfg.domain.lx + 1e-12; x += dx)
        emit(x, y, value);
  } else if (axis == "y") {
    for (double z = 0; z <= cfg.domain.lz + 1e-12; z += dx)
      for (double x = 0; x <= cfg.domain.lx + 1e-12; x += dx)
        emit(x, value, z);
  } else {
    throw ConfigError("flux --axis must be z or y");
  }
  return 0;
}

int cmd_oracle(const Common& c, const std::string& preset, double dx,
               double dt, const std::string& out_path) {
  const RunConfig cfg = load(c);
  GridSpec spec = preset == "custom" ? GridSpec{dx, dt} : oracle_preset(preset);
  FdmOptions opt;
  opt.threads = cfg.training.threads;
  const auto times = lattice_times(cfg.domain, spec);
  const TemperatureGrid grid = fdm_solve(cfg, spec, times, opt);
  write_grid_csv(out_path, grid);
  std::printf("oracle %s: %dx%dx%d nodes, %zu slices -> %s\n", preset.c_str(),
              grid.nx, grid.ny, grid.nz, grid.times.size(), out_path.c_str());
  return 0;
}

int cmd_predict(const Common& c, const std::string& ckpt_path,
                const std::string& like, double dx, double dt,
                const std::string& points_path, const std::string& out_path,
                const std::string& format) {
  const RunConfig cfg = load(c);
  const Checkpoint ckpt = load_checkpoint(ckpt_path);

  if (!points_path.empty()) {
    std::ifstream in(points_path);
    if (!in) throw IoError("cannot open points file: " + points_path);
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + out_path);
    out << "x,y,z,t,T\n";
    std::string line;
    char buf[160];
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
      double x, y, z, t;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &y, &z, &t) != 4)
        throw IoError("bad points row: " + line);
      const double T =
          temperature(ckpt.params, ckpt.transform, ckpt.domain, {x, y, z, t});
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g\n", x, y,
                    z, t, T);
      out << buf;
    }
    return 0;
  }

  std::vector<double> times;
  GridSpec spec{dx, dt};
  if (!like.empty()) {
    const TemperatureGrid ref = read_grid_csv(like);
    spec.dx = ref.dx;
    spec.dt = ref.times.size() > 1 ? ref.times[1] - ref.times[0]
                                   : ckpt.domain.t_end;
    times = ref.times;
  } else {
    times = lattice_times(ckpt.domain, spec);
  }
  const TemperatureGrid grid =
      evaluate_on_grid(ckpt, spec, times, cfg.training.threads);
  if (format == "vtk")
    write_grid_vtk(out_path, grid);
  else
    write_grid_csv(out_path, grid);
  return 0;
}

int cmd_compare(const Common& c, const std::string& ckpt_path,
                const std::string& ref_path, double threshold,
                const std::string& out_path, const std::string& probes_out,
                const std::string& paths_out) {
  const RunConfig cfg = load(c);
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const TemperatureGrid ref = read_grid_csv(ref_path);
  const ComparisonReport rep =
      compare_fields(ckpt, ref, cfg, threshold, cfg.training.threads);
  std::printf("%s", report_summary(rep).c_str());
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + out_path);
    out << report_to_json(rep);
  }
  if (!probes_out.empty()) write_probe_csv(probes_out, rep.pred_probes);
  if (!paths_out.empty())
    for (std::size_t i = 0; i < rep.pred_paths.size(); ++i) {
      char suffix[32];
      std::snprintf(suffix, sizeof(suffix), "_t%.3g.csv",
                    rep.pred_paths[i].t);
      write_path_csv(paths_out + suffix, rep.pred_paths[i]);
    }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed thermal simulator for moving-source "
               "bead-on-plate deposition"};
  app.require_subcommand(1);

  Common c_train, c_sample, c_flux, c_oracle, c_predict, c_compare;

  auto* train_cmd = app.add_subcommand("train", "Train the network");
  std::string ckpt_out = "model.ckpt", log_path;
  int adam_override = -1, lbfgs_override = -1;
  add_common(train_cmd, c_train);
  train_cmd->add_option("--checkpoint-out", ckpt_out, "Checkpoint path");
  train_cmd->add_option("--log", log_path, "Per-epoch loss log (TSV)");
  train_cmd->add_option("--adam-epochs", adam_override, "Override Adam epochs");
  train_cmd->add_option("--lbfgs-epochs", lbfgs_override,
                        "Override L-BFGS epochs");

  auto* sample_cmd = app.add_subcommand("sample", "Emit collocation CSV");
  std::string sample_out = "points.csv";
  add_common(sample_cmd, c_sample);
  sample_cmd->add_option("--out", sample_out, "Output CSV");

  auto* flux_cmd = app.add_subcommand("flux", "Dump source flux on a slice");
  double flux_t = 0.0, flux_value = 0.0, flux_dx = 0.25;
  std::string flux_axis = "z", flux_out = "flux.csv";
  add_common(flux_cmd, c_flux);
  flux_cmd->add_option("--t", flux_t, "Time (s)");
  flux_cmd->add_option("--axis", flux_axis, "Slice normal: z or y");
  flux_cmd->add_option("--value", flux_value, "Slice coordinate (mm)");
  flux_cmd->add_option("--dx", flux_dx, "Sample spacing (mm)");
  flux_cmd->add_option("--out", flux_out, "Output CSV");

  auto* oracle_cmd =
      app.add_subcommand("oracle", "Run the finite-difference reference");
  std::string preset = "cc", oracle_out = "oracle.csv";
  double oracle_dx = 0.5, oracle_dt = 0.02;
  add_common(oracle_cmd, c_oracle);
  oracle_cmd->add_option("--preset", preset, "cc, fc, ff or custom");
  oracle_cmd->add_option("--dx", oracle_dx, "Spacing for custom preset (mm)");
  oracle_cmd->add_option("--dt", oracle_dt, "Time step for custom preset (s)");
  oracle_cmd->add_option("--out", oracle_out, "Output grid CSV");

  auto* predict_cmd =
      app.add_subcommand("predict", "Evaluate a checkpoint on a lattice");
  std::string pr_ckpt, pr_like, pr_points, pr_out = "pred.csv",
                               pr_format = "csv";
  double pr_dx = 0.5, pr_dt = 0.02;
  add_common(predict_cmd, c_predict);
  predict_cmd->add_option("--checkpoint", pr_ckpt, "Checkpoint file")
      ->required();
  predict_cmd->add_option("--like", pr_like,
                          "Take the lattice from this grid CSV");
  predict_cmd->add_option("--dx", pr_dx, "Lattice spacing (mm)");
  predict_cmd->add_option("--dt", pr_dt, "Lattice time step (s)");
  predict_cmd->add_option("--points", pr_points,
                          "Evaluate at x,y,z,t rows instead of a lattice");
  predict_cmd->add_option("--out", pr_out, "Output file");
  predict_cmd->add_option("--format", pr_format, "csv or vtk");

  auto* compare_cmd =
      app.add_subcommand("compare", "Compare a checkpoint to a reference");
  std::string cm_ckpt, cm_ref, cm_out, cm_probes, cm_paths;
  double cm_threshold = 0.15;
  add_common(compare_cmd, c_compare);
  compare_cmd->add_option("--checkpoint", cm_ckpt, "Checkpoint file")
      ->required();
  compare_cmd->add_option("--ref", cm_ref, "Reference grid CSV")->required();
  compare_cmd->add_option("--threshold", cm_threshold,
                          "Relative-L2 pass threshold");
  compare_cmd->add_option("--out", cm_out, "JSON report path");
  compare_cmd->add_option("--probes-out", cm_probes, "Probe table CSV");
  compare_cmd->add_option("--paths-out", cm_paths,
                          "Path profile CSV prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed())
      return cmd_train(c_train, ckpt_out, log_path, adam_override,
                       lbfgs_override);
    if (sample_cmd->parsed()) return cmd_sample(c_sample, sample_out);
    if (flux_cmd->parsed())
      return cmd_flux(c_flux, flux_t, flux_axis, flux_value, flux_dx,
                      flux_out);
    if (oracle_cmd->parsed())
      return cmd_oracle(c_oracle, preset, oracle_dx, oracle_dt, oracle_out);
    if (predict_cmd->parsed())
      return cmd_predict(c_predict, pr_ckpt, pr_like, pr_dx, pr_dt, pr_points,
                         pr_out, pr_format);
    if (compare_cmd->parsed())
      return cmd_compare(c_compare, cm_ckpt, cm_ref, cm_threshold, cm_out,
                         cm_probes, cm_paths);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
