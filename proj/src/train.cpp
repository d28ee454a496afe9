#include "arcpinn/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "arcpinn/adam.hpp"
#include "arcpinn/lbfgs.hpp"

namespace arcpinn {

namespace {

void log_epoch(std::ostream* log, const EpochRecord& r) {
  if (!log) return;
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%d\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\n",
                r.epoch, r.l_bc, r.l_pde, r.l_total, r.w_bc, r.w_pde);
  *log << buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

TrainResult train(const RunConfig& cfg, const CollocationSet& set,
                  std::ostream* log, const std::string& checkpoint_path) {
  const TrainingSpec& ts = cfg.training;
  TrainResult result;
  result.report.checkpoint_path = checkpoint_path;

  result.params = init_params(cfg.sampling.seed, 4, cfg.network.depth,
                              cfg.network.width, 1);
  const ResidualProblem problem(set, cfg);
  const int threads = ts.threads;

  LossWeights weights;
  weights.alpha = ts.weight_alpha;
  weights.update_period = ts.weight_update_period;

  const Checkpoint make_ckpt_proto{
      MlpParams{}, OutputTransform{cfg.material.t_ambient, cfg.network.delta_t},
      cfg.domain};
  auto write_ckpt = [&](const MlpParams& p) {
    if (checkpoint_path.empty()) return;
    Checkpoint c = make_ckpt_proto;
    c.params = p;
    save_checkpoint(checkpoint_path, c);
  };

  MlpParams last_good = result.params;
  AdamState adam(result.params.data.size(), ts.adam_lr, ts.adam_beta1,
                 ts.adam_beta2, ts.adam_epsilon);

  const auto t_adam0 = std::chrono::steady_clock::now();
  for (int e = 1; e <= ts.adam_epochs; ++e) {
    LossAndGrad lg;
    try {
      lg = ts.minibatch_size > 0
               ? problem.loss_and_grad_minibatch(result.params, threads, e,
                                                 ts.minibatch_size)
               : problem.loss_and_grad(result.params, threads);
    } catch (const NumericError&) {
      result.report.aborted_non_finite = true;
      result.report.abort_epoch = e;
      result.params = last_good;
      write_ckpt(result.params);
      result.report.adam_seconds = seconds_since(t_adam0);
      return result;
    }
    last_good = result.params;

    const EpochRecord rec{e, lg.l_bc, lg.l_pde, lg.total(weights),
                          weights.w_bc, weights.w_pde};
    result.report.history.push_back(rec);
    log_epoch(log, rec);

    const Eigen::VectorXd g = lg.total_grad(weights);
    adam_step(adam, result.params.data, g);

    if (e % weights.update_period == 0) {
      weights = update_adaptive_weights(lg.grad_bc.norm(), lg.grad_pde.norm(),
                                        weights);
      result.report.weight_update_epochs.emplace_back(
          e, weights.w_bc / weights.w_pde);
    }
  }
  result.report.adam_seconds = seconds_since(t_adam0);
  write_ckpt(result.params);  // phase boundary

  // Refinement phase: weights frozen, full-batch objective.
  const auto t_lbfgs0 = std::chrono::steady_clock::now();
  struct EvalTrace {
    double f, l_bc, l_pde;
  };
  std::vector<EvalTrace> trace;
  const LossWeights frozen = weights;
  auto objective = [&](const Eigen::VectorXd& x,
                       Eigen::VectorXd& grad) -> double {
    MlpParams p = result.params;
    p.data = x;
    try {
      const LossAndGrad lg = problem.loss_and_grad(p, threads);
      grad = lg.total_grad(frozen);
      const double f = lg.total(frozen);
      trace.push_back({f, lg.l_bc, lg.l_pde});
      return f;
    } catch (const NumericError&) {
      grad.setZero();
      return std::numeric_limits<double>::infinity();
    }
  };

  LbfgsParams lp;
  lp.history = ts.lbfgs_history;
  lp.lr = ts.lbfgs_lr;
  lp.max_iterations = ts.lbfgs_max_iterations;
  lp.max_evaluations = ts.lbfgs_max_evaluations;
  LbfgsState lstate;

  for (int e = 1; e <= ts.lbfgs_epochs; ++e) {
    trace.clear();
    const LbfgsEpochResult er =
        lbfgs_epoch(lstate, result.params.data, objective, lp);
    if (!std::isfinite(er.loss)) {
      result.report.aborted_non_finite = true;
      result.report.abort_epoch = ts.adam_epochs + e;
      result.params = last_good;
      write_ckpt(result.params);
      result.report.lbfgs_seconds = seconds_since(t_lbfgs0);
      return result;
    }
    last_good = result.params;

    // Recover the component losses of the final point from the epoch's
    // evaluation trace (exact f match; ties take the latest).
    double l_bc = std::numeric_limits<double>::quiet_NaN();
    double l_pde = l_bc;
    for (const auto& tr : trace)
      if (tr.f == er.loss) {
        l_bc = tr.l_bc;
        l_pde = tr.l_pde;
      }
    if (std::isnan(l_bc) && !result.report.history.empty()) {
      l_bc = result.report.history.back().l_bc;
      l_pde = result.report.history.back().l_pde;
    }

    const EpochRecord rec{ts.adam_epochs + e, l_bc, l_pde, er.loss,
                          frozen.w_bc, frozen.w_pde};
    result.report.history.push_back(rec);
    log_epoch(log, rec);
  }
  result.report.lbfgs_seconds = seconds_since(t_lbfgs0);

  write_ckpt(result.params);
  return result;
}

}  // namespace arcpinn
