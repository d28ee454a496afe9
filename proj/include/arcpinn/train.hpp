#ifndef ARCPINN_TRAIN_HPP
#define ARCPINN_TRAIN_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "arcpinn/grad.hpp"
#include "arcpinn/mlp.hpp"
#include "arcpinn/sampler.hpp"

namespace arcpinn {

struct EpochRecord {
  int epoch;  // 1-based; L-BFGS epochs continue the Adam numbering
  double l_bc, l_pde, l_total;
  double w_bc, w_pde;
};

struct TrainReport {
  std::vector<EpochRecord> history;
  std::vector<std::pair<int, double>> weight_update_epochs;  // (epoch, w_bc/w_pde)
  double adam_seconds = 0.0;
  double lbfgs_seconds = 0.0;
  bool aborted_non_finite = false;
  int abort_epoch = -1;
  std::string checkpoint_path;
};

struct TrainResult {
  MlpParams params;
  TrainReport report;
};

/// Hybrid Adam + L-BFGS schedule over full-batch losses. The log stream,
/// when given, receives one tab-separated line per epoch:
/// epoch, L_bc, L_pde, L_total, w_bc, w_pde. Log content is deterministic
/// for a fixed (seed, config) regardless of thread count.
TrainResult train(const RunConfig& cfg, const CollocationSet& set,
                  std::ostream* log = nullptr,
                  const std::string& checkpoint_path = "");

}  // namespace arcpinn

#endif  // ARCPINN_TRAIN_HPP
