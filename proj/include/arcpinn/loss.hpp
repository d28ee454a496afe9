#ifndef ARCPINN_LOSS_HPP
#define ARCPINN_LOSS_HPP

#include <utility>

#include "arcpinn/physics.hpp"

namespace arcpinn {

struct LossWeights {
  double w_bc = 1.0;
  double w_pde = 1.0;
  double alpha = 0.9;       // balance of the adaptive update
  int update_period = 1000; // epochs between updates
};

struct LossReport {
  double l_bc = 0.0;
  double l_pde = 0.0;
  double l_total = 0.0;
  double grad_norm_bc = 0.0;   // filled when gradients were computed
  double grad_norm_pde = 0.0;
};

/// Mean-squared category losses. Robin and Dirichlet residuals pool into a
/// single boundary term; PDE pools domain and source-following points.
std::pair<double, double> category_losses(const ResidualBatch& residuals);

/// Normalized weighted total (w_bc L_bc + w_pde L_pde) / (w_bc + w_pde).
double total_loss(double l_bc, double l_pde, const LossWeights& w);

/// Gradient-norm balancing: what_x = (sum_i ||grad L_i||) / ||grad L_x||,
/// then w_x <- alpha w_x + (1 - alpha) what_x. A zero norm skips that term
/// and warns on stderr.
LossWeights update_adaptive_weights(double grad_norm_bc, double grad_norm_pde,
                                    const LossWeights& w);

}  // namespace arcpinn

#endif  // ARCPINN_LOSS_HPP
