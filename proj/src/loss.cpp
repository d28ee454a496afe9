#include "arcpinn/loss.hpp"

#include <cstdio>

#include "arcpinn/common.hpp"

namespace arcpinn {

std::pair<double, double> category_losses(const ResidualBatch& r) {
  const std::size_t n_bc = r.robin.size() + r.dirichlet.size();
  if (n_bc == 0) throw NumericError("category_losses: empty boundary batch");
  if (r.pde.empty()) throw NumericError("category_losses: empty PDE batch");
  double ssq_bc = 0.0;
  for (double v : r.robin) ssq_bc += v * v;
  for (double v : r.dirichlet) ssq_bc += v * v;
  double ssq_pde = 0.0;
  for (double v : r.pde) ssq_pde += v * v;
  return {ssq_bc / static_cast<double>(n_bc),
          ssq_pde / static_cast<double>(r.pde.size())};
}

double total_loss(double l_bc, double l_pde, const LossWeights& w) {
  if (w.w_bc <= 0 || w.w_pde <= 0)
    throw NumericError("total_loss: weights must be positive");
  return (w.w_bc * l_bc + w.w_pde * l_pde) / (w.w_bc + w.w_pde);
}

LossWeights update_adaptive_weights(double grad_norm_bc, double grad_norm_pde,
                                    const LossWeights& w) {
  LossWeights out = w;
  const double sum = grad_norm_bc + grad_norm_pde;
  if (grad_norm_bc > 0) {
    out.w_bc = w.alpha * w.w_bc + (1.0 - w.alpha) * (sum / grad_norm_bc);
  } else {
    std::fprintf(stderr,
                 "warning: zero boundary gradient norm, skipping w_bc update\n");
  }
  if (grad_norm_pde > 0) {
    out.w_pde = w.alpha * w.w_pde + (1.0 - w.alpha) * (sum / grad_norm_pde);
  } else {
    std::fprintf(stderr,
                 "warning: zero PDE gradient norm, skipping w_pde update\n");
  }
  return out;
}

}  // namespace arcpinn
