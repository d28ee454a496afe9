#ifndef ARCPINN_GRAD_HPP
#define ARCPINN_GRAD_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "arcpinn/loss.hpp"
#include "arcpinn/mlp.hpp"
#include "arcpinn/sampler.hpp"

namespace arcpinn {

struct LossAndGrad {
  double l_bc = 0.0;
  double l_pde = 0.0;
  Eigen::VectorXd grad_bc;   // d L_bc / d params (unweighted)
  Eigen::VectorXd grad_pde;  // d L_pde / d params (unweighted)
  std::size_t n_bc = 0;
  std::size_t n_pde = 0;

  double total(const LossWeights& w) const {
    return total_loss(l_bc, l_pde, w);
  }
  Eigen::VectorXd total_grad(const LossWeights& w) const {
    return (w.w_bc * grad_bc + w.w_pde * grad_pde) / (w.w_bc + w.w_pde);
  }
};

/// Immutable, precomputed evaluation list for one collocation set. Points
/// are grouped by loss category and split into fixed-size blocks; blocks
/// are processed in parallel and reduced pairwise in index order, so the
/// result is bit-identical for any worker count.
class ResidualProblem {
 public:
  ResidualProblem(const CollocationSet& set, const RunConfig& cfg);

  /// Loss values and exact parameter gradients of both category losses.
  /// Adaptive weights are applied by the caller; they are data here.
  LossAndGrad loss_and_grad(const MlpParams& params, int threads) const;

  /// Deterministic contiguous-window minibatch variant; window contents
  /// depend only on (epoch, batch_size).
  LossAndGrad loss_and_grad_minibatch(const MlpParams& params, int threads,
                                      std::int64_t epoch,
                                      std::int64_t batch_size) const;

  std::size_t n_bc() const { return n_bc_; }
  std::size_t n_pde() const { return n_pde_; }

 private:
  struct EvalPoint {
    std::array<double, 4> norm;  // normalized coordinates
    double tau;                  // t / t_end
    double flux;                 // Goldak source, PDE points only
    std::int8_t face_axis;       // 0..2 Robin axis, -1 Dirichlet, -2 PDE
    double face_sign;
  };

  LossAndGrad run(const MlpParams& params, int threads, std::size_t bc_begin,
                  std::size_t bc_count, std::size_t pde_begin,
                  std::size_t pde_count) const;

  std::vector<EvalPoint> bc_points_;
  std::vector<EvalPoint> pde_points_;
  std::size_t n_bc_ = 0;
  std::size_t n_pde_ = 0;

  // Problem constants captured from the config.
  double rho_cp_, k_, h_, eps_, t_ambient_, delta_t_, t_end_;
  double cd_[4];  // d(normalized)/d(physical) per axis
  double pde_scale_, bc_scale_;
  double rad_shift_;  // 273.15 or 0 per convention
  int inputs_ = 4;
};

}  // namespace arcpinn

#endif  // ARCPINN_GRAD_HPP
