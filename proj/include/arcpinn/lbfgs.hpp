#ifndef ARCPINN_LBFGS_HPP
#define ARCPINN_LBFGS_HPP

#include <deque>
#include <functional>

#include <Eigen/Core>

namespace arcpinn {

/// Objective callback: fills grad, returns the loss.
using LossGradFn =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsParams {
  int history = 50;            // curvature-pair capacity
  double lr = 0.01;            // initial trial step before any history
  int max_iterations = 50;     // per epoch
  int max_evaluations = 62;    // objective evaluations per epoch
  double c1 = 1e-4;            // Armijo constant
  double c2 = 0.9;             // curvature constant
  double grad_tol = 1e-12;     // stop when ||grad||_inf falls below
};

/// Limited-memory inverse-Hessian state. History persists across epochs;
/// pairs with s.y <= 1e-10 ||s|| ||y|| are rejected.
struct LbfgsState {
  std::deque<Eigen::VectorXd> s;
  std::deque<Eigen::VectorXd> y;
  std::deque<double> rho;
  double fx = 0.0;
  Eigen::VectorXd gx;
  bool evaluated = false;  // fx/gx valid for the current x

  void push_pair(const Eigen::VectorXd& s_new, const Eigen::VectorXd& y_new,
                 int capacity);
  void clear_history();
};

struct LbfgsEpochResult {
  double loss = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool line_search_failed = false;
  bool converged = false;  // gradient tolerance reached
};

/// One refinement epoch: up to max_iterations two-loop steps under a
/// strong-Wolfe line search, bounded by max_evaluations objective calls.
/// Accepted steps never increase the loss; on line-search failure the
/// epoch ends with the best parameters seen.
LbfgsEpochResult lbfgs_epoch(LbfgsState& state, Eigen::VectorXd& x,
                             const LossGradFn& fg, const LbfgsParams& params);

}  // namespace arcpinn

#endif  // ARCPINN_LBFGS_HPP
