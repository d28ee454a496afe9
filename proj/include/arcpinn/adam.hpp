#ifndef ARCPINN_ADAM_HPP
#define ARCPINN_ADAM_HPP

#include <Eigen/Core>

namespace arcpinn {

/// Bias-corrected Adam on a flat parameter vector.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double epsilon = 1e-8;

  explicit AdamState(Eigen::Index n, double lr_ = 1e-3, double b1 = 0.9,
                     double b2 = 0.99, double eps = 1e-8)
      : m(Eigen::VectorXd::Zero(n)),
        v(Eigen::VectorXd::Zero(n)),
        lr(lr_),
        beta1(b1),
        beta2(b2),
        epsilon(eps) {}
};

void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad);

}  // namespace arcpinn

#endif  // ARCPINN_ADAM_HPP
