#include "arcpinn/adam.hpp"

#include <cmath>

#include "arcpinn/common.hpp"

namespace arcpinn {

void adam_step(AdamState& st, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad) {
  if (params.size() != grad.size() || params.size() != st.m.size())
    throw NumericError("adam_step: shape mismatch");
  ++st.step;
  st.m = st.beta1 * st.m + (1.0 - st.beta1) * grad;
  st.v = st.beta2 * st.v + (1.0 - st.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.step));
  const double scale = st.lr / bc1;
  params.array() -=
      scale * st.m.array() / ((st.v.array() / bc2).sqrt() + st.epsilon);
}

}  // namespace arcpinn
