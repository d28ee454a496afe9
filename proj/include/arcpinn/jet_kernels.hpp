#ifndef ARCPINN_JET_KERNELS_HPP
#define ARCPINN_JET_KERNELS_HPP

#include <array>
#include <vector>

#include <Eigen/Core>

#include "arcpinn/mlp.hpp"

namespace arcpinn::jet {

/// Channel layout per point: [0] value, [1..4] d/d(x,y,z,t), [5..7]
/// d2/d(x2,y2,z2), all w.r.t. the normalized inputs. A batch of B points is
/// a matrix with 8B columns, point p occupying columns 8p..8p+7.
constexpr int kChannels = 8;

/// Seed columns for one point at the network input.
void seed_point(const double* input4, int n_inputs, double* column_block,
                int stride);

/// Single-point forward pass (shares the exact arithmetic with the jet
/// value channel, so plain and jet evaluations agree bitwise).
struct Workspace {
  std::array<double, kChannels> head{};
  std::vector<double> a, z;
};
void forward_point(const MlpParams& params, const double* input4,
                   Workspace& ws);

/// Forward tape for one hidden layer of a batch.
struct LayerTape {
  Eigen::MatrixXd z;    // preactivations, width x 8B
  Eigen::MatrixXd a;    // activations, width x 8B
  Eigen::MatrixXd s1;   // activation first derivative, width x B
  Eigen::MatrixXd s2;   // second derivative, width x B
  Eigen::MatrixXd phi;  // Gaussian pdf at z (for the third derivative)
};

struct BatchWorkspace {
  Eigen::Index points = 0;
  Eigen::MatrixXd input;     // in x 8B seeds
  std::vector<LayerTape> tapes;
  Eigen::MatrixXd head;      // out x 8B raw output channels
  Eigen::MatrixXd head_adj;  // out x 8B adjoint seeds (filled by caller)
  Eigen::MatrixXd ga, gz;    // reverse-sweep buffers
};

/// Runs the jet forward pass for a batch; seeds must already be in
/// ws.input. Resizes tapes as needed.
void forward_points(const MlpParams& params, BatchWorkspace& ws);

/// Reverse sweep: consumes ws.head_adj, accumulates parameter gradients
/// into grad (flat layout identical to MlpParams::data).
void backward_points(const MlpParams& params, BatchWorkspace& ws,
                     Eigen::VectorXd& grad);

}  // namespace arcpinn::jet

#endif  // ARCPINN_JET_KERNELS_HPP
