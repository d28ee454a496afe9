#ifndef ARCPINN_MLP_HPP
#define ARCPINN_MLP_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "arcpinn/config.hpp"

namespace arcpinn {

enum class Activation : std::uint8_t {
  kGelu,
  kIdentity,  // test harness only; turns the net into an affine map
};

struct LayerShape {
  int in;
  int out;
};

/// Dense network parameters stored as one flat vector, weights row-major
/// followed by biases per layer. Hidden layers share one activation; the
/// head is linear.
struct MlpParams {
  std::vector<LayerShape> layers;
  Eigen::VectorXd data;
  Activation activation = Activation::kGelu;
  double init_gain = 1.48;

  static MlpParams make(int inputs, int hidden_layers, int width, int outputs);

  std::size_t layer_count() const { return layers.size(); }
  std::size_t parameter_count() const { return data.size(); }
  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;

  Eigen::Map<const Eigen::MatrixXd> weights(std::size_t layer) const;
  Eigen::Map<Eigen::MatrixXd> weights(std::size_t layer);
  Eigen::Map<const Eigen::VectorXd> biases(std::size_t layer) const;
  Eigen::Map<Eigen::VectorXd> biases(std::size_t layer);
};

/// Kaiming-normal initialization: weights drawn from
/// Normal(0, (gain/sqrt(fan_in))^2), biases zero. Deterministic per seed.
MlpParams init_params(std::uint64_t seed, int inputs, int hidden_layers,
                      int width, int outputs, double gain = 1.48);

/// Exact erf-based GELU and its first three derivatives.
struct GeluDerivs {
  double value, d1, d2, d3;
};
GeluDerivs gelu_derivs(double x);

/// (gelu(x), gelu'(x), gelu''(x)).
std::array<double, 3> gelu_jet(double x);

/// Numerically stable softplus and derivatives (sigmoid chain).
struct SoftplusDerivs {
  double value, d1, d2, d3;
};
SoftplusDerivs softplus_derivs(double x);

/// Value together with the first derivatives w.r.t. the four network inputs
/// and the diagonal second derivatives w.r.t. the three spatial inputs.
struct Jet {
  double value = 0;
  std::array<double, 4> grad{};  // d/dx, d/dy, d/dz, d/dt
  std::array<double, 3> lap{};   // d2/dx2, d2/dy2, d2/dz2
};

/// Plain scalar output of the network at a normalized point.
double forward(const MlpParams& params, const std::array<double, 4>& input);

/// Output jet w.r.t. the normalized inputs, propagated exactly through
/// every layer. The value channel equals forward() bit-for-bit.
Jet forward_jet(const MlpParams& params, const std::array<double, 4>& input);

/// Batched value-only evaluation: inputs are columns of a 4 x n matrix.
Eigen::VectorXd forward_batch(const MlpParams& params,
                              const Eigen::MatrixXd& inputs);

/// Output mapping raw -> temperature: ambient offset, Softplus positivity
/// scaled by the expected range, and the hard initial-condition blend
/// u_new = g0 + tau (u - g0) with tau = t / t_end in [0, 1].
struct OutputTransform {
  double t_ambient = 25.0;  // g0, degC
  double delta_t = 2000.0;  // temperature range scale, degC
};

/// Temperature at a physical point (x,y,z,t); value only.
double temperature(const MlpParams& params, const OutputTransform& xf,
                   const DomainSpec& dom, const std::array<double, 4>& phys);

/// Raw normalized-input jet -> temperature jet in physical units (degC,
/// degC/mm, degC/mm^2, degC/s), with the hard IC blend applied.
Jet apply_output_transform(const Jet& raw, const std::array<double, 4>& phys,
                           const OutputTransform& xf, const DomainSpec& dom);

/// Temperature jet at a physical point: normalize, run the network,
/// transform. Convenience composition used by the residual evaluators.
Jet temperature_jet(const MlpParams& params, const OutputTransform& xf,
                    const DomainSpec& dom, const std::array<double, 4>& phys);

/// Versioned binary checkpoint. Round-trips are bit-exact.
struct Checkpoint {
  MlpParams params;
  OutputTransform transform;
  DomainSpec domain;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace arcpinn

#endif  // ARCPINN_MLP_HPP
