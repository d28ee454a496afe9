#include "arcpinn/jet_kernels.hpp"

#include <cmath>

#include "arcpinn/common.hpp"

namespace arcpinn::jet {

void seed_point(const double* input4, int n_inputs, double* col, int stride) {
  // col points at the first element of column 8p; stride is the column
  // stride of the matrix (rows).
  for (int ch = 0; ch < kChannels; ++ch)
    for (int i = 0; i < n_inputs; ++i) col[ch * stride + i] = 0.0;
  for (int i = 0; i < n_inputs; ++i) col[i] = input4[i];
  for (int d = 0; d < n_inputs && d < 4; ++d) col[(1 + d) * stride + d] = 1.0;
}

namespace {

// Jet rule through the activation: value channel through f, first
// derivatives scaled by f', second derivatives pick up the curvature term.
inline void activate_block(Activation act, const double* z, double* a,
                           double& s1, double& s2, double& phi, int stride) {
  const double z0 = z[0];
  double a0, d1, d2, pdf;
  if (act == Activation::kGelu) {
    const GeluDerivs g = gelu_derivs(z0);
    a0 = g.value;
    d1 = g.d1;
    d2 = g.d2;
    pdf = 0.39894228040143267794 * std::exp(-0.5 * z0 * z0);
  } else {
    a0 = z0;
    d1 = 1.0;
    d2 = 0.0;
    pdf = 0.0;
  }
  a[0] = a0;
  for (int d = 1; d <= 4; ++d) a[d * stride] = d1 * z[d * stride];
  for (int e = 0; e < 3; ++e) {
    const double g1 = z[(1 + e) * stride];
    a[(5 + e) * stride] = d2 * g1 * g1 + d1 * z[(5 + e) * stride];
  }
  s1 = d1;
  s2 = d2;
  phi = pdf;
}

// Adjoint of activate_block. ga holds dL/da channels, gz receives dL/dz.
inline void activate_adjoint(Activation act, const double* z, const double* ga,
                             double* gz, double s1, double s2, double phi,
                             int stride) {
  const double z0 = z[0];
  const double s3 =
      act == Activation::kGelu ? (z0 * z0 * z0 - 4.0 * z0) * phi : 0.0;
  double g0 = ga[0] * s1;
  for (int d = 1; d <= 4; ++d) g0 += ga[d * stride] * s2 * z[d * stride];
  for (int e = 0; e < 3; ++e) {
    const double g1 = z[(1 + e) * stride];
    g0 += ga[(5 + e) * stride] * (s3 * g1 * g1 + s2 * z[(5 + e) * stride]);
  }
  gz[0] = g0;
  for (int e = 0; e < 3; ++e) {
    gz[(1 + e) * stride] = ga[(1 + e) * stride] * s1 +
                           ga[(5 + e) * stride] * 2.0 * s2 * z[(1 + e) * stride];
  }
  gz[4 * stride] = ga[4 * stride] * s1;
  for (int e = 0; e < 3; ++e)
    gz[(5 + e) * stride] = ga[(5 + e) * stride] * s1;
}

}  // namespace

void forward_point(const MlpParams& params, const double* input4,
                   Workspace& ws) {
  const std::size_t L = params.layer_count();
  std::size_t max_w = 0;
  for (const auto& s : params.layers)
    max_w = std::max<std::size_t>(max_w, std::max(s.in, s.out));
  ws.a.assign(max_w * kChannels, 0.0);
  ws.z.assign(max_w * kChannels, 0.0);

  const int in0 = params.layers.front().in;
  seed_point(input4, in0, ws.a.data(), static_cast<int>(max_w));
  const int stride = static_cast<int>(max_w);

  int width_in = in0;
  for (std::size_t l = 0; l < L; ++l) {
    const auto W = params.weights(l);
    const auto b = params.biases(l);
    const int width_out = params.layers[l].out;
    for (int ch = 0; ch < kChannels; ++ch) {
      Eigen::Map<Eigen::VectorXd> zc(ws.z.data() + ch * stride, width_out);
      Eigen::Map<const Eigen::VectorXd> ac(ws.a.data() + ch * stride,
                                           width_in);
      zc.noalias() = W * ac;
      if (ch == 0) zc += b;
    }
    if (l + 1 < L) {
      for (int r = 0; r < width_out; ++r) {
        double s1, s2, phi;
        activate_block(params.activation, ws.z.data() + r, ws.a.data() + r,
                       s1, s2, phi, stride);
      }
    } else {
      for (int ch = 0; ch < kChannels; ++ch)
        ws.head[ch] = ws.z[ch * stride];  // linear head, first output row
    }
    width_in = width_out;
  }
}

void forward_points(const MlpParams& params, BatchWorkspace& ws) {
  const std::size_t L = params.layer_count();
  const Eigen::Index B = ws.input.cols() / kChannels;
  ws.points = B;
  ws.tapes.resize(L - 1);

  const Eigen::MatrixXd* src = &ws.input;
  for (std::size_t l = 0; l + 1 < L; ++l) {
    LayerTape& tape = ws.tapes[l];
    const int w = params.layers[l].out;
    tape.z.resize(w, B * kChannels);
    tape.a.resize(w, B * kChannels);
    tape.s1.resize(w, B);
    tape.s2.resize(w, B);
    tape.phi.resize(w, B);

    tape.z.noalias() = params.weights(l) * (*src);
    const auto b = params.biases(l);
    for (Eigen::Index p = 0; p < B; ++p)
      tape.z.col(p * kChannels) += b;

    const int stride = w;
    for (Eigen::Index p = 0; p < B; ++p) {
      const double* zc = tape.z.data() + p * kChannels * stride;
      double* ac = tape.a.data() + p * kChannels * stride;
      for (int r = 0; r < w; ++r)
        activate_block(params.activation, zc + r, ac + r, tape.s1(r, p),
                       tape.s2(r, p), tape.phi(r, p), stride);
    }
    src = &tape.a;
  }

  const std::size_t head = L - 1;
  ws.head.resize(params.layers[head].out, B * kChannels);
  ws.head.noalias() = params.weights(head) * (*src);
  const auto b = params.biases(head);
  for (Eigen::Index p = 0; p < B; ++p) ws.head.col(p * kChannels) += b;
}

void backward_points(const MlpParams& params, BatchWorkspace& ws,
                     Eigen::VectorXd& grad) {
  if (grad.size() != params.data.size())
    throw NumericError("gradient buffer size mismatch");
  const std::size_t L = params.layer_count();
  const Eigen::Index B = ws.points;

  // Head layer: linear, so head_adj is already dL/dz.
  const std::size_t head = L - 1;
  const Eigen::MatrixXd& a_last =
      L >= 2 ? ws.tapes[head - 1].a : ws.input;
  {
    Eigen::Map<Eigen::MatrixXd> dW(grad.data() + params.weight_offset(head),
                                   params.layers[head].out,
                                   params.layers[head].in);
    Eigen::Map<Eigen::VectorXd> db(grad.data() + params.bias_offset(head),
                                   params.layers[head].out);
    dW.noalias() += ws.head_adj * a_last.transpose();
    for (Eigen::Index p = 0; p < B; ++p)
      db += ws.head_adj.col(p * kChannels);
    ws.ga.resize(params.layers[head].in, B * kChannels);
    ws.ga.noalias() = params.weights(head).transpose() * ws.head_adj;
  }

  for (std::size_t li = L - 1; li-- > 0;) {
    LayerTape& tape = ws.tapes[li];
    const int w = params.layers[li].out;
    ws.gz.resize(w, B * kChannels);
    const int stride = w;
    for (Eigen::Index p = 0; p < B; ++p) {
      const double* zc = tape.z.data() + p * kChannels * stride;
      const double* gac = ws.ga.data() + p * kChannels * stride;
      double* gzc = ws.gz.data() + p * kChannels * stride;
      for (int r = 0; r < w; ++r)
        activate_adjoint(params.activation, zc + r, gac + r, gzc + r,
                         tape.s1(r, p), tape.s2(r, p), tape.phi(r, p), stride);
    }

    const Eigen::MatrixXd& a_prev = li == 0 ? ws.input : ws.tapes[li - 1].a;
    Eigen::Map<Eigen::MatrixXd> dW(grad.data() + params.weight_offset(li),
                                   params.layers[li].out,
                                   params.layers[li].in);
    Eigen::Map<Eigen::VectorXd> db(grad.data() + params.bias_offset(li),
                                   params.layers[li].out);
    dW.noalias() += ws.gz * a_prev.transpose();
    for (Eigen::Index p = 0; p < B; ++p) db += ws.gz.col(p * kChannels);
    if (li > 0) {
      ws.ga.resize(params.layers[li].in, B * kChannels);
      ws.ga.noalias() = params.weights(li).transpose() * ws.gz;
    }
  }
}

}  // namespace arcpinn::jet
