#include "arcpinn/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "arcpinn/common.hpp"
#include "arcpinn/jet_kernels.hpp"

namespace arcpinn {

MlpParams MlpParams::make(int inputs, int hidden_layers, int width,
                          int outputs) {
  MlpParams p;
  int in = inputs;
  for (int l = 0; l < hidden_layers; ++l) {
    p.layers.push_back({in, width});
    in = width;
  }
  p.layers.push_back({in, outputs});
  std::size_t n = 0;
  for (const auto& s : p.layers)
    n += static_cast<std::size_t>(s.in) * s.out + s.out;
  p.data = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  return p;
}

std::size_t MlpParams::weight_offset(std::size_t layer) const {
  std::size_t off = 0;
  for (std::size_t l = 0; l < layer; ++l)
    off += static_cast<std::size_t>(layers[l].in) * layers[l].out +
           layers[l].out;
  return off;
}

std::size_t MlpParams::bias_offset(std::size_t layer) const {
  return weight_offset(layer) +
         static_cast<std::size_t>(layers[layer].in) * layers[layer].out;
}

Eigen::Map<const Eigen::MatrixXd> MlpParams::weights(std::size_t l) const {
  return {data.data() + weight_offset(l), layers[l].out, layers[l].in};
}
Eigen::Map<Eigen::MatrixXd> MlpParams::weights(std::size_t l) {
  return {data.data() + weight_offset(l), layers[l].out, layers[l].in};
}
Eigen::Map<const Eigen::VectorXd> MlpParams::biases(std::size_t l) const {
  return {data.data() + bias_offset(l), layers[l].out};
}
Eigen::Map<Eigen::VectorXd> MlpParams::biases(std::size_t l) {
  return {data.data() + bias_offset(l), layers[l].out};
}

MlpParams init_params(std::uint64_t seed, int inputs, int hidden_layers,
                      int width, int outputs, double gain) {
  MlpParams p = MlpParams::make(inputs, hidden_layers, width, outputs);
  p.init_gain = gain;
  Rng rng(seed);
  for (std::size_t l = 0; l < p.layer_count(); ++l) {
    auto w = p.weights(l);
    const double std_dev = gain / std::sqrt(static_cast<double>(p.layers[l].in));
    // Row-major draw order (output index fastest varying last) so the
    // sequence is independent of Eigen's storage layout.
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) w(r, c) = std_dev * rng.normal();
    p.biases(l).setZero();
  }
  return p;
}

GeluDerivs gelu_derivs(double x) {
  // gelu(x) = x Phi(x); Phi and phi are the standard normal CDF/PDF.
  const double inv_sqrt2 = 0.70710678118654752440;
  const double inv_sqrt2pi = 0.39894228040143267794;
  const double Phi = 0.5 * std::erfc(-x * inv_sqrt2);
  const double phi = inv_sqrt2pi * std::exp(-0.5 * x * x);
  GeluDerivs g;
  g.value = x * Phi;
  g.d1 = Phi + x * phi;
  g.d2 = (2.0 - x * x) * phi;
  g.d3 = (x * x * x - 4.0 * x) * phi;
  return g;
}

std::array<double, 3> gelu_jet(double x) {
  const GeluDerivs g = gelu_derivs(x);
  return {g.value, g.d1, g.d2};
}

SoftplusDerivs softplus_derivs(double x) {
  SoftplusDerivs s;
  s.value = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
  const double sig = x >= 0 ? 1.0 / (1.0 + std::exp(-x))
                            : [&] {
                                const double e = std::exp(x);
                                return e / (1.0 + e);
                              }();
  s.d1 = sig;
  s.d2 = sig * (1.0 - sig);
  s.d3 = s.d2 * (1.0 - 2.0 * sig);
  return s;
}

double forward(const MlpParams& params, const std::array<double, 4>& input) {
  jet::Workspace ws;
  jet::forward_point(params, input.data(), ws);
  return ws.head[0];
}

Jet forward_jet(const MlpParams& params, const std::array<double, 4>& input) {
  jet::Workspace ws;
  jet::forward_point(params, input.data(), ws);
  Jet j;
  j.value = ws.head[0];
  for (int d = 0; d < 4; ++d) j.grad[d] = ws.head[1 + d];
  for (int e = 0; e < 3; ++e) j.lap[e] = ws.head[5 + e];
  return j;
}

Eigen::VectorXd forward_batch(const MlpParams& params,
                              const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != params.layers.front().in)
    throw NumericError("forward_batch: input row count mismatch");
  const std::size_t L = params.layer_count();
  Eigen::MatrixXd a = inputs;
  Eigen::MatrixXd z;
  for (std::size_t l = 0; l < L; ++l) {
    z.noalias() = params.weights(l) * a;
    z.colwise() += params.biases(l);
    if (l + 1 < L) {
      if (params.activation == Activation::kGelu) {
        for (Eigen::Index c = 0; c < z.cols(); ++c)
          for (Eigen::Index r = 0; r < z.rows(); ++r)
            z(r, c) = gelu_derivs(z(r, c)).value;
      }
      a = z;
    } else {
      a = z;
    }
  }
  return a.row(0).transpose();
}

Jet apply_output_transform(const Jet& raw, const std::array<double, 4>& phys,
                           const OutputTransform& xf, const DomainSpec& dom) {
  const SoftplusDerivs s = softplus_derivs(raw.value);
  const double tau = phys[3] / dom.t_end;
  const double cd[4] = {2.0 / dom.lx, 2.0 / dom.ly, 2.0 / dom.lz,
                        2.0 / dom.t_end};
  const double D = xf.delta_t;

  Jet out;
  out.value = xf.t_ambient + tau * D * s.value;
  for (int e = 0; e < 3; ++e) {
    out.grad[e] = tau * D * s.d1 * raw.grad[e] * cd[e];
    out.lap[e] = tau * D *
                 (s.d2 * raw.grad[e] * raw.grad[e] + s.d1 * raw.lap[e]) *
                 cd[e] * cd[e];
  }
  out.grad[3] =
      tau * D * s.d1 * raw.grad[3] * cd[3] + D * s.value / dom.t_end;
  return out;
}

double temperature(const MlpParams& params, const OutputTransform& xf,
                   const DomainSpec& dom, const std::array<double, 4>& phys) {
  const auto q = normalize_point(phys, dom);
  const double raw = forward(params, q);
  const double tau = phys[3] / dom.t_end;
  return xf.t_ambient + tau * xf.delta_t * softplus_derivs(raw).value;
}

Jet temperature_jet(const MlpParams& params, const OutputTransform& xf,
                    const DomainSpec& dom, const std::array<double, 4>& phys) {
  const auto q = normalize_point(phys, dom);
  return apply_output_transform(forward_jet(params, q), phys, xf, dom);
}

namespace {

constexpr char kMagic[4] = {'A', 'P', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated checkpoint: " + path);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, static_cast<std::uint32_t>(ckpt.params.layer_count()));
  for (const auto& s : ckpt.params.layers) {
    put(out, static_cast<std::uint32_t>(s.in));
    put(out, static_cast<std::uint32_t>(s.out));
  }
  put(out, static_cast<std::uint32_t>(ckpt.params.activation));
  put(out, ckpt.params.init_gain);
  put(out, ckpt.transform.t_ambient);
  put(out, ckpt.transform.delta_t);
  put(out, ckpt.domain.lx);
  put(out, ckpt.domain.ly);
  put(out, ckpt.domain.lz);
  put(out, ckpt.domain.t_end);
  out.write(reinterpret_cast<const char*>(ckpt.params.data.data()),
            static_cast<std::streamsize>(sizeof(double) *
                                         ckpt.params.data.size()));
  if (!out) throw IoError("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not an arcpinn checkpoint: " + path);
  const auto version = get<std::uint32_t>(in, path);
  if (version != kVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  const auto n_layers = get<std::uint32_t>(in, path);
  if (n_layers == 0 || n_layers > 1024)
    throw IoError("corrupt checkpoint header: " + path);

  Checkpoint ckpt;
  std::size_t count = 0;
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    const auto lin = get<std::uint32_t>(in, path);
    const auto lout = get<std::uint32_t>(in, path);
    if (lin == 0 || lout == 0)
      throw IoError("corrupt layer shape in checkpoint: " + path);
    ckpt.params.layers.push_back(
        {static_cast<int>(lin), static_cast<int>(lout)});
    count += static_cast<std::size_t>(lin) * lout + lout;
  }
  for (std::size_t l = 1; l < ckpt.params.layers.size(); ++l)
    if (ckpt.params.layers[l].in != ckpt.params.layers[l - 1].out)
      throw IoError("inconsistent layer shape chain in checkpoint: " + path);
  ckpt.params.activation =
      static_cast<Activation>(get<std::uint32_t>(in, path));
  ckpt.params.init_gain = get<double>(in, path);
  ckpt.transform.t_ambient = get<double>(in, path);
  ckpt.transform.delta_t = get<double>(in, path);
  ckpt.domain.lx = get<double>(in, path);
  ckpt.domain.ly = get<double>(in, path);
  ckpt.domain.lz = get<double>(in, path);
  ckpt.domain.t_end = get<double>(in, path);
  ckpt.params.data.resize(static_cast<Eigen::Index>(count));
  in.read(reinterpret_cast<char*>(ckpt.params.data.data()),
          static_cast<std::streamsize>(sizeof(double) * count));
  if (!in) throw IoError("truncated checkpoint payload: " + path);
  return ckpt;
}

}  // namespace arcpinn
