#include "arcpinn/grad.hpp"

#include <atomic>
#include <cmath>

#include "arcpinn/jet_kernels.hpp"
#include "arcpinn/physics.hpp"

namespace arcpinn {

namespace {

constexpr std::size_t kBlockPoints = 256;

template <typename T, typename Add>
T pairwise_reduce(std::vector<T>& items, Add add) {
  // In-place pairwise tree; order depends only on the item count.
  std::size_t n = items.size();
  while (n > 1) {
    const std::size_t h = (n + 1) / 2;
    for (std::size_t i = 0; i + h < n; ++i) add(items[i], items[i + h]);
    n = h;
  }
  return items[0];
}

}  // namespace

ResidualProblem::ResidualProblem(const CollocationSet& set,
                                 const RunConfig& cfg) {
  const DomainSpec& dom = cfg.domain;
  rho_cp_ = cfg.material.rho * cfg.material.cp;
  k_ = cfg.material.k;
  h_ = cfg.material.h_conv;
  eps_ = cfg.material.emissivity;
  t_ambient_ = cfg.material.t_ambient;
  delta_t_ = cfg.network.delta_t;
  t_end_ = dom.t_end;
  cd_[0] = 2.0 / dom.lx;
  cd_[1] = 2.0 / dom.ly;
  cd_[2] = 2.0 / dom.lz;
  cd_[3] = 2.0 / dom.t_end;
  pde_scale_ = cfg.pde_scale();
  bc_scale_ = cfg.bc_scale();
  rad_shift_ = cfg.residuals.radiation == RadiationConvention::kKelvinShifted
                   ? kCelsiusToKelvin
                   : 0.0;

  bc_points_.reserve(set.boundary.size());
  for (const auto& p : set.boundary) {
    EvalPoint e{};
    e.norm = normalize_point({p.x, p.y, p.z, p.t}, dom);
    e.tau = p.t / dom.t_end;
    e.flux = 0.0;
    if (p.face == Face::kMinusZ) {
      e.face_axis = -1;
      e.face_sign = 0.0;
    } else {
      const auto n = face_normal(p.face);
      e.face_axis = n[0] != 0 ? 0 : (n[1] != 0 ? 1 : 2);
      e.face_sign = n[0] + n[1] + n[2];
    }
    bc_points_.push_back(e);
  }
  pde_points_.reserve(set.domain.size());
  for (const auto& p : set.domain) {
    EvalPoint e{};
    e.norm = normalize_point({p.x, p.y, p.z, p.t}, dom);
    e.tau = p.t / dom.t_end;
    e.flux = goldak_flux(p.x, p.y, p.z, p.t, cfg.goldak, dom.lz);
    e.face_axis = -2;
    e.face_sign = 0.0;
    pde_points_.push_back(e);
  }
  n_bc_ = bc_points_.size();
  n_pde_ = pde_points_.size();
}

LossAndGrad ResidualProblem::loss_and_grad(const MlpParams& params,
                                           int threads) const {
  return run(params, threads, 0, n_bc_, 0, n_pde_);
}

LossAndGrad ResidualProblem::loss_and_grad_minibatch(
    const MlpParams& params, int threads, std::int64_t epoch,
    std::int64_t batch_size) const {
  if (batch_size <= 0 ||
      batch_size >= static_cast<std::int64_t>(n_bc_ + n_pde_))
    return loss_and_grad(params, threads);
  const double f =
      static_cast<double>(batch_size) / static_cast<double>(n_bc_ + n_pde_);
  const std::size_t nb = std::max<std::size_t>(
      1, std::llround(f * static_cast<double>(n_bc_)));
  const std::size_t np = std::max<std::size_t>(
      1, std::llround(f * static_cast<double>(n_pde_)));
  const std::size_t ob = (static_cast<std::size_t>(epoch) * nb) % n_bc_;
  const std::size_t op = (static_cast<std::size_t>(epoch) * np) % n_pde_;
  return run(params, threads, ob, nb, op, np);
}

LossAndGrad ResidualProblem::run(const MlpParams& params, int threads,
                                 std::size_t bc_begin, std::size_t bc_count,
                                 std::size_t pde_begin,
                                 std::size_t pde_count) const {
  struct BlockDesc {
    const EvalPoint* points;
    std::size_t wrap;   // category size for wrapped windows
    std::size_t begin;  // logical offset into the window
    std::size_t count;
    bool is_bc;
  };
  std::vector<BlockDesc> blocks;
  auto add_blocks = [&](const std::vector<EvalPoint>& pts, std::size_t begin,
                        std::size_t count, bool is_bc) {
    for (std::size_t off = 0; off < count; off += kBlockPoints)
      blocks.push_back({pts.data(), pts.size(), begin + off,
                        std::min(kBlockPoints, count - off), is_bc});
  };
  add_blocks(bc_points_, bc_begin, bc_count, true);
  add_blocks(pde_points_, pde_begin, pde_count, false);

  struct Partial {
    Eigen::VectorXd grad;
    double ssq = 0.0;
    bool is_bc = false;
  };
  std::vector<Partial> partials(blocks.size());

  std::atomic<long> bad_point{-1};
  const Eigen::Index n_params = params.data.size();
  const int n_in = params.layers.front().in;

  parallel_blocks(blocks.size(), threads, [&](std::size_t bi) {
    thread_local jet::BatchWorkspace ws;
    const BlockDesc& blk = blocks[bi];
    const Eigen::Index B = static_cast<Eigen::Index>(blk.count);
    ws.input.resize(n_in, B * jet::kChannels);
    for (Eigen::Index p = 0; p < B; ++p) {
      const EvalPoint& ep =
          blk.points[(blk.begin + static_cast<std::size_t>(p)) % blk.wrap];
      jet::seed_point(ep.norm.data(), n_in,
                      ws.input.data() + p * jet::kChannels * n_in, n_in);
    }
    jet::forward_points(params, ws);

    ws.head_adj.resize(1, B * jet::kChannels);
    ws.head_adj.setZero();

    Partial& out = partials[bi];
    out.is_bc = blk.is_bc;
    double ssq = 0.0;
    for (Eigen::Index p = 0; p < B; ++p) {
      const EvalPoint& ep =
          blk.points[(blk.begin + static_cast<std::size_t>(p)) % blk.wrap];
      const double* r = ws.head.data() + p * jet::kChannels;  // 8 channels
      const SoftplusDerivs s = softplus_derivs(r[0]);
      const double D = delta_t_;
      const double tau = ep.tau;
      double R = 0.0;
      double dr[8] = {0, 0, 0, 0, 0, 0, 0, 0};

      if (ep.face_axis == -2) {
        // PDE residual.
        const double v1t = tau * D * s.d1 * r[4] * cd_[3] + D * s.value / t_end_;
        double lap = 0.0, dlap_dr0 = 0.0;
        for (int e = 0; e < 3; ++e) {
          const double c2 = cd_[e] * cd_[e];
          lap += tau * D * (s.d2 * r[1 + e] * r[1 + e] + s.d1 * r[5 + e]) * c2;
          dlap_dr0 +=
              tau * D * (s.d3 * r[1 + e] * r[1 + e] + s.d2 * r[5 + e]) * c2;
        }
        R = pde_scale_ * (rho_cp_ * v1t - k_ * lap - ep.flux);
        dr[0] = pde_scale_ *
                (rho_cp_ * (tau * D * s.d2 * r[4] * cd_[3] + D * s.d1 / t_end_) -
                 k_ * dlap_dr0);
        dr[4] = pde_scale_ * rho_cp_ * tau * D * s.d1 * cd_[3];
        for (int e = 0; e < 3; ++e) {
          const double c2 = cd_[e] * cd_[e];
          dr[1 + e] = -pde_scale_ * k_ * tau * D * 2.0 * s.d2 * r[1 + e] * c2;
          dr[5 + e] = -pde_scale_ * k_ * tau * D * s.d1 * c2;
        }
      } else if (ep.face_axis == -1) {
        // Bottom Dirichlet residual.
        R = tau * D * s.value;
        dr[0] = tau * D * s.d1;
      } else {
        // Robin residual.
        const int a = ep.face_axis;
        const double sn = ep.face_sign;
        const double v0 = t_ambient_ + tau * D * s.value;
        const double v1a = tau * D * s.d1 * r[1 + a] * cd_[a];
        const double th = v0 + rad_shift_;
        const double th0 = t_ambient_ + rad_shift_;
        const double th2 = th * th, th02 = th0 * th0;
        const double q = h_ * (v0 - t_ambient_) +
                         kStefanBoltzmann * eps_ * (th2 * th2 - th02 * th02);
        const double dq_dv0 = h_ + 4.0 * kStefanBoltzmann * eps_ * th2 * th;
        R = bc_scale_ * (-k_ * sn * v1a - q);
        dr[0] = bc_scale_ * (-k_ * sn * tau * D * s.d2 * r[1 + a] * cd_[a] -
                             dq_dv0 * tau * D * s.d1);
        dr[1 + a] = -bc_scale_ * k_ * sn * tau * D * s.d1 * cd_[a];
      }

      if (!std::isfinite(R)) {
        long expected = -1;
        bad_point.compare_exchange_strong(
            expected,
            static_cast<long>((blk.begin + static_cast<std::size_t>(p)) %
                              blk.wrap));
        return;
      }
      ssq += R * R;
      double* adj = ws.head_adj.data() + p * jet::kChannels;
      for (int ch = 0; ch < 8; ++ch) adj[ch] = 2.0 * R * dr[ch];
    }
    out.ssq = ssq;
    out.grad = Eigen::VectorXd::Zero(n_params);
    jet::backward_points(params, ws, out.grad);
  });

  if (bad_point.load() >= 0)
    throw NumericError("non-finite residual at collocation point index " +
                       std::to_string(bad_point.load()));

  // Ordered pairwise reduction per category.
  std::vector<Eigen::VectorXd> g_bc, g_pde;
  std::vector<double> s_bc, s_pde;
  for (auto& part : partials) {
    if (part.is_bc) {
      g_bc.push_back(std::move(part.grad));
      s_bc.push_back(part.ssq);
    } else {
      g_pde.push_back(std::move(part.grad));
      s_pde.push_back(part.ssq);
    }
  }

  LossAndGrad out;
  out.n_bc = bc_count;
  out.n_pde = pde_count;
  auto addv = [](Eigen::VectorXd& a, const Eigen::VectorXd& b) { a += b; };
  auto adds = [](double& a, const double& b) { a += b; };
  out.grad_bc = g_bc.empty()
                    ? Eigen::VectorXd::Zero(n_params).eval()
                    : pairwise_reduce(g_bc, addv) / static_cast<double>(bc_count);
  out.grad_pde = g_pde.empty()
                     ? Eigen::VectorXd::Zero(n_params).eval()
                     : pairwise_reduce(g_pde, addv) / static_cast<double>(pde_count);
  out.l_bc = s_bc.empty() ? 0.0
                          : pairwise_reduce(s_bc, adds) /
                                static_cast<double>(bc_count);
  out.l_pde = s_pde.empty() ? 0.0
                            : pairwise_reduce(s_pde, adds) /
                                  static_cast<double>(pde_count);
  if (!std::isfinite(out.l_bc) || !std::isfinite(out.l_pde))
    throw NumericError("non-finite loss");
  return out;
}

}  // namespace arcpinn
