#include "arcpinn/fdm.hpp"

#include <cmath>

#include <Eigen/Core>

#include "arcpinn/common.hpp"
#include "arcpinn/physics.hpp"

namespace arcpinn {

GridSpec oracle_preset(const std::string& name) {
  if (name == "cc") return {0.5, 0.02};
  if (name == "fc") return {0.1, 0.02};
  if (name == "ff") return {0.1, 0.005};
  throw ConfigError("unknown oracle preset: " + name);
}

std::vector<double> lattice_times(const DomainSpec& dom, const GridSpec& g) {
  const long long n = std::llround(dom.t_end / g.dt);
  std::vector<double> out(n + 1);
  for (long long i = 0; i <= n; ++i) out[i] = static_cast<double>(i) * g.dt;
  return out;
}

namespace {

struct Stencil {
  int nx, ny, nz;
  double dx;
  // Conduction face coefficients k A / dx per direction, indexed by the
  // transverse node indices (shared by both sides of the face).
  std::vector<double> cfx;  // ny*nz
  std::vector<double> cfy;  // nx*nz
  std::vector<double> cfz;  // nx*ny
  Eigen::VectorXd diag;     // full diagonal incl. mass and convection
  Eigen::VectorXd inv_diag; // Jacobi preconditioner
  std::vector<std::uint8_t> fixed;
  int threads = 1;

  std::size_t id(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny + j) * nx + i;
  }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    const int NX = nx, NY = ny, NZ = nz;
    auto run_slab = [&](std::size_t k0) {
      const int k = static_cast<int>(k0);
      for (int j = 0; j < NY; ++j) {
        for (int i = 0; i < NX; ++i) {
          const std::size_t n = id(i, j, k);
          if (fixed[n]) {
            out[n] = x[n];
            continue;
          }
          double acc = diag[n] * x[n];
          if (i > 0 && !fixed[n - 1]) acc -= cfx[k * NY + j] * x[n - 1];
          if (i + 1 < NX && !fixed[n + 1]) acc -= cfx[k * NY + j] * x[n + 1];
          if (j > 0 && !fixed[n - NX]) acc -= cfy[k * NX + i] * x[n - NX];
          if (j + 1 < NY && !fixed[n + NX]) acc -= cfy[k * NX + i] * x[n + NX];
          const std::size_t pl = static_cast<std::size_t>(NX) * NY;
          if (k > 0 && !fixed[n - pl]) acc -= cfz[j * NX + i] * x[n - pl];
          if (k + 1 < NZ && !fixed[n + pl]) acc -= cfz[j * NX + i] * x[n + pl];
          out[n] = acc;
        }
      }
    };
    parallel_blocks(NZ, threads, run_slab);
  }
};

// Jacobi-preconditioned conjugate gradients; returns iterations used.
int solve_cg(const Stencil& st, const Eigen::VectorXd& b, Eigen::VectorXd& x,
             double tol, int max_iter) {
  const Eigen::Index n = b.size();
  Eigen::VectorXd r(n), z(n), p(n), ap(n);
  st.apply(x, ap);
  r = b - ap;
  const double bnorm = b.norm();
  if (bnorm == 0 || r.norm() <= tol * bnorm) return 0;
  z = st.inv_diag.cwiseProduct(r);
  p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= max_iter; ++it) {
    st.apply(p, ap);
    const double alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    if (r.norm() <= tol * bnorm) return it;
    z = st.inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw NumericError("conjugate gradients failed to converge");
}

}  // namespace

TemperatureGrid fdm_solve(const RunConfig& cfg, const GridSpec& grid,
                          const std::vector<double>& output_times,
                          const FdmOptions& opt) {
  grid.validate(cfg.domain);
  const MaterialProps& mat = cfg.material;
  const DomainSpec& dom = cfg.domain;
  const double dx = grid.dx, dt = grid.dt;
  const double t_init = opt.initial_temp >= 0 ? opt.initial_temp : mat.t_ambient;
  const double t_bottom = opt.bottom_temp >= 0 ? opt.bottom_temp : mat.t_ambient;
  const double sig_eps = kStefanBoltzmann * mat.emissivity;
  const double rad_shift =
      cfg.residuals.radiation == RadiationConvention::kKelvinShifted
          ? kCelsiusToKelvin
          : 0.0;

  TemperatureGrid out = make_grid(dom, grid, output_times);
  const int nx = out.nx, ny = out.ny, nz = out.nz;
  const std::size_t N = out.nodes();

  const long long n_steps = std::llround(dom.t_end / dt);
  // Map requested output times onto the time lattice.
  std::vector<long long> out_step(output_times.size());
  for (std::size_t s = 0; s < output_times.size(); ++s) {
    const double q = output_times[s] / dt;
    out_step[s] = std::llround(q);
    if (out_step[s] < 0 || out_step[s] > n_steps ||
        std::abs(q - static_cast<double>(out_step[s])) > 1e-9)
      throw ConfigError("output time " + std::to_string(output_times[s]) +
                        " is not on the time lattice");
  }

  auto weight = [&](int i, int n) { return (i == 0 || i == n - 1) ? 0.5 * dx : dx; };

  Stencil st;
  st.nx = nx; st.ny = ny; st.nz = nz; st.dx = dx;
  st.threads = opt.threads;
  st.cfx.resize(static_cast<std::size_t>(ny) * nz);
  st.cfy.resize(static_cast<std::size_t>(nx) * nz);
  st.cfz.resize(static_cast<std::size_t>(nx) * ny);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      st.cfx[static_cast<std::size_t>(k) * ny + j] =
          mat.k * weight(j, ny) * weight(k, nz) / dx;
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i)
      st.cfy[static_cast<std::size_t>(k) * nx + i] =
          mat.k * weight(i, nx) * weight(k, nz) / dx;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      st.cfz[static_cast<std::size_t>(j) * nx + i] =
          mat.k * weight(i, nx) * weight(j, ny) / dx;

  st.fixed.assign(N, 0);
  if (opt.bottom_dirichlet)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) st.fixed[st.id(i, j, 0)] = 1;

  Eigen::VectorXd volume(N), robin_area(N), mass(N);
  st.diag.resize(N);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::size_t n = st.id(i, j, k);
        const double wx = weight(i, nx), wy = weight(j, ny), wz = weight(k, nz);
        volume[n] = wx * wy * wz;
        double area = 0.0;
        if (i == 0) area += wy * wz;
        if (i == nx - 1) area += wy * wz;
        if (j == 0) area += wx * wz;
        if (j == ny - 1) area += wx * wz;
        if (k == nz - 1) area += wx * wy;
        if (k == 0 && !opt.bottom_dirichlet) area += wx * wy;
        robin_area[n] = area;
        mass[n] = mat.rho * mat.cp * volume[n] / dt;

        double diag = mass[n] + mat.h_conv * area;
        if (i > 0) diag += st.cfx[static_cast<std::size_t>(k) * ny + j];
        if (i + 1 < nx) diag += st.cfx[static_cast<std::size_t>(k) * ny + j];
        if (j > 0) diag += st.cfy[static_cast<std::size_t>(k) * nx + i];
        if (j + 1 < ny) diag += st.cfy[static_cast<std::size_t>(k) * nx + i];
        if (k > 0) diag += st.cfz[static_cast<std::size_t>(j) * nx + i];
        if (k + 1 < nz) diag += st.cfz[static_cast<std::size_t>(j) * nx + i];
        st.diag[n] = st.fixed[n] ? 1.0 : diag;
      }
  st.inv_diag = st.diag.cwiseInverse();

  // Initial field.
  Eigen::VectorXd temp(N);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        temp[st.id(i, j, k)] =
            opt.initial_field
                ? opt.initial_field(i * dx, j * dx, k * dx)
                : t_init;
  if (opt.bottom_dirichlet)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) temp[st.id(i, j, 0)] = t_bottom;

  auto store_slices = [&](long long step) {
    for (std::size_t s = 0; s < out_step.size(); ++s)
      if (out_step[s] == step)
        for (std::size_t n = 0; n < N; ++n) out.slice(s)[n] = temp[n];
  };
  store_slices(0);

  Eigen::VectorXd source(N), b(N), t_star(N), x(N);
  const double th0 = mat.t_ambient + rad_shift;
  const double th0_4 = th0 * th0 * th0 * th0;

  for (long long step = 1; step <= n_steps; ++step) {
    const double t1 = static_cast<double>(step) * dt;
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const std::size_t n = st.id(i, j, k);
          source[n] = volume[n] * goldak_flux(i * dx, j * dx, k * dx, t1,
                                              cfg.goldak, dom.lz);
        }

    t_star = temp;
    bool converged = false;
    for (int sweep = 0; sweep < opt.max_picard; ++sweep) {
      for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
          for (int i = 0; i < nx; ++i) {
            const std::size_t n = st.id(i, j, k);
            if (st.fixed[n]) {
              b[n] = t_bottom;
              continue;
            }
            double rhs = mass[n] * temp[n] + source[n] +
                         mat.h_conv * robin_area[n] * mat.t_ambient;
            if (sig_eps > 0 && robin_area[n] > 0) {
              const double th = t_star[n] + rad_shift;
              const double th4 = th * th * th * th;
              rhs -= robin_area[n] * sig_eps * (th4 - th0_4);
            }
            // Dirichlet neighbors enter through the right-hand side.
            if (opt.bottom_dirichlet && k == 1)
              rhs += st.cfz[static_cast<std::size_t>(j) * nx + i] * t_bottom;
            b[n] = rhs;
          }

      x = t_star;
      solve_cg(st, b, x, opt.cg_tol, 10000);
      const double delta = (x - t_star).lpNorm<Eigen::Infinity>();
      t_star = x;
      if (sig_eps == 0 || delta <= opt.picard_tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericError("Picard iteration did not converge at step " +
                         std::to_string(step));
    temp = t_star;
    store_slices(step);
  }

  return out;
}

double analytic_slab_1d(double x, double t, double length, double t_init,
                        double t_boundary, double alpha) {
  if (x < 0 || x > length) throw NumericError("slab position outside [0, L]");
  if (t <= 0) return x == 0 || x == length ? t_boundary : t_init;
  const double dT = t_init - t_boundary;
  double acc = 0.0;
  for (int n = 1; n < 100001; n += 2) {
    const double kn = n * M_PI / length;
    const double term = 4.0 / (n * M_PI) * std::exp(-alpha * kn * kn * t);
    if (std::abs(term) < 1e-12) break;
    acc += term * std::sin(kn * x);
  }
  return t_boundary + dT * acc;
}

double rosenthal_field(double x, double y, double z, double t,
                       const GoldakParams& gp, const MaterialProps& mat,
                       double lz) {
  const double xi = x - (gp.x0 + gp.velocity * t);
  const double dy = y - gp.y0;
  const double dz = z - lz;
  const double r = std::sqrt(xi * xi + dy * dy + dz * dz);
  if (r < 0.5)
    throw NumericError("rosenthal_field: point within 0.5 mm of the source");
  const double alpha = mat.k / (mat.rho * mat.cp);
  return mat.t_ambient + gp.efficiency * gp.power / (2.0 * M_PI * mat.k * r) *
                             std::exp(-gp.velocity * (r + xi) / (2.0 * alpha));
}

}  // namespace arcpinn
