#include "arcpinn/lbfgs.hpp"

#include <cmath>
#include <vector>

#include "arcpinn/common.hpp"

namespace arcpinn {

void LbfgsState::push_pair(const Eigen::VectorXd& s_new,
                           const Eigen::VectorXd& y_new, int capacity) {
  const double sy = s_new.dot(y_new);
  if (sy <= 1e-10 * s_new.norm() * y_new.norm()) return;  // no curvature
  s.push_back(s_new);
  y.push_back(y_new);
  rho.push_back(1.0 / sy);
  while (static_cast<int>(s.size()) > capacity) {
    s.pop_front();
    y.pop_front();
    rho.pop_front();
  }
}

void LbfgsState::clear_history() {
  s.clear();
  y.clear();
  rho.clear();
}

namespace {

// Two-loop recursion with gamma-scaled identity seed.
Eigen::VectorXd search_direction(const LbfgsState& st,
                                 const Eigen::VectorXd& g) {
  Eigen::VectorXd q = -g;
  const int m = static_cast<int>(st.s.size());
  if (m == 0) return q;
  std::vector<double> alpha(m);
  for (int i = m - 1; i >= 0; --i) {
    alpha[i] = st.rho[i] * st.s[i].dot(q);
    q -= alpha[i] * st.y[i];
  }
  const double gamma = st.s[m - 1].dot(st.y[m - 1]) / st.y[m - 1].squaredNorm();
  q *= gamma;
  for (int i = 0; i < m; ++i) {
    const double beta = st.rho[i] * st.y[i].dot(q);
    q += (alpha[i] - beta) * st.s[i];
  }
  return q;
}

// Cubic minimizer of the interpolant through (a, fa, da) and (b, fb, db),
// safeguarded to the interior of [a, b].
double cubic_interp(double a, double fa, double da, double b, double fb,
                    double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double lo = std::min(a, b), hi = std::max(a, b);
  if (disc < 0) return 0.5 * (lo + hi);
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  double t = b - (b - a) * ((db + d2 - d1) / (db - da + 2.0 * d2));
  if (!std::isfinite(t)) return 0.5 * (lo + hi);
  const double margin = 0.1 * (hi - lo);
  return std::min(std::max(t, lo + margin), hi - margin);
}

}  // namespace

LbfgsEpochResult lbfgs_epoch(LbfgsState& st, Eigen::VectorXd& x,
                             const LossGradFn& fg, const LbfgsParams& prm) {
  LbfgsEpochResult res;
  const Eigen::Index n = x.size();
  if (st.gx.size() != n) {
    st.gx.resize(n);
    st.evaluated = false;
  }

  Eigen::VectorXd g_trial(n);
  auto evaluate = [&](const Eigen::VectorXd& pt, Eigen::VectorXd& grad) {
    ++res.evaluations;
    return fg(pt, grad);
  };

  if (!st.evaluated) {
    st.fx = evaluate(x, st.gx);
    st.evaluated = true;
  }
  res.loss = st.fx;

  while (res.iterations < prm.max_iterations &&
         res.evaluations < prm.max_evaluations) {
    if (st.gx.lpNorm<Eigen::Infinity>() <= prm.grad_tol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd d = search_direction(st, st.gx);
    double dg0 = d.dot(st.gx);
    if (dg0 >= 0) {
      // Direction lost descent; restart from steepest descent.
      st.clear_history();
      d = -st.gx;
      dg0 = d.dot(st.gx);
    }

    const double f0 = st.fx;
    const double alpha0 =
        st.s.empty() ? prm.lr / std::max(1.0, d.lpNorm<Eigen::Infinity>())
                     : 1.0;

    // Strong-Wolfe search: bracketing phase then zoom.
    double best_alpha = 0.0, best_f = f0;
    Eigen::VectorXd best_g = st.gx;
    bool accepted = false;
    double a_prev = 0.0, f_prev = f0, dg_prev = dg0;
    double alpha = alpha0;
    double a_lo = 0, f_lo = f0, dg_lo = dg0;
    double a_hi = 0, f_hi = 0, dg_hi = 0;
    bool bracketed = false;
    double f_acc = 0.0;

    for (int ls = 0;
         ls < 30 && res.evaluations < prm.max_evaluations; ++ls) {
      const Eigen::VectorXd xt = x + alpha * d;
      const double ft = evaluate(xt, g_trial);
      const double dgt = d.dot(g_trial);
      if (std::isfinite(ft) && ft < best_f) {
        best_f = ft;
        best_alpha = alpha;
        best_g = g_trial;
      }

      if (!bracketed) {
        if (!std::isfinite(ft) || ft > f0 + prm.c1 * alpha * dg0 ||
            (ls > 0 && ft >= f_prev)) {
          a_lo = a_prev; f_lo = f_prev; dg_lo = dg_prev;
          a_hi = alpha; f_hi = ft; dg_hi = dgt;
          bracketed = true;
        } else if (std::abs(dgt) <= -prm.c2 * dg0) {
          accepted = true;
          f_acc = ft;
          break;
        } else if (dgt >= 0) {
          a_lo = alpha; f_lo = ft; dg_lo = dgt;
          a_hi = a_prev; f_hi = f_prev; dg_hi = dg_prev;
          bracketed = true;
        } else {
          a_prev = alpha; f_prev = ft; dg_prev = dgt;
          alpha = std::min(2.0 * alpha, 1e10);
          continue;
        }
        if (bracketed) {
          alpha = std::isfinite(f_hi)
                      ? cubic_interp(a_lo, f_lo, dg_lo, a_hi, f_hi, dg_hi)
                      : 0.5 * (a_lo + a_hi);
          continue;
        }
      }

      // Zoom phase: [a_lo, a_hi] brackets a Wolfe point.
      if (!std::isfinite(ft) || ft > f0 + prm.c1 * alpha * dg0 || ft >= f_lo) {
        a_hi = alpha; f_hi = ft; dg_hi = dgt;
      } else {
        if (std::abs(dgt) <= -prm.c2 * dg0) {
          accepted = true;
          f_acc = ft;
          break;
        }
        if (dgt * (a_hi - a_lo) >= 0) {
          a_hi = a_lo; f_hi = f_lo; dg_hi = dg_lo;
        }
        a_lo = alpha; f_lo = ft; dg_lo = dgt;
      }
      if (std::abs(a_hi - a_lo) <= 1e-16 * std::max(1.0, std::abs(a_lo)))
        break;
      alpha = std::isfinite(f_hi)
                  ? cubic_interp(a_lo, f_lo, dg_lo, a_hi, f_hi, dg_hi)
                  : 0.5 * (a_lo + a_hi);
    }

    if (!accepted) {
      // Fall back to the best strictly-decreasing point if any; otherwise
      // the epoch terminates with the current parameters.
      if (best_alpha > 0 && best_f < f0) {
        alpha = best_alpha;
        g_trial = best_g;
        f_acc = best_f;
        accepted = true;
      } else {
        res.line_search_failed = true;
        break;
      }
    }

    const Eigen::VectorXd s_new = alpha * d;
    const Eigen::VectorXd y_new = g_trial - st.gx;
    x += s_new;
    st.fx = f_acc;
    st.gx = g_trial;
    st.push_pair(s_new, y_new, prm.history);
    ++res.iterations;
    res.loss = st.fx;
  }

  res.loss = st.fx;
  return res;
}

}  // namespace arcpinn
