#pragma once

// Small dense local minimizer: backtracking gradient descent to reach the basin, then a
// modified Newton iteration (Hessian eigenvalues replaced by their magnitudes, floored) to polish.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace tdt::opt {

struct LocalOptions {
  double grad_tol = 1e-13;     // stop when the gradient norm is below this
  double accept_tol = 1e-8;    // converged flag threshold on the final gradient norm
  double newton_switch = 1e-2; // gradient norm below which Newton steps take over
  int descent_iters = 400;
  int newton_iters = 200;
};

template <int N>
struct LocalResult {
  Eigen::Matrix<double, N, 1> x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline double noise_floor(double value) {
  return 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(value));
}

template <int N>
Eigen::Matrix<double, N, 1> newton_direction(const Eigen::Matrix<double, N, N>& hess,
                                             const Eigen::Matrix<double, N, 1>& grad) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(hess);
  const auto& w = es.eigenvalues();
  const auto& v = es.eigenvectors();
  const double top = std::max(w.cwiseAbs().maxCoeff(), 1e-300);
  const double floor = 1e-12 * top;
  Eigen::Matrix<double, N, 1> coeff = -(v.transpose() * grad);
  for (int i = 0; i < coeff.size(); ++i) coeff(i) /= std::max(std::abs(w(i)), floor);
  return v * coeff;
}

}  // namespace detail

/// Minimizes f from x0. `f(x)`, `grad(x)` and `hess(x)` are callables on fixed-size vectors.
template <int N, class F, class G, class H>
LocalResult<N> minimize_local(F&& f, G&& grad, H&& hess, Eigen::Matrix<double, N, 1> x0,
                              const LocalOptions& opt = {}) {
  using Vec = Eigen::Matrix<double, N, 1>;
  LocalResult<N> r;
  Vec x = std::move(x0);
  double e = f(x);
  Vec g = grad(x);
  double step = 0.25;
  int it = 0;

  for (; it < opt.descent_iters && g.norm() > opt.newton_switch; ++it) {
    const double gg = g.squaredNorm();
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      const Vec trial = x - step * g;
      const double et = f(trial);
      if (et <= e - 1e-4 * step * gg) {
        x = trial;
        e = et;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    g = grad(x);
    step = std::min(step * 2.0, 4.0);
  }

  for (int k = 0; k < opt.newton_iters && g.norm() > opt.grad_tol; ++k, ++it) {
    const Vec p = detail::newton_direction<N>(hess(x), g);
    const double slope = g.dot(p);
    const double noise = detail::noise_floor(e);
    double t = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 50; ++bt, t *= 0.5) {
      const Vec trial = x + t * p;
      const double et = f(trial);
      if (et <= e + 1e-4 * t * slope + noise) {
        const Vec gt = grad(trial);
        // At the rounding floor of f the energy test is blind; require the gradient to shrink.
        if (et > e - noise && gt.norm() >= g.norm()) continue;
        x = trial;
        e = et;
        g = gt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  r.x = x;
  r.value = e;
  r.grad_norm = g.norm();
  r.iterations = it;
  r.converged = r.grad_norm < opt.accept_tol;
  return r;
}

}  // namespace tdt::opt
