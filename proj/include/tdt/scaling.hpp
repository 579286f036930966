#pragma once

// Critical exponents from power-law fits along the normal of a second-order boundary in the
// (gamma, lambda) plane at fixed theta.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "tdt/boundaries.hpp"
#include "tdt/error.hpp"
#include "tdt/meanfield.hpp"
#include "tdt/normal_phase.hpp"

namespace tdt::scaling {

enum class Target { n_ph, epsilon_1, epsilon_2 };
enum class Side { into_SR, into_NP };

inline const char* to_string(Target t) {
  switch (t) {
    case Target::n_ph: return "n_ph";
    case Target::epsilon_1: return "epsilon_1";
    case Target::epsilon_2: return "epsilon_2";
  }
  return "n_ph";
}

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log(y) at log(L) = 0
  double r_squared = 0.0;
  double l_min = 0.0;
  double l_max = 0.0;
  int n_points = 0;
  Target target = Target::n_ph;
  double q = 0.0;          // momentum of the fitted gap branch (gap targets only)
  bool accepted = false;   // r_squared >= 0.999
};

/// Ordinary least squares of log y against log x.
template <class XRange, class YRange>
ScalingFit log_log_fit(const XRange& xs, const YRange& ys) {
  const auto n = static_cast<std::size_t>(std::distance(std::begin(xs), std::end(xs)));
  if (n < 3 || n != static_cast<std::size_t>(std::distance(std::begin(ys), std::end(ys))))
    throw InvalidArgument("log_log_fit needs at least three matched samples");
  std::vector<double> lx, ly;
  lx.reserve(n);
  ly.reserve(n);
  auto yi = std::begin(ys);
  for (auto xi = std::begin(xs); xi != std::end(xs); ++xi, ++yi) {
    if (!(*xi > 0.0) || !(*yi > 0.0)) throw DomainError("log_log_fit needs positive samples");
    lx.push_back(std::log(*xi));
    ly.push_back(std::log(*yi));
  }
  const double dn = static_cast<double>(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= dn;
  my /= dn;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.n_points = static_cast<int>(n);
  fit.l_min = *std::min_element(std::begin(xs), std::end(xs));
  fit.l_max = *std::max_element(std::begin(xs), std::end(xs));
  fit.accepted = fit.r_squared >= 0.999;
  return fit;
}

/// Geometric grid of `n` distances between l_min and l_max.
inline std::vector<double> geometric_grid(double l_min, double l_max, int n = 15) {
  if (!(l_min > 0.0) || !(l_max > l_min) || n < 2)
    throw InvalidArgument("geometric_grid needs 0 < l_min < l_max and n >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double ratio = std::pow(l_max / l_min, 1.0 / (n - 1));
  double l = l_min;
  for (auto& v : g) {
    v = l;
    l *= ratio;
  }
  g.back() = l_max;
  return g;
}

// Default windows. The order parameter leaves its leading power law once L approaches the scale
// set by the next Landau term, and the chiral gap crosses over from sqrt(L) to linear only for
// L well below Delta^2 / kappa (about 5e-5 at J = 0.01), hence the small distances.
inline std::vector<double> default_beta_grid() { return geometric_grid(1e-7, 1e-4, 13); }
inline std::vector<double> default_eta_grid() { return geometric_grid(1e-9, 1e-6, 13); }

// lambda * gamma of the boundary the point lies on.
inline double boundary_constant(const boundaries::CriticalPoint& cp) {
  using boundaries::CriticalKind;
  switch (cp.kind) {
    case CriticalKind::second_order_SR:
    case CriticalKind::TCP:
      return boundaries::sr_boundary_product(cp.theta, cp.j_ratio);
    case CriticalKind::second_order_CSR:
    case CriticalKind::CTCP:
      return boundaries::csr_boundary_product(cp.theta, cp.j_ratio);
    case CriticalKind::triple:
      return boundaries::sr_boundary_product(cp.theta, cp.j_ratio);
    default:
      throw DomainError(std::string("no second-order boundary for kind ") + to_string(cp.kind));
  }
}

/// Points (gamma, lambda) = cp +- L n, with n the unit normal of lambda gamma = K at cp.
inline std::vector<ModelParams> approach_points(const boundaries::CriticalPoint& cp, Side side,
                                                const std::vector<double>& l_list) {
  const double k = boundary_constant(cp);
  if (std::abs(cp.lambda * cp.gamma - k) > 1e-8)
    throw DomainError("approach_points: critical point is not on its boundary");
  const double norm = std::hypot(cp.lambda, cp.gamma);
  const double n_gamma = cp.lambda / norm;
  const double n_lambda = cp.gamma / norm;
  const double sign = side == Side::into_SR ? 1.0 : -1.0;
  std::vector<ModelParams> pts;
  pts.reserve(l_list.size());
  for (double l : l_list) {
    if (!(l >= 0.0)) throw InvalidArgument("approach_points: distances must be non-negative");
    ModelParams p = cp.params();
    p.gamma = cp.gamma + sign * l * n_gamma;
    p.lambda = cp.lambda + sign * l * n_lambda;
    pts.push_back(p);
  }
  return pts;
}

struct BetaOptions {
  int n_starts = 32;
  std::uint64_t seed = 0;
};

/// Photon-number exponent: N_ph ~ L^beta on the superradiant side.
inline ScalingFit beta_exponent(const boundaries::CriticalPoint& cp,
                                const std::vector<double>& l_grid = default_beta_grid(),
                                const BetaOptions& opt = {}) {
  const auto pts = approach_points(cp, Side::into_SR, l_grid);
  std::vector<double> nph;
  nph.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto sol = meanfield::minimize_energy(pts[i], opt.n_starts, opt.seed);
    if (!sol.converged)
      throw ConvergenceError("beta_exponent: minimization failed at L = " + std::to_string(l_grid[i]));
    if (sol.phase == meanfield::Phase::NP)
      throw DomainError("beta_exponent: normal phase found at L = " + std::to_string(l_grid[i]));
    nph.push_back(meanfield::observables(pts[i], sol.order).n_ph);
  }
  auto fit = log_log_fit(l_grid, nph);
  fit.target = Target::n_ph;
  return fit;
}

/// Gap exponent(s): eps ~ L^eta on the normal side. One fit per gap branch that closes at cp,
/// ordered by gap size at the smallest L (epsilon_1 first).
inline std::vector<ScalingFit> eta_exponent(const boundaries::CriticalPoint& cp,
                                            const std::vector<double>& l_grid = default_eta_grid()) {
  const auto pts = approach_points(cp, Side::into_NP, l_grid);
  const auto at_cp = normal_phase::spectrum(cp.params());
  std::vector<int> closing;
  for (int i = 0; i < 3; ++i)
    if (at_cp.epsilon_q[static_cast<std::size_t>(i)] < 1e-7) closing.push_back(i);
  if (closing.empty()) throw DomainError("eta_exponent: no gap closes at the critical point");

  std::vector<std::vector<double>> gaps(closing.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    normal_phase::NormalPhaseSpectrum sp;
    try {
      sp = normal_phase::spectrum(pts[k]);
    } catch (const UnstableSpectrum& e) {
      throw DomainError("eta_exponent: normal phase unstable at L = " + std::to_string(l_grid[k]) +
                        " (" + e.what() + ")");
    }
    for (std::size_t b = 0; b < closing.size(); ++b)
      gaps[b].push_back(sp.epsilon_q[static_cast<std::size_t>(closing[b])]);
  }

  std::vector<std::size_t> order(closing.size());
  for (std::size_t b = 0; b < order.size(); ++b) order[b] = b;
  const std::size_t first = static_cast<std::size_t>(
      std::min_element(l_grid.begin(), l_grid.end()) - l_grid.begin());
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return gaps[a][first] < gaps[b][first]; });

  std::vector<ScalingFit> fits;
  for (std::size_t rank = 0; rank < order.size() && rank < 2; ++rank) {
    const std::size_t b = order[rank];
    auto fit = log_log_fit(l_grid, gaps[b]);
    fit.target = rank == 0 ? Target::epsilon_1 : Target::epsilon_2;
    fit.q = normal_phase::kMomenta[static_cast<std::size_t>(closing[b])];
    fits.push_back(fit);
  }
  return fits;
}

}  // namespace tdt::scaling
