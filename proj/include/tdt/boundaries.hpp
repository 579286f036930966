#pragma once

// Closed-form second-order surfaces, the SR/CSR flux threshold, tricritical points, and a
// numerical locator for first-order lines.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "tdt/error.hpp"
#include "tdt/landau.hpp"
#include "tdt/meanfield.hpp"
#include "tdt/model.hpp"

namespace tdt::boundaries {

enum class CriticalKind {
  second_order_SR,
  second_order_CSR,
  first_order_SR,
  first_order_CSR,
  TCP,
  CTCP,
  SR_CSR_first_order,
  triple
};

inline const char* to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::second_order_SR: return "second_order_SR";
    case CriticalKind::second_order_CSR: return "second_order_CSR";
    case CriticalKind::first_order_SR: return "first_order_SR";
    case CriticalKind::first_order_CSR: return "first_order_CSR";
    case CriticalKind::TCP: return "TCP";
    case CriticalKind::CTCP: return "CTCP";
    case CriticalKind::SR_CSR_first_order: return "SR_CSR_first_order";
    case CriticalKind::triple: return "triple";
  }
  return "triple";
}

struct CriticalPoint {
  double gamma = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
  CriticalKind kind = CriticalKind::second_order_SR;
  double j_ratio = 0.0;

  ModelParams params(double omega = 1.0, double Omega = 1.0) const {
    return ModelParams{omega, Omega, lambda, gamma, j_ratio, theta};
  }
};

/// Critical flux: arccos(-2j / (sqrt(8 j^2 + 1) + 1)) with j = J/omega.
inline double theta_c(double j_ratio) {
  if (!(j_ratio >= 0.0) || !std::isfinite(j_ratio))
    throw DomainError("theta_c needs a finite j_ratio >= 0");
  return std::acos(-2.0 * j_ratio / (std::sqrt(8.0 * j_ratio * j_ratio + 1.0) + 1.0));
}

/// True when |theta| <= theta_c, i.e. the superradiant side is chiral.
inline bool chiral_regime(double theta, double j_ratio) {
  return std::abs(reduce_angle(theta)) <= theta_c(j_ratio);
}

/// lambda * gamma on the uniform (q = 0) second-order surface.
inline double sr_boundary_product(double theta, double j_ratio) {
  const double rad = 1.0 + 2.0 * j_ratio * std::cos(reduce_angle(theta));
  if (!(rad > 0.0)) throw DomainError("SR boundary radicand 1 + 2j cos(theta) is not positive");
  return std::sqrt(rad) / (2.0 * kSqrt2);
}

/// lambda * gamma on the chiral (q = +-2pi/3) second-order surface.
inline double csr_boundary_product(double theta, double j_ratio) {
  const double t = reduce_angle(theta);
  const double c = std::cos(t);
  const double s = std::sin(t);
  const double j = j_ratio;
  const double den = 1.0 - j * c;
  const double num = 1.0 - 2.0 * j * c + j * j * (c * c - 3.0 * s * s);
  if (!(den > 0.0)) throw DomainError("CSR boundary denominator 1 - j cos(theta) is not positive");
  if (!(num / den > 0.0)) throw DomainError("CSR boundary radicand is not positive");
  return std::sqrt(num / den) / (2.0 * kSqrt2);
}

inline double sr_boundary_lambda(double gamma, double theta, double j_ratio) {
  if (!(gamma > 0.0)) throw DomainError("sr_boundary_lambda needs gamma > 0");
  return sr_boundary_product(theta, j_ratio) / gamma;
}

inline double csr_boundary_lambda(double gamma, double theta, double j_ratio) {
  if (!(gamma > 0.0)) throw DomainError("csr_boundary_lambda needs gamma > 0");
  return csr_boundary_product(theta, j_ratio) / gamma;
}

/// lambda * gamma of whichever branch the normal phase leaves through at this flux.
inline double boundary_product(double theta, double j_ratio) {
  return chiral_regime(theta, j_ratio) ? csr_boundary_product(theta, j_ratio)
                                       : sr_boundary_product(theta, j_ratio);
}

/// Whether a second-order boundary exists at (gamma, theta): gamma >= 1/sqrt(2).
inline bool second_order_valid(double gamma) { return gamma >= landau::kGammaTcp - 1e-15; }

/// Tricritical point on the SR (chiral = false) or CSR (chiral = true) boundary.
inline CriticalPoint tcp(double theta, double j_ratio, bool chiral) {
  const double t = reduce_angle(theta);
  const double tc = theta_c(j_ratio);
  if (chiral && std::abs(t) > tc)
    throw DomainError("chiral tricritical point requires |theta| <= theta_c");
  if (!chiral && std::abs(t) < tc)
    throw DomainError("non-chiral tricritical point requires |theta| >= theta_c");
  const double g = landau::kGammaTcp;
  CriticalPoint cp;
  cp.gamma = g;
  cp.theta = t;
  cp.j_ratio = j_ratio;
  cp.kind = chiral ? CriticalKind::CTCP : CriticalKind::TCP;
  cp.lambda = chiral ? csr_boundary_lambda(g, t, j_ratio) : sr_boundary_lambda(g, t, j_ratio);
  return cp;
}

/// Point on the line of triple points, theta = sign * theta_c.
inline CriticalPoint triple_point(double gamma, double j_ratio, double sign = 1.0) {
  if (!second_order_valid(gamma))
    throw DomainError("triple point needs a second-order boundary (gamma >= 1/sqrt(2))");
  CriticalPoint cp;
  cp.gamma = gamma;
  cp.j_ratio = j_ratio;
  cp.theta = (sign < 0.0 ? -1.0 : 1.0) * theta_c(j_ratio);
  cp.kind = CriticalKind::triple;
  cp.lambda = sr_boundary_lambda(gamma, cp.theta, j_ratio);
  return cp;
}

/// Second-order point at (gamma, theta) on the branch selected by theta.
inline CriticalPoint second_order_point(double gamma, double theta, double j_ratio) {
  if (!second_order_valid(gamma))
    throw DomainError("no second-order boundary below gamma = 1/sqrt(2)");
  const bool chiral = chiral_regime(theta, j_ratio);
  CriticalPoint cp;
  cp.gamma = gamma;
  cp.theta = reduce_angle(theta);
  cp.j_ratio = j_ratio;
  cp.kind = chiral ? CriticalKind::second_order_CSR : CriticalKind::second_order_SR;
  cp.lambda = chiral ? csr_boundary_lambda(gamma, theta, j_ratio)
                     : sr_boundary_lambda(gamma, theta, j_ratio);
  return cp;
}

struct FirstOrderResult {
  double lambda = 0.0;
  double delta_energy = 0.0;      // E(superradiant branch) - E(NP) at `lambda`
  double landau_estimate = 0.0;   // sextic estimate; NaN when c3 <= 0
  double jump = 0.0;              // max |alpha_n| just above the line
  OrderParameterSet branch;       // superradiant minimum at the upper bracket end
  CriticalPoint point;
};

struct FirstOrderOptions {
  std::optional<std::pair<double, double>> bracket;
  double lambda_tol = 1e-11;
  int n_starts = 32;
  std::uint64_t seed = 0;
};

/// Sextic estimate of the first-order line: c1 = c2^2 / (4 c3) with the branch stiffness,
/// lambda = K / sqrt(gamma^2 + c2^2 / (4 c3)). NaN when c3 <= 0.
inline double landau_first_order_lambda(double gamma, double theta, double j_ratio) {
  const double c2 = landau::quartic_coefficient(gamma);
  const double c3 = landau::sextic_coefficient(gamma);
  if (!(c3 > 0.0)) return std::nan("");
  return boundary_product(theta, j_ratio) / std::sqrt(gamma * gamma + landau::first_order_c1(c2, c3));
}

/// Locates the first-order normal/superradiant line by bisection on which branch holds the
/// global minimum of the full mean-field energy.
inline FirstOrderResult first_order_lambda(double gamma, double theta, double j_ratio,
                                           const FirstOrderOptions& opt = {}) {
  if (!(gamma > 0.0) || gamma >= landau::kGammaTcp)
    throw DomainError("first-order locator needs 0 < gamma < 1/sqrt(2)");
  const double t = reduce_angle(theta);
  double lo = 0.0;
  double hi = 0.0;
  if (opt.bracket) {
    lo = opt.bracket->first;
    hi = opt.bracket->second;
  } else {
    const double l_tcp = boundary_product(t, j_ratio) / landau::kGammaTcp;
    lo = 0.5 * l_tcp;
    hi = 2.0 * l_tcp;
  }
  if (!(lo > 0.0) || !(hi > lo)) throw BracketError("bracket must satisfy 0 < lo < hi");

  const ModelParams base{1.0, 1.0, lo, gamma, j_ratio, t};
  auto solve = [&](double l) { return meanfield::minimize_energy(base.with_lambda(l), opt.n_starts, opt.seed); };
  auto ordered = [](const meanfield::MeanFieldSolution& s) { return s.phase != meanfield::Phase::NP; };

  auto s_lo = solve(lo);
  auto s_hi = solve(hi);
  if (ordered(s_lo) || !ordered(s_hi))
    throw BracketError("no normal/superradiant switch inside [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  while (hi - lo > opt.lambda_tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    auto s = solve(mid);
    if (ordered(s)) {
      hi = mid;
      s_hi = s;
    } else {
      lo = mid;
    }
  }

  FirstOrderResult r;
  r.lambda = 0.5 * (lo + hi);
  const ModelParams at = base.with_lambda(r.lambda);
  // Follow the superradiant branch down to the midpoint from the upper end.
  const auto branch = meanfield::local_minimum(at, s_hi.order);
  r.branch = OrderParameterSet::from_vector(branch.x);
  r.delta_energy = branch.value - (-3.0 * at.Omega);
  r.jump = s_hi.order.max_abs();
  r.landau_estimate = landau_first_order_lambda(gamma, t, j_ratio);
  r.point = {gamma, r.lambda, t,
             chiral_regime(t, j_ratio) ? CriticalKind::first_order_CSR : CriticalKind::first_order_SR,
             j_ratio};
  return r;
}

}  // namespace tdt::boundaries
