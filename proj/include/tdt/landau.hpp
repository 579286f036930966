#pragma once

// Sextic Landau expansion of the uniform-amplitude energy,
//   E / (Omega N) = c1 a^2 + c2 a^4 + c3 a^6,   a = 2 sqrt(2) g alpha / Omega,
// its classification, and a numeric extraction of the atomic Taylor coefficients.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tdt/error.hpp"
#include "tdt/model.hpp"

namespace tdt::landau {

inline const double kGammaTcp = 1.0 / kSqrt2;

struct LandauCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  double evaluate(double a) const {
    const double s = a * a;
    return s * (c1 + s * (c2 + s * c3));
  }
};

enum class TransitionKind { second_order, first_order, tricritical, none };

inline const char* to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::second_order: return "second_order";
    case TransitionKind::first_order: return "first_order";
    case TransitionKind::tricritical: return "tricritical";
    case TransitionKind::none: return "none";
  }
  return "none";
}

inline double quartic_coefficient(double gamma) { return gamma * gamma * (gamma * gamma - 0.5); }

inline double sextic_coefficient(double gamma) {
  const double g2 = gamma * gamma;
  return -g2 * (1.0 - 7.0 * g2 + 8.0 * g2 * g2) / 4.0;
}

/// Coefficients for the uniform (q = 0) configuration of the ring. The quadratic term carries the
/// atomic -gamma^2 response next to the photon stiffness (omega + 2J cos theta) Omega / (8 g^2).
inline LandauCoefficients coefficients(const ModelParams& params) {
  const ModelParams p = normalized(params);
  const double g = p.coupling();
  if (g == 0.0) throw DomainError("landau coefficients diverge at g = 0 (lambda = 0)");
  const double stiffness = p.omega + 2.0 * p.hopping() * std::cos(p.theta);
  LandauCoefficients c;
  c.c1 = stiffness * p.Omega / (8.0 * g * g) - p.gamma * p.gamma;
  c.c2 = quartic_coefficient(p.gamma);
  c.c3 = sextic_coefficient(p.gamma);
  return c;
}

/// Value of c1 at which the sextic's global minimum jumps away from zero (c2 < 0, c3 > 0).
inline double first_order_c1(double c2, double c3) { return c2 * c2 / (4.0 * c3); }

/// Squared location of the non-trivial minimum, (-c2 + sqrt(c2^2 - 3 c1 c3)) / (3 c3).
/// Empty when the sextic has no such extremum.
inline std::optional<double> sextic_minimizer_sq(const LandauCoefficients& c) {
  if (c.c3 <= 0.0) return std::nullopt;
  const double disc = c.c2 * c.c2 - 3.0 * c.c1 * c.c3;
  if (disc < 0.0) return std::nullopt;
  const double s = (-c.c2 + std::sqrt(disc)) / (3.0 * c.c3);
  if (s <= 0.0) return std::nullopt;
  return s;
}

inline TransitionKind classify(const LandauCoefficients& c, double tol = 1e-9) {
  if (!(tol > 0.0)) throw InvalidArgument("classify: tolerance must be positive");
  if (std::abs(c.c1) < tol) {
    if (c.c2 > tol) return TransitionKind::second_order;
    if (std::abs(c.c2) < tol && c.c3 > tol) return TransitionKind::tricritical;
  }
  if (c.c2 < -tol && c.c3 > 0.0 && std::abs(c.c1 - first_order_c1(c.c2, c.c3)) < tol)
    return TransitionKind::first_order;
  return TransitionKind::none;
}

struct SingleCavityBoundary {
  double lambda = 0.0;
  bool second_order_valid = false;  // gamma >= 1/sqrt(2)
};

/// Second-order line lambda * gamma = 1/sqrt(8) of an isolated cavity.
inline SingleCavityBoundary single_cavity_boundary(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw DomainError("single-cavity boundary needs gamma > 0");
  return {1.0 / (std::sqrt(8.0) * gamma), gamma >= kGammaTcp - 1e-15};
}

struct TaylorFitOptions {
  // Sampling window in a. Zero selects a_max = 0.2 / max(1, 2 gamma), a_min = a_max / 10: the
  // nearest branch point of E(a) sits near |a| = 1/(2 gamma) for large gamma.
  double a_min = 0.0;
  double a_max = 0.0;
  int points = 24;
  int basis_terms = 7;  // fitted powers s^0 .. s^(basis_terms-1) of <d>/(2a)
  double max_condition = 1e10;
};

/// Extracts the Taylor coefficients of the single-atom ground energy E(a) = -1 + sum_k b_k a^(2k)
/// (Omega = 1) numerically, k = 1 .. max_order/2.
///
/// The fit runs on the Hellmann-Feynman slope <d>(a)/(2a) = sum_k k b_k a^(2k-2) rather than on
/// E(a) + 1, which would lose most digits to cancellation against -1. Sampling is geometric in a
/// and the extra basis terms absorb the higher-order tail.
inline std::vector<double> taylor_oracle(double gamma, int max_order,
                                         const TaylorFitOptions& opt = {}) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw InvalidArgument("taylor_oracle: gamma must be finite and non-negative");
  if (max_order != 2 && max_order != 4 && max_order != 6)
    throw InvalidArgument("taylor_oracle: max_order must be 2, 4 or 6");
  const int wanted = max_order / 2;
  if (opt.basis_terms < wanted || opt.points <= opt.basis_terms)
    throw InvalidArgument("taylor_oracle: fit needs more points than basis terms");

  const double a_max = opt.a_max > 0.0 ? opt.a_max : 0.2 / std::max(1.0, 2.0 * gamma);
  const double a_min = opt.a_min > 0.0 ? opt.a_min : 0.1 * a_max;
  if (!(a_max > a_min)) throw InvalidArgument("taylor_oracle: need 0 < a_min < a_max");
  const double s_max = a_max * a_max;
  Eigen::MatrixXd design(opt.points, opt.basis_terms);
  Eigen::VectorXd rhs(opt.points);
  const double ratio = std::pow(a_max / a_min, 1.0 / (opt.points - 1));
  double a = a_min;
  for (int i = 0; i < opt.points; ++i, a *= ratio) {
    const double t = a * a / s_max;
    double pw = 1.0;
    for (int k = 0; k < opt.basis_terms; ++k, pw *= t) design(i, k) = pw;
    rhs(i) = atomic_ground(a, gamma, 1.0).exp_d / (2.0 * a);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond < opt.max_condition))
    throw NumericalInstability("taylor_oracle: design matrix condition number " +
                               std::to_string(cond));
  const Eigen::VectorXd fit = svd.solve(rhs);

  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(wanted));
  for (int k = 1; k <= wanted; ++k)
    coeffs.push_back(fit(k - 1) / (k * std::pow(s_max, k - 1)));
  return coeffs;
}

}  // namespace tdt::landau
