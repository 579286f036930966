#pragma once

// Parameters, single-atom solver and the mean-field energy of the three-cavity ring.
//
// Each cavity n carries a coherent amplitude alpha_n = <a_n>/sqrt(N) = A_n + i B_n. The atoms in
// cavity n feel the field only through x_n = 2 sqrt(2) g A_n, and sit in the lowest eigenstate of
// x_n d + Omega h. Energies are reported per atom of one cavity (E/N), so the normal phase has
// energy -3 Omega.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "tdt/error.hpp"

namespace tdt {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Reduces an angle to the half-open interval (-pi, pi].
inline double reduce_angle(double theta) {
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct ModelParams {
  double omega = 1.0;    // cavity frequency
  double Omega = 1.0;    // atomic level spacing
  double lambda = 0.0;   // g / sqrt(Omega omega)
  double gamma = 0.0;    // ratio of the |0>-|-1> to the |1>-|0> dipole element
  double j_ratio = 0.0;  // hopping J / omega
  double theta = 0.0;    // hopping phase (Peierls flux per bond)

  /// Atom-cavity coupling g.
  double coupling() const { return lambda * std::sqrt(Omega * omega); }
  /// Hopping amplitude J in energy units.
  double hopping() const { return j_ratio * omega; }

  ModelParams with_lambda(double l) const {
    ModelParams p = *this;
    p.lambda = l;
    return p;
  }
  ModelParams with_gamma(double gm) const {
    ModelParams p = *this;
    p.gamma = gm;
    return p;
  }
  ModelParams with_theta(double t) const {
    ModelParams p = *this;
    p.theta = reduce_angle(t);
    return p;
  }
  /// Sets lambda from a dimensionful coupling g at the current omega, Omega.
  ModelParams with_coupling(double g) const {
    ModelParams p = *this;
    p.lambda = g / std::sqrt(Omega * omega);
    return p;
  }
};

inline void validate(const ModelParams& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(finite(p.omega) && finite(p.Omega) && finite(p.lambda) && finite(p.gamma) &&
        finite(p.j_ratio) && finite(p.theta)))
    throw InvalidArgument("model parameters must be finite");
  if (p.omega <= 0.0) throw InvalidArgument("omega must be positive");
  if (p.Omega <= 0.0) throw InvalidArgument("Omega must be positive");
  if (p.lambda < 0.0) throw InvalidArgument("lambda must be non-negative");
  if (p.gamma < 0.0) throw InvalidArgument("gamma must be non-negative");
}

/// Validates and reduces theta into (-pi, pi].
inline ModelParams normalized(ModelParams p) {
  validate(p);
  p.theta = reduce_angle(p.theta);
  return p;
}

/// The six real mean-field displacements. Index n = 0, 1, 2 labels cavities 1, 2, 3.
struct OrderParameterSet {
  std::array<std::complex<double>, 3> alpha{};

  double A(int n) const { return alpha[static_cast<std::size_t>(n)].real(); }
  double B(int n) const { return alpha[static_cast<std::size_t>(n)].imag(); }

  /// Packs as [A1, A2, A3, B1, B2, B3].
  Vector6 to_vector() const {
    Vector6 v;
    for (int n = 0; n < 3; ++n) {
      v(n) = A(n);
      v(n + 3) = B(n);
    }
    return v;
  }

  static OrderParameterSet from_vector(const Vector6& v) {
    OrderParameterSet o;
    for (int n = 0; n < 3; ++n) o.alpha[static_cast<std::size_t>(n)] = {v(n), v(n + 3)};
    return o;
  }

  bool finite() const {
    for (const auto& a : alpha)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& a : alpha) m = std::max(m, std::abs(a));
    return m;
  }
};

struct AtomicGroundState {
  double energy = 0.0;     // lowest eigenvalue of x d + Omega h
  double exp_d = 0.0;      // <d>, equal to dE/dx
  double exp_h = 0.0;      // <h>, in [-1, 1]
  double curvature = 0.0;  // d^2E/dx^2 from second-order perturbation of the eigenpair
};

namespace detail {

inline Eigen::Matrix3d dipole(double gamma) {
  Eigen::Matrix3d d;
  d << 0.0, 1.0, 0.0,
       1.0, 0.0, gamma,
       0.0, gamma, 0.0;
  return d;
}

inline Eigen::Matrix3d level_operator() {
  return Eigen::Vector3d(1.0, 0.0, -1.0).asDiagonal();
}

}  // namespace detail

/// Lowest eigenpair of x d(gamma) + Omega h with <d>, <h> and the second derivative in x.
///
/// Basis order is (|1>, |0>, |-1>): the field couples |1>-|0> with weight 1 and |0>-|-1> with
/// weight gamma. When the lowest level is degenerate (only at isolated x, e.g. gamma = 0,
/// x^2 = 2 Omega^2) expectations are taken in the member of the degenerate pair with the
/// smallest <h>; they are convention-dependent there.
inline AtomicGroundState atomic_ground(double x, double gamma, double Omega) {
  if (!std::isfinite(x) || !std::isfinite(gamma) || !std::isfinite(Omega))
    throw InvalidArgument("atomic_ground: inputs must be finite");
  if (gamma < 0.0) throw InvalidArgument("atomic_ground: gamma must be non-negative");
  if (Omega <= 0.0) throw InvalidArgument("atomic_ground: Omega must be positive");

  const Eigen::Matrix3d d = detail::dipole(gamma);
  const Eigen::Matrix3d h = detail::level_operator();
  const Eigen::Matrix3d m = x * d + Omega * h;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
  const Eigen::Vector3d& w = es.eigenvalues();
  Eigen::Matrix3d v = es.eigenvectors();

  const double scale = std::max({1.0, std::abs(x), Omega});
  const bool degenerate = (w(1) - w(0)) <= 1e-12 * scale;
  if (degenerate) {
    Eigen::Matrix<double, 3, 2> sub = v.leftCols<2>();
    Eigen::Matrix2d hs = sub.transpose() * h * sub;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es2(hs);
    Eigen::Matrix<double, 3, 2> rot = sub * es2.eigenvectors();
    v.leftCols<2>() = rot;
  }

  const Eigen::Vector3d g = v.col(0);
  AtomicGroundState s;
  s.energy = w(0);
  s.exp_d = g.dot(d * g);
  s.exp_h = g.dot(h * g);
  for (int k = (degenerate ? 2 : 1); k < 3; ++k) {
    const double coupling = v.col(k).dot(d * g);
    s.curvature += 2.0 * coupling * coupling / (w(0) - w(k));
  }
  return s;
}

namespace detail {

// Field argument of the atoms in cavity n.
inline double field(const ModelParams& p, double A) { return 2.0 * kSqrt2 * p.coupling() * A; }

// Constant Hessian of the photon part: omega |alpha_n|^2 plus hopping
// 2J sum_n [cos(theta)(A_n A_{n+1} + B_n B_{n+1}) - sin(theta)(A_n B_{n+1} - B_n A_{n+1})].
inline Matrix6 photon_hessian(const ModelParams& p) {
  const double J = p.hopping();
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  Matrix6 hm = Matrix6::Zero();
  for (int n = 0; n < 6; ++n) hm(n, n) = 2.0 * p.omega;
  for (int n = 0; n < 3; ++n) {
    const int m = (n + 1) % 3;
    // d^2 / dA_n dA_m and dB_n dB_m
    hm(n, m) += 2.0 * J * c;
    hm(m, n) += 2.0 * J * c;
    hm(n + 3, m + 3) += 2.0 * J * c;
    hm(m + 3, n + 3) += 2.0 * J * c;
    // -2J s (A_n B_m - B_n A_m)
    hm(n, m + 3) += -2.0 * J * s;
    hm(m + 3, n) += -2.0 * J * s;
    hm(n + 3, m) += 2.0 * J * s;
    hm(m, n + 3) += 2.0 * J * s;
  }
  return hm;
}

}  // namespace detail

/// Mean-field energy per atom, summed over the three cavities.
inline double mf_energy(const ModelParams& p, const OrderParameterSet& order) {
  validate(p);
  const double J = p.hopping();
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  double e = 0.0;
  for (int n = 0; n < 3; ++n) {
    const int up = (n + 1) % 3;
    const int dn = (n + 2) % 3;
    const double A = order.A(n);
    const double B = order.B(n);
    e += p.omega * (A * A + B * B);
    e += atomic_ground(detail::field(p, A), p.gamma, p.Omega).energy;
    e += J * A * (c * (order.A(up) + order.A(dn)) - s * (order.B(up) - order.B(dn)));
    e += J * B * (c * (order.B(up) + order.B(dn)) + s * (order.A(up) - order.A(dn)));
  }
  return e;
}

/// Analytic gradient of mf_energy in the packing [A1, A2, A3, B1, B2, B3].
inline Vector6 mf_gradient(const ModelParams& p, const OrderParameterSet& order) {
  validate(p);
  const double J = p.hopping();
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const double dx_dA = 2.0 * kSqrt2 * p.coupling();
  Vector6 grad;
  for (int n = 0; n < 3; ++n) {
    const int up = (n + 1) % 3;
    const int dn = (n + 2) % 3;
    const double A = order.A(n);
    const double B = order.B(n);
    const auto atom = atomic_ground(detail::field(p, A), p.gamma, p.Omega);
    grad(n) = 2.0 * p.omega * A + dx_dA * atom.exp_d +
              2.0 * J * (c * (order.A(up) + order.A(dn)) - s * (order.B(up) - order.B(dn)));
    grad(n + 3) = 2.0 * p.omega * B +
                  2.0 * J * (c * (order.B(up) + order.B(dn)) + s * (order.A(up) - order.A(dn)));
  }
  return grad;
}

/// Hessian of mf_energy; the atomic block is diagonal in A_n.
inline Matrix6 mf_hessian(const ModelParams& p, const OrderParameterSet& order) {
  validate(p);
  Matrix6 hm = detail::photon_hessian(p);
  const double dx_dA = 2.0 * kSqrt2 * p.coupling();
  for (int n = 0; n < 3; ++n) {
    const auto atom = atomic_ground(detail::field(p, order.A(n)), p.gamma, p.Omega);
    hm(n, n) += dx_dA * dx_dA * atom.curvature;
  }
  return hm;
}

}  // namespace tdt
