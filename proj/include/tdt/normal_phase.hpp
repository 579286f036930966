#pragma once

// Quadratic theory of the normal phase: after projecting the atoms onto |-1>, the ring is three
// coupled squeezed oscillators. In the quasi-momentum basis q in {0, +2pi/3, -2pi/3} the
// Hamiltonian splits into 2x2 Bogoliubov blocks pairing q with -q.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "tdt/error.hpp"
#include "tdt/model.hpp"

namespace tdt::normal_phase {

inline constexpr std::array<double, 3> kMomenta = {0.0, 2.0 * kPi / 3.0, -2.0 * kPi / 3.0};

// Index of -q in kMomenta.
inline constexpr std::array<int, 3> kPartner = {0, 2, 1};

struct NormalPhaseSpectrum {
  std::array<double, 3> q_values = kMomenta;
  std::array<double, 3> omega_q{};
  std::array<double, 3> epsilon_q{};
  std::array<double, 3> beta_q{};
  // E_g / N. With n_atoms unset this is the thermodynamic limit -3 Omega.
  double e_ground_intensive = 0.0;
  // E_0 / N = (-6 g^2 gamma^2 / Omega) / N - 3 Omega.
  double e0_intensive = 0.0;
  // O(1) part of E_g: -6 g^2 gamma^2 / Omega + (1/2) sum_q (eps_q - omega_q).
  double e_ground_correction = 0.0;
};

// Strength of the anomalous (squeezing) term, 4 g^2 gamma^2 / Omega.
inline double anomalous(const ModelParams& p) {
  const double g = p.coupling();
  return 4.0 * g * g * p.gamma * p.gamma / p.Omega;
}

inline double omega_q(const ModelParams& params, double q) {
  const ModelParams p = normalized(params);
  return p.omega - anomalous(p) + 2.0 * p.hopping() * std::cos(p.theta - q);
}

/// Excitation energy of the branch kMomenta[index] alone, whatever the other branches do.
/// Throws UnstableSpectrum if this branch's Bogoliubov block has no real frequency.
inline double branch_energy(const ModelParams& params, int index) {
  if (index < 0 || index > 2) throw InvalidArgument("branch_energy: index must be 0, 1 or 2");
  const ModelParams p = normalized(params);
  const auto i = static_cast<std::size_t>(index);
  const double u = anomalous(p);
  const double wq = omega_q(p, kMomenta[i]);
  const double wmq = omega_q(p, kMomenta[static_cast<std::size_t>(kPartner[i])]);
  const double sum = wq + wmq;
  // Factored radicand (S - 2u)(S + 2u). S - 2u is a difference of O(1) terms, so values within
  // its rounding error are zero: on the closing surface a single ulp in lambda would otherwise
  // show up as a gap of order sqrt(eps).
  double soft = sum - 2.0 * u;
  const double soft_noise = 16.0 * std::numeric_limits<double>::epsilon() *
                            (2.0 * p.omega + 4.0 * u + 4.0 * p.hopping());
  if (std::abs(soft) <= soft_noise) soft = 0.0;
  double radicand = soft * (sum + 2.0 * u);
  const double scale = std::max(sum * sum, 4.0 * u * u);
  if (radicand < 0.0) {
    if (radicand < -1e-13 * scale)
      throw UnstableSpectrum("imaginary excitation energy at q = " + std::to_string(kMomenta[i]),
                             kMomenta[i]);
    radicand = 0.0;
  }
  if (sum < 0.0)
    throw UnstableSpectrum("negative mode frequency at q = " + std::to_string(kMomenta[i]),
                           kMomenta[i]);
  return 0.5 * (wq - wmq + std::sqrt(radicand));
}

/// Full normal-phase spectrum. Throws UnstableSpectrum when a Bogoliubov branch turns imaginary
/// or negative, i.e. the normal phase is not a local minimum.
inline NormalPhaseSpectrum spectrum(const ModelParams& params,
                                    std::optional<double> n_atoms = std::nullopt) {
  const ModelParams p = normalized(params);
  if (n_atoms && !(*n_atoms > 0.0)) throw InvalidArgument("spectrum: n_atoms must be positive");

  NormalPhaseSpectrum sp;
  for (int i = 0; i < 3; ++i) {
    sp.omega_q[i] = omega_q(p, kMomenta[i]);
    sp.epsilon_q[i] = branch_energy(p, i);
    if (sp.epsilon_q[i] < -1e-10)
      throw UnstableSpectrum("negative excitation energy at q = " + std::to_string(kMomenta[i]),
                             kMomenta[i]);
    const double sum = sp.omega_q[i] + omega_q(p, kMomenta[kPartner[i]]);
    const double u = anomalous(p);
    sp.beta_q[i] = -0.125 * std::log((sum - 2.0 * u) / (sum + 2.0 * u));
  }

  const double g = p.coupling();
  const double e0_finite = -6.0 * g * g * p.gamma * p.gamma / p.Omega;
  double zero_point = 0.0;
  for (int i = 0; i < 3; ++i) zero_point += 0.5 * (sp.epsilon_q[i] - sp.omega_q[i]);
  sp.e_ground_correction = e0_finite + zero_point;
  const double inv_n = n_atoms ? 1.0 / *n_atoms : 0.0;
  sp.e0_intensive = -3.0 * p.Omega + e0_finite * inv_n;
  sp.e_ground_intensive = -3.0 * p.Omega + sp.e_ground_correction * inv_n;
  return sp;
}

struct Gap {
  int index = 0;  // into kMomenta
  double q = 0.0;
  double value = 0.0;
};

/// Lowest excitation energy; ties go to q = 0, then +2pi/3.
inline Gap lowest_gap(const NormalPhaseSpectrum& sp) {
  Gap best{0, sp.q_values[0], sp.epsilon_q[0]};
  for (int i = 1; i < 3; ++i)
    if (sp.epsilon_q[i] < best.value) best = {i, sp.q_values[i], sp.epsilon_q[i]};
  return best;
}

/// Coupling at which the q branch closes its gap:
///   (lambda gamma)^2 = (1 + 4j cos q cos t + 4j^2 cos(t-q) cos(t+q)) / (8 (1 + 2j cos t cos q)).
inline double second_order_lambda(double gamma, double theta, double j_ratio, double q) {
  if (!(gamma > 0.0)) throw DomainError("second_order_lambda needs gamma > 0");
  const double t = reduce_angle(theta);
  const double j = j_ratio;
  const double den = 1.0 + 2.0 * j * std::cos(t) * std::cos(q);
  const double num = 1.0 + 4.0 * j * std::cos(q) * std::cos(t) +
                     4.0 * j * j * std::cos(t - q) * std::cos(t + q);
  if (!(den > 0.0)) throw DomainError("q branch has non-positive stiffness denominator");
  if (!(num > 0.0)) throw DomainError("q branch never closes its gap (non-positive radicand)");
  return std::sqrt(num / (8.0 * den)) / gamma;
}

}  // namespace tdt::normal_phase
