#pragma once

// Ground states of the six-variable mean-field energy, their phase, a canonical representative of
// each degenerate family, and the observables read off a solution.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tdt/error.hpp"
#include "tdt/landau.hpp"
#include "tdt/model.hpp"
#include "tdt/optimize.hpp"

namespace tdt::meanfield {

enum class Phase { NP, SR, CSR };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::NP: return "NP";
    case Phase::SR: return "SR";
    case Phase::CSR: return "CSR";
  }
  return "NP";
}

struct MeanFieldSolution {
  OrderParameterSet order;  // canonical
  double energy = 0.0;      // per atom
  Phase phase = Phase::NP;
  bool converged = false;
  double residual = 0.0;    // gradient norm at `order`
};

struct Observables {
  double n_ph = 0.0;                   // sum_n |alpha_n|^2
  double i_ph = 0.0;                   // photon current per atom
  std::array<double, 3> h_exp{};       // <h_n>
  std::array<std::complex<double>, 3> alpha{};
};

inline Phase classify_phase(const OrderParameterSet& order, double tol_np = 1e-6,
                            double tol_uniform = 1e-6) {
  if (!(tol_np > 0.0) || !(tol_uniform > 0.0))
    throw InvalidArgument("classify_phase: tolerances must be positive");
  if (order.max_abs() < tol_np) return Phase::NP;
  bool uniform = true;
  for (int n = 0; n < 3; ++n) {
    if (std::abs(order.B(n)) >= tol_uniform) uniform = false;
    if (std::abs(order.alpha[static_cast<std::size_t>(n)] - order.alpha[0]) >= tol_uniform)
      uniform = false;
  }
  return uniform ? Phase::SR : Phase::CSR;
}

namespace detail {

// new[m] = old[(m + shift) mod 3]; a cyclic relabeling, so the hopping orientation is kept.
inline OrderParameterSet rotate(const OrderParameterSet& o, int shift) {
  OrderParameterSet r;
  for (int m = 0; m < 3; ++m)
    r.alpha[static_cast<std::size_t>(m)] = o.alpha[static_cast<std::size_t>((m + shift) % 3)];
  return r;
}

inline OrderParameterSet negate(const OrderParameterSet& o) {
  OrderParameterSet r;
  for (int n = 0; n < 3; ++n) r.alpha[static_cast<std::size_t>(n)] = -o.alpha[static_cast<std::size_t>(n)];
  return r;
}

}  // namespace detail

/// Picks the representative with the distinct cavity at index 3 and A3 >= 0.
///
/// The distinct cavity is the vertex with the largest summed distance to the other two in the
/// complex alpha plane; exact ties keep the current labeling. When `params` is given and swapping
/// cavities 1 and 2 leaves the energy unchanged (real hopping, theta = 0 or pi), the member with
/// B1 <= 0 is chosen.
inline OrderParameterSet canonicalize(const OrderParameterSet& order,
                                      const ModelParams* params = nullptr) {
  std::array<double, 3> sep{};
  double scale = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto& a = order.alpha[static_cast<std::size_t>(k)];
    sep[static_cast<std::size_t>(k)] =
        std::abs(a - order.alpha[static_cast<std::size_t>((k + 1) % 3)]) +
        std::abs(a - order.alpha[static_cast<std::size_t>((k + 2) % 3)]);
    scale = std::max(scale, std::abs(a));
  }
  int distinct = 2;
  for (int k = 0; k < 2; ++k)
    if (sep[static_cast<std::size_t>(k)] > sep[2] + 1e-12 * (1.0 + scale) &&
        sep[static_cast<std::size_t>(k)] > sep[static_cast<std::size_t>(distinct)])
      distinct = k;

  OrderParameterSet c = detail::rotate(order, (distinct + 1) % 3);
  if (c.A(2) < 0.0 || (c.A(2) == 0.0 && c.A(0) + c.A(1) < 0.0)) c = detail::negate(c);

  if (params && c.B(0) > 0.0) {
    OrderParameterSet mirrored = c;
    std::swap(mirrored.alpha[0], mirrored.alpha[1]);
    const double e0 = mf_energy(*params, c);
    const double e1 = mf_energy(*params, mirrored);
    if (std::abs(e0 - e1) <= 1e-12 * (1.0 + std::abs(e0))) c = mirrored;
  }
  return c;
}

inline Observables observables(const ModelParams& params, const OrderParameterSet& order) {
  const ModelParams p = normalized(params);
  Observables ob;
  ob.alpha = order.alpha;
  std::complex<double> loop{0.0, 0.0};
  for (int n = 0; n < 3; ++n) {
    const auto& a = order.alpha[static_cast<std::size_t>(n)];
    const auto& b = order.alpha[static_cast<std::size_t>((n + 1) % 3)];
    ob.n_ph += std::norm(a);
    loop += std::conj(a) * b;
    ob.h_exp[static_cast<std::size_t>(n)] =
        atomic_ground(2.0 * kSqrt2 * p.coupling() * order.A(n), p.gamma, p.Omega).exp_h;
  }
  ob.i_ph = -2.0 * loop.imag() + 0.0;  // no -0 in outputs
  return ob;
}

struct MinimizeOptions {
  opt::LocalOptions local{};
  // Relative tolerance on the most negative Hessian eigenvalue for a point to count as a minimum.
  double saddle_tol = 1e-10;
};

namespace detail {

// Amplitude (unrescaled alpha) of the uniform sextic minimum, when it exists.
inline std::optional<double> landau_amplitude(const ModelParams& p) {
  if (p.coupling() == 0.0) return std::nullopt;
  const auto c = landau::coefficients(p);
  const auto s = landau::sextic_minimizer_sq(c);
  if (!s) return std::nullopt;
  const double a = std::sqrt(*s) * p.Omega / (2.0 * kSqrt2 * p.coupling());
  if (!(a > 1e-8) || a > 10.0) return std::nullopt;
  return a;
}

inline std::vector<Vector6> patterned_seeds(const ModelParams& p) {
  std::vector<double> amps = {0.6, 1.8};
  if (auto a = landau_amplitude(p)) amps.insert(amps.begin(), *a);
  std::vector<Vector6> seeds;
  seeds.push_back(Vector6::Zero());
  for (double a : amps) {
    for (double sign : {1.0, -1.0}) {
      Vector6 v = Vector6::Zero();
      v.head<3>().setConstant(sign * a);
      seeds.push_back(v);
      // Chiral patterns: one cavity opposite, the other two complex conjugates.
      for (int k = 0; k < 3; ++k) {
        for (double chir : {1.0, -1.0}) {
          Vector6 w = Vector6::Zero();
          const int up = (k + 1) % 3;
          const int dn = (k + 2) % 3;
          w(k) = -sign * a;
          w(up) = sign * a;
          w(dn) = sign * a;
          w(up + 3) = 0.25 * chir * a;
          w(dn + 3) = -0.25 * chir * a;
          seeds.push_back(w);
        }
      }
    }
  }
  return seeds;
}

inline std::vector<Vector6> all_seeds(const ModelParams& p, int n_starts, std::uint64_t seed) {
  std::vector<Vector6> seeds = patterned_seeds(p);
  const int patterned = static_cast<int>(seeds.size());
  const int random = std::max(n_starts - patterned, n_starts / 4);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> draw(0.0, 1.2);
  for (int i = 0; i < random; ++i) {
    Vector6 v;
    for (int k = 0; k < 6; ++k) v(k) = draw(rng);
    seeds.push_back(v);
  }
  return seeds;
}

// Stationary points with a clearly negative Hessian direction (the normal phase past a
// second-order line, say) are saddles, not candidates.
inline bool is_local_minimum(const ModelParams& p, const Vector6& x, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix6> es(mf_hessian(p, OrderParameterSet::from_vector(x)),
                                             Eigen::EigenvaluesOnly);
  const auto& w = es.eigenvalues();
  return w(0) >= -tol * std::max(1.0, w.cwiseAbs().maxCoeff());
}

inline opt::LocalResult<6> descend(const ModelParams& p, const Vector6& x0,
                                   const opt::LocalOptions& local) {
  auto f = [&](const Vector6& x) { return mf_energy(p, OrderParameterSet::from_vector(x)); };
  auto g = [&](const Vector6& x) { return mf_gradient(p, OrderParameterSet::from_vector(x)); };
  auto h = [&](const Vector6& x) { return mf_hessian(p, OrderParameterSet::from_vector(x)); };
  return opt::minimize_local<6>(f, g, h, x0, local);
}

}  // namespace detail

/// Local minimization from a single start.
inline opt::LocalResult<6> local_minimum(const ModelParams& params, const OrderParameterSet& start,
                                         const opt::LocalOptions& local = {}) {
  return detail::descend(normalized(params), start.to_vector(), local);
}

/// Global mean-field ground state by multistart local descent.
///
/// Starts: the normal phase, uniform seeds of both signs, chiral seeds for all three placements of
/// the distinct cavity and both chiralities (at the Landau amplitude plus two fixed ones), then
/// seeded random draws. Returns the canonical form of the lowest converged minimum; if none
/// converged the lowest point found is returned with `converged = false`.
inline MeanFieldSolution minimize_energy(const ModelParams& params, int n_starts = 32,
                                         std::uint64_t seed = 0,
                                         const MinimizeOptions& options = {}) {
  const ModelParams p = normalized(params);
  if (n_starts < 8) throw InvalidArgument("minimize_energy: n_starts must be at least 8");

  // Converged local minima win over converged saddles, which win over unconverged points. Within a
  // class the lower energy wins; energies equal to rounding keep the earlier start.
  auto rank = [&](const opt::LocalResult<6>& r) {
    if (!r.converged) return 2;
    return detail::is_local_minimum(p, r.x, options.saddle_tol) ? 0 : 1;
  };
  std::optional<opt::LocalResult<6>> best;
  int best_rank = 3;
  for (const auto& s : detail::all_seeds(p, n_starts, seed)) {
    auto r = detail::descend(p, s, options.local);
    const int k = rank(r);
    if (!best || k < best_rank ||
        (k == best_rank && r.value < best->value - opt::detail::noise_floor(best->value))) {
      best = r;
      best_rank = k;
    }
  }
  const bool any_converged = best_rank <= 1;

  const auto& pick = *best;
  MeanFieldSolution sol;
  sol.order = canonicalize(OrderParameterSet::from_vector(pick.x), &p);
  sol.energy = mf_energy(p, sol.order);
  sol.residual = mf_gradient(p, sol.order).norm();
  sol.converged = any_converged && sol.residual < options.local.accept_tol;
  sol.phase = classify_phase(sol.order);
  return sol;
}

/// All distinct converged minima within `energy_tol` of the lowest, identified to `ident_tol`
/// (max-norm on the six coordinates). No canonicalization is applied.
inline std::vector<OrderParameterSet> degenerate_minima(const ModelParams& params,
                                                        int n_starts = 32, std::uint64_t seed = 0,
                                                        double ident_tol = 1e-6,
                                                        double energy_tol = 1e-9) {
  const ModelParams p = normalized(params);
  std::vector<opt::LocalResult<6>> found;
  for (const auto& s : detail::all_seeds(p, n_starts, seed)) {
    auto r = detail::descend(p, s, {});
    if (r.converged && detail::is_local_minimum(p, r.x, 1e-10)) found.push_back(r);
  }
  if (found.empty()) throw ConvergenceError("degenerate_minima: no start converged to a minimum");
  double lowest = found.front().value;
  for (const auto& r : found) lowest = std::min(lowest, r.value);

  std::vector<OrderParameterSet> out;
  std::vector<Vector6> kept;
  for (const auto& r : found) {
    if (r.value > lowest + energy_tol * (1.0 + std::abs(lowest))) continue;
    bool dup = false;
    for (const auto& k : kept)
      if ((k - r.x).cwiseAbs().maxCoeff() < ident_tol) dup = true;
    if (!dup) {
      kept.push_back(r.x);
      out.push_back(OrderParameterSet::from_vector(r.x));
    }
  }
  return out;
}

/// Quartic reduced energy E/(Omega N) of the chiral ansatz A3 = A, A1 = A2 = At, B3 = 0, in
/// rescaled amplitudes. Only used to cross-check boundaries.
inline double csr_reduced_energy(const ModelParams& params, double A, double At) {
  const ModelParams p = normalized(params);
  const double g = p.coupling();
  if (g == 0.0) throw DomainError("csr_reduced_energy: g = 0");
  const double J = p.hopping();
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const double gap = p.omega - J * c;
  if (std::abs(gap) < 1e-14 * p.omega)
    throw DomainError("csr_reduced_energy: omega - J cos(theta) vanishes");
  const double scale = p.Omega / (8.0 * g * g);
  const double w_csr = (p.omega - 2.0 * J * J * s * s / gap) * scale;
  const double j_eff = (J * c + J * J * s * s / gap) * scale;
  const double g2 = p.gamma * p.gamma;
  const double c2 = landau::quartic_coefficient(p.gamma);
  return 2.0 * (w_csr + j_eff - g2) * At * At + (w_csr - g2) * A * A + 4.0 * j_eff * A * At +
         c2 * (A * A * A * A + 2.0 * At * At * At * At);
}

}  // namespace tdt::meanfield
