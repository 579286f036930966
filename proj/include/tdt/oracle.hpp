#pragma once

// Gradient-free reference solvers. Nothing here touches mf_gradient, mf_hessian or the patterned
// seeds of the production minimizer; only mf_energy and atomic_ground are shared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "tdt/error.hpp"
#include "tdt/landau.hpp"
#include "tdt/model.hpp"

namespace tdt::oracle {

struct GridSpec {
  double amplitude_max = 3.0;  // half-width of the search box per coordinate
  int points_per_axis = 7;
  int refine_rounds = 80;      // coordinate sweeps per candidate
  int random_samples = 4000;
  int candidates = 12;         // best lattice/random points that get refined
};

struct GridResult {
  OrderParameterSet order;
  double energy = 0.0;
};

namespace detail {

template <class F>
double golden_section(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

inline std::pair<Vector6, double> coordinate_refine(const ModelParams& p, Vector6 x, double width,
                                                     int rounds) {
  auto energy = [&](const Vector6& v) { return mf_energy(p, OrderParameterSet::from_vector(v)); };
  double e = energy(x);
  double w = width;
  for (int r = 0; r < rounds; ++r) {
    double max_move = 0.0;
    for (int i = 0; i < 6; ++i) {
      Vector6 trial = x;
      auto line = [&](double t) {
        trial(i) = t;
        return energy(trial);
      };
      const double best = golden_section(line, x(i) - w, x(i) + w, 1e-10 * (1.0 + w));
      trial(i) = best;
      const double et = energy(trial);
      if (et < e) {
        max_move = std::max(max_move, std::abs(best - x(i)));
        x = trial;
        e = et;
      }
    }
    // Keep the window while minima sit near its edge; shrink once moves are small.
    if (max_move < 0.5 * w) w = std::max(0.5 * w, 1e-7);
  }
  return {x, e};
}

}  // namespace detail

/// Brute-force ground state: lattice plus uniform random sampling of the box, then coordinate-wise
/// golden-section refinement of the best candidates. The normal phase is always a candidate.
inline GridResult grid_minimize(const ModelParams& params, const GridSpec& spec = {},
                                std::uint64_t seed = 0) {
  const ModelParams p = normalized(params);
  if (!(spec.amplitude_max > 0.0)) throw InvalidArgument("grid_minimize: amplitude_max must be positive");
  if (spec.points_per_axis < 7) throw InvalidArgument("grid_minimize: points_per_axis must be >= 7");

  auto energy = [&](const Vector6& v) { return mf_energy(p, OrderParameterSet::from_vector(v)); };
  std::vector<std::pair<double, Vector6>> pool;
  pool.emplace_back(energy(Vector6::Zero()), Vector6::Zero());

  const int m = spec.points_per_axis;
  const double step = 2.0 * spec.amplitude_max / (m - 1);
  long total = 1;
  for (int k = 0; k < 6; ++k) total *= m;
  Vector6 v;
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    for (int k = 0; k < 6; ++k) {
      v(k) = -spec.amplitude_max + step * static_cast<double>(r % m);
      r /= m;
    }
    pool.emplace_back(energy(v), v);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-spec.amplitude_max, spec.amplitude_max);
  for (int s = 0; s < spec.random_samples; ++s) {
    for (int k = 0; k < 6; ++k) v(k) = uni(rng);
    pool.emplace_back(energy(v), v);
  }

  const std::size_t keep = std::min(pool.size(), static_cast<std::size_t>(std::max(spec.candidates, 1)));
  std::partial_sort(pool.begin(), pool.begin() + static_cast<long>(keep), pool.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  GridResult best{OrderParameterSet{}, pool.front().first};
  best.order = OrderParameterSet::from_vector(pool.front().second);
  std::vector<Vector6> starts;
  for (std::size_t i = 0; i < keep; ++i) starts.push_back(pool[i].second);
  starts.push_back(Vector6::Zero());
  for (const auto& s : starts) {
    auto [x, e] = detail::coordinate_refine(p, s, step, spec.refine_rounds);
    if (e < best.energy) {
      best.energy = e;
      best.order = OrderParameterSet::from_vector(x);
    }
  }
  return best;
}

/// Taylor coefficients of the single-atom ground energy for the requested powers of a (2, 4, 6).
inline std::vector<double> numeric_taylor(double gamma, const std::vector<int>& powers,
                                          const landau::TaylorFitOptions& opt = {}) {
  int max_order = 2;
  for (int pw : powers) {
    if (pw != 2 && pw != 4 && pw != 6) throw InvalidArgument("numeric_taylor: powers must be 2, 4 or 6");
    max_order = std::max(max_order, pw);
  }
  const auto all = landau::taylor_oracle(gamma, max_order, opt);
  std::vector<double> out;
  out.reserve(powers.size());
  for (int pw : powers) out.push_back(all[static_cast<std::size_t>(pw / 2 - 1)]);
  return out;
}

}  // namespace tdt::oracle
