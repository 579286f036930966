#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tdt/boundaries.hpp"
#include "tdt/meanfield.hpp"

namespace {

using namespace tdt;
using meanfield::Phase;

OrderParameterSet make(std::initializer_list<std::complex<double>> a) {
  OrderParameterSet o;
  std::size_t i = 0;
  for (auto v : a) o.alpha[i++] = v;
  return o;
}

TEST(MinimizeEnergy, NormalPhaseBelowBoundary) {
  const auto s = meanfield::minimize_energy({1, 1, 0.1, 1.5, 0.1, 2 * kPi / 3});
  EXPECT_EQ(s.phase, Phase::NP);
  EXPECT_TRUE(s.converged);
  EXPECT_LT(s.order.max_abs(), 1e-8);
}

TEST(MinimizeEnergy, UniformSuperradiant) {
  const ModelParams p{1, 1, 0.6, 1.5, 0.1, 2 * kPi / 3};
  const auto s = meanfield::minimize_energy(p);
  EXPECT_EQ(s.phase, Phase::SR);
  for (int n = 0; n < 3; ++n) {
    EXPECT_GT(s.order.A(n), 0.0);
    EXPECT_NEAR(s.order.A(n), s.order.A(0), 1e-9);
    EXPECT_NEAR(s.order.B(n), 0.0, 1e-9);
  }
  EXPECT_LT(mf_gradient(p, s.order).norm(), 1e-8);
}

TEST(MinimizeEnergy, ChiralPattern) {
  const ModelParams p{1, 1, 1.0, 1.2, 0.1, kPi / 3};
  const auto s = meanfield::minimize_energy(p);
  EXPECT_EQ(s.phase, Phase::CSR);
  EXPECT_NEAR(s.order.A(0), s.order.A(1), 1e-9);
  EXPECT_GT(std::abs(s.order.A(0) - s.order.A(2)), 0.1);
  EXPECT_NEAR(s.order.B(2), 0.0, 1e-9);
  EXPECT_NEAR(s.order.B(0), -s.order.B(1), 1e-9);
  EXPECT_GE(s.order.A(2), 0.0);
}

TEST(MinimizeEnergy, DeterministicForSeed) {
  const ModelParams p{1, 1, 0.9, 0.8, 0.1, 0.5};
  const auto a = meanfield::minimize_energy(p, 40, 123);
  const auto b = meanfield::minimize_energy(p, 40, 123);
  EXPECT_EQ(a.energy, b.energy);
  EXPECT_EQ(a.order.to_vector(), b.order.to_vector());
  EXPECT_THROW(meanfield::minimize_energy(p, 4), InvalidArgument);
}

TEST(MinimizeEnergy, ShallowMinimumNearSecondOrderLine) {
  // Just inside the ordered phase the normal state is a saddle a hair above the true minimum.
  const auto cp = boundaries::second_order_point(0.9, 2 * kPi / 3, 0.1);
  ModelParams p = cp.params();
  p.lambda += 1e-7;
  const auto s = meanfield::minimize_energy(p);
  EXPECT_EQ(s.phase, Phase::SR);
}

TEST(ClassifyPhase, Examples) {
  EXPECT_EQ(meanfield::classify_phase({}), Phase::NP);
  EXPECT_EQ(meanfield::classify_phase(make({0.3, 0.3, 0.3})), Phase::SR);
  EXPECT_EQ(meanfield::classify_phase(make({{0.3, -0.05}, {0.3, 0.05}, {0.4, 0.0}})), Phase::CSR);
  EXPECT_THROW(meanfield::classify_phase({}, -1.0), InvalidArgument);
}

TEST(Canonicalize, Examples) {
  const auto sr = meanfield::canonicalize(make({-0.3, -0.3, -0.3}));
  for (int n = 0; n < 3; ++n) EXPECT_DOUBLE_EQ(sr.A(n), 0.3);

  const auto moved = meanfield::canonicalize(make({{0.4, 0.0}, {0.3, -0.05}, {0.3, 0.05}}));
  EXPECT_DOUBLE_EQ(moved.A(2), 0.4);
  EXPECT_DOUBLE_EQ(moved.A(0), 0.3);
  EXPECT_DOUBLE_EQ(moved.B(2), 0.0);

  const auto canon = make({{0.3, -0.05}, {0.3, 0.05}, {0.4, 0.0}});
  const auto again = meanfield::canonicalize(canon);
  EXPECT_EQ(again.to_vector(), canon.to_vector());
}

TEST(Canonicalize, PreservesEnergyAndIsIdempotent) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const ModelParams p{1, 1, 0.7, 1.1, 0.1, 3 * u(rng)};
    Vector6 v;
    for (int k = 0; k < 6; ++k) v(k) = u(rng);
    const auto o = OrderParameterSet::from_vector(v);
    const auto c = meanfield::canonicalize(o, &p);
    EXPECT_NEAR(mf_energy(p, c), mf_energy(p, o), 1e-12);
    EXPECT_GE(c.A(2), 0.0);
    EXPECT_EQ(meanfield::canonicalize(c, &p).to_vector(), c.to_vector());
  }
}

TEST(Observables, NormalPhase) {
  const auto ob = meanfield::observables({1, 1, 0.5, 1.0, 0.1, 0.3}, {});
  EXPECT_EQ(ob.n_ph, 0.0);
  EXPECT_EQ(ob.i_ph, 0.0);
  for (double h : ob.h_exp) EXPECT_NEAR(h, -1.0, 1e-15);
}

TEST(Observables, CurrentFormula) {
  const auto o = make({{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}});
  // -2 Im(conj(a1) a2) = -2.
  EXPECT_NEAR(meanfield::observables({1, 1, 0.5, 1.0, 0.1, 0.3}, o).i_ph, -2.0, 1e-15);
}

TEST(Observables, CurrentVanishesInSuperradiantPhase) {
  const double tc = boundaries::theta_c(0.1);
  const ModelParams p{1, 1, 1.0, 1.2, 0.1, tc + 0.3};
  const auto s = meanfield::minimize_energy(p);
  ASSERT_EQ(s.phase, Phase::SR);
  EXPECT_NEAR(meanfield::observables(p, s.order).i_ph, 0.0, 1e-12);
}

TEST(Observables, CurrentOddInFlux) {
  const ModelParams p{1, 1, 1.0, 1.2, 0.1, kPi / 3};
  const auto a = meanfield::minimize_energy(p);
  const auto b = meanfield::minimize_energy(p.with_theta(-kPi / 3));
  const double ia = meanfield::observables(p, a.order).i_ph;
  const double ib = meanfield::observables(p.with_theta(-kPi / 3), b.order).i_ph;
  EXPECT_GT(std::abs(ia), 1.0);
  EXPECT_NEAR(ia, -ib, 1e-8);
}

TEST(DegenerateMinima, Counts) {
  EXPECT_EQ(meanfield::degenerate_minima({1, 1, 0.6, 1.5, 0.1, 2 * kPi / 3}, 64, 3).size(), 2u);
  EXPECT_EQ(meanfield::degenerate_minima({1, 1, 1.0, 1.2, 0.1, kPi / 3}, 64, 3).size(), 6u);
}

TEST(CsrReducedEnergy, Basics) {
  const ModelParams p{1, 1, 0.5, 0.9, 0.1, kPi / 3};
  EXPECT_EQ(meanfield::csr_reduced_energy(p, 0.0, 0.0), 0.0);
  EXPECT_THROW(meanfield::csr_reduced_energy({1, 1, 0.5, 0.9, 1.0, 0.0}, 0.1, 0.1), DomainError);
}

TEST(CsrReducedEnergy, StationaryAmplitudesVanishAtBoundary) {
  // Minimize the quartic over (A, At) on a shrinking sequence of distances above the chiral line.
  const double g = 0.9, t = kPi / 3, j = 0.1;
  const double lc = boundaries::csr_boundary_lambda(g, t, j);
  double previous = 1e9;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const ModelParams p{1, 1, lc + d, g, j, t};
    double best = 0.0, amp = 0.0;
    for (int i = -200; i <= 200; ++i)
      for (int k = -200; k <= 200; ++k) {
        const double A = 2.0 * i / 200.0 * std::sqrt(d), At = 2.0 * k / 200.0 * std::sqrt(d);
        const double e = meanfield::csr_reduced_energy(p, A, At);
        if (e < best) {
          best = e;
          amp = std::hypot(A, At);
        }
      }
    EXPECT_GT(amp, 0.0);
    EXPECT_LT(amp, previous);
    previous = amp;
  }
}

}  // namespace
