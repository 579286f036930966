#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tdt/boundaries.hpp"
#include "tdt/normal_phase.hpp"

namespace {

using namespace tdt;
namespace np = tdt::normal_phase;

TEST(OmegaQ, Examples) {
  EXPECT_DOUBLE_EQ(np::omega_q({1, 1, 0.0, 0.9, 0.0, 0.4}, 0.0), 1.0);
  EXPECT_NEAR(np::omega_q({1, 1, 0.0, 0.9, 0.1, 0.0}, 0.0), 1.2, 1e-15);
  EXPECT_NEAR(np::omega_q({1, 1, 0.5, 1.0 / kSqrt2, 0.0, 0.0}, 0.0), 0.5, 1e-15);
}

TEST(Spectrum, FreePhotonsOnRing) {
  const ModelParams p{1.0, 1.0, 0.0, 0.8, 0.2, 0.9};
  const auto sp = np::spectrum(p);
  for (int i = 0; i < 3; ++i)
    EXPECT_NEAR(sp.epsilon_q[i], 1.0 + 0.4 * std::cos(0.9 - np::kMomenta[i]), 1e-14);
}

TEST(Spectrum, AllGapsCloseOnSingleCavityLine) {
  const double g = 1.3;
  const auto sp = np::spectrum({1, 1, 1.0 / (std::sqrt(8.0) * g), g, 0.0, 0.5});
  for (double e : sp.epsilon_q) EXPECT_NEAR(e, 0.0, 1e-8);
}

TEST(Spectrum, DeepNormalPhaseIsStable) {
  const auto sp = np::spectrum({1, 1, 0.3, 0.9, 0.1, 1.0472});
  for (double e : sp.epsilon_q) EXPECT_GE(e, 0.0);
  for (double b : sp.beta_q) EXPECT_GT(b, 0.0);
}

TEST(Spectrum, FlagsInstability) {
  try {
    np::spectrum({1, 1, 0.8, 0.9, 0.1, 0.3});
    FAIL() << "expected UnstableSpectrum";
  } catch (const UnstableSpectrum& e) {
    EXPECT_TRUE(std::isfinite(e.q()));
  }
}

TEST(Spectrum, TimeReversalSwapsMomenta) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const ModelParams p{1, 1, 0.2 * u(rng), 1.5 * u(rng), 0.3 * u(rng), -kPi + 2 * kPi * u(rng)};
    const auto a = np::spectrum(p);
    const auto b = np::spectrum(p.with_theta(-p.theta));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a.epsilon_q[k], b.epsilon_q[np::kPartner[k]], 1e-12);
  }
}

TEST(Spectrum, IntensiveEnergyBookkeeping) {
  const ModelParams p{1, 1, 0.2, 0.9, 0.1, 0.5};
  const auto inf = np::spectrum(p);
  EXPECT_DOUBLE_EQ(inf.e_ground_intensive, -3.0);
  const auto fin = np::spectrum(p, 100.0);
  EXPECT_NEAR(fin.e_ground_intensive, -3.0 + inf.e_ground_correction / 100.0, 1e-15);
  EXPECT_NEAR(fin.e0_intensive, -3.0 - 6.0 * 0.04 * 0.81 / 100.0, 1e-15);
  EXPECT_LT(inf.e_ground_correction, 0.0);
}

TEST(Spectrum, GroundEnergySmoothInLambda) {
  // Central difference of the O(1) energy at two step sizes agrees inside the normal phase.
  const ModelParams p{1, 1, 0.25, 0.9, 0.1, 1.0};
  auto e = [&](double l) { return np::spectrum(p.with_lambda(l)).e_ground_correction; };
  for (double l : {0.1, 0.2, 0.3}) {
    const double d1 = (e(l + 1e-5) - e(l - 1e-5)) / 2e-5;
    const double d2 = (e(l + 2e-5) - e(l - 2e-5)) / 4e-5;
    EXPECT_NEAR(d1, d2, 1e-6);
  }
}

TEST(LowestGap, TiesGoToZeroMomentum) {
  np::NormalPhaseSpectrum sp;
  sp.epsilon_q = {0.3, 0.3, 0.3};
  EXPECT_EQ(np::lowest_gap(sp).index, 0);
  sp.epsilon_q = {0.3, 0.2, 0.2};
  EXPECT_EQ(np::lowest_gap(sp).index, 1);
}

TEST(SecondOrderLambda, Examples) {
  EXPECT_NEAR(np::second_order_lambda(1.0 / kSqrt2, kPi / 3, 0.1, 2 * kPi / 3), 0.481227, 1e-6);
  for (double q : np::kMomenta) EXPECT_NEAR(np::second_order_lambda(1.0, 0.7, 0.0, q), 1.0 / std::sqrt(8.0), 1e-15);
  EXPECT_THROW(np::second_order_lambda(0.0, 0.0, 0.1, 0.0), DomainError);
}

TEST(SecondOrderLambda, BranchesReduceToClosedForms) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = -kPi + 2 * kPi * u(rng), j = 0.3 * u(rng), g = 0.8 + u(rng);
    const double sr = boundaries::sr_boundary_lambda(g, t, j);
    const double csr = boundaries::csr_boundary_lambda(g, t, j);
    EXPECT_NEAR(np::second_order_lambda(g, t, j, 0.0), sr, 1e-10 * sr);
    EXPECT_NEAR(np::second_order_lambda(g, t, j, 2 * kPi / 3), csr, 1e-10 * csr);
    EXPECT_NEAR(np::second_order_lambda(g, t, j, -2 * kPi / 3), csr, 1e-10 * csr);
  }
}

TEST(SecondOrderLambda, GapClosesOnTheSurface) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = -kPi + 2 * kPi * u(rng), j = 0.3 * u(rng), g = 0.8 + u(rng);
    const double l = std::min(np::second_order_lambda(g, t, j, 0.0),
                              np::second_order_lambda(g, t, j, 2 * kPi / 3));
    const auto sp = np::spectrum({1, 1, l, g, j, t});
    EXPECT_LT(np::lowest_gap(sp).value, 1e-8);
  }
}

}  // namespace
