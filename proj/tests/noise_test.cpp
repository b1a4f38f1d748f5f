#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bqt/noise.hpp"
#include "bqt/teleport.hpp"
#include "test_support.hpp"

namespace bqt {
namespace {

DensityMatrix4 random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::array<double, 4> w{d(rng), d(rng), d(rng), d(rng)};
  const double s = w[0] + w[1] + w[2] + w[3];
  const Matrix4 u = testing::random_unitary<4>(rng);
  return DensityMatrix4::from((u * Matrix4::diagonal({w[0] / s, w[1] / s, w[2] / s, w[3] / s}) * u.adjoint()).hermitian_part());
}

void expect_valid_density(const Matrix4& m) {
  EXPECT_LE(m.hermitian_defect(), 1e-12);
  EXPECT_NEAR(m.trace().real(), 1.0, 1e-12);
  EXPECT_GE(hermitian_eigenvalues(m)[0], -1e-10);
}

TEST(DephasingChannel, ZeroProbabilityIsIdentity) {
  std::mt19937_64 rng(1);
  const auto rho = random_state(rng);
  for (double u : {0.0, 0.4, 1.0})
    EXPECT_LE(max_abs_diff(apply_correlated(dephasing_channel(0.0, u), rho).matrix(), rho.matrix()), 1e-15);
}

TEST(DephasingChannel, CertainFlipFixesBellState) {
  const auto rho = bell_phi_plus();
  EXPECT_LE(max_abs_diff(apply_correlated(dephasing_channel(1.0, 0.0), rho).matrix(), rho.matrix()), 1e-15);
}

TEST(DephasingChannel, HalfFlipKillsCoherence) {
  const auto out = apply_correlated(dephasing_channel(0.5, 0.0), bell_phi_plus());
  EXPECT_NEAR(std::abs(out(0, 3)), 0.0, 1e-15);
}

TEST(DephasingChannel, MatchesAnalyticResource) {
  const auto out = apply_correlated(dephasing_channel(0.5, 0.5), bell_phi_plus());
  EXPECT_NEAR(out(0, 3).real(), 0.25, 1e-15);
  for (double p = 0.0; p <= 1.0; p += 0.05)
    for (double u = 0.0; u <= 1.0; u += 0.05)
      EXPECT_LE(max_abs_diff(resource_state(ChannelKind::dephasing, p, u).matrix(),
                             testing::analytic_dephasing_resource(p, u)),
                1e-12);
}

TEST(DephasingChannel, RejectsOutOfRange) {
  EXPECT_THROW(dephasing_channel(1.1, 0.0), RangeError);
  EXPECT_THROW(dephasing_channel(0.5, -0.1), RangeError);
  EXPECT_THROW(amplitude_damping_channel(-0.01, 0.0), RangeError);
  EXPECT_THROW(amplitude_damping_channel(0.5, 2.0), RangeError);
}

TEST(AmplitudeDampingChannel, ZeroProbabilityIsIdentity) {
  std::mt19937_64 rng(2);
  const auto rho = random_state(rng);
  for (double u : {0.0, 0.5, 1.0})
    EXPECT_LE(max_abs_diff(apply_correlated(amplitude_damping_channel(0.0, u), rho).matrix(), rho.matrix()), 1e-15);
}

TEST(AmplitudeDampingChannel, FullDampingEmptiesToGround) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto out = apply_correlated(amplitude_damping_channel(1.0, 0.0), random_state(rng));
    Matrix4 ground;
    ground(0, 0) = 1.0;
    EXPECT_LE(max_abs_diff(out.matrix(), ground), 1e-14);
  }
}

TEST(AmplitudeDampingChannel, MatchesAnalyticResource) {
  const auto out = apply_correlated(amplitude_damping_channel(0.5, 0.5), bell_phi_plus());
  EXPECT_NEAR(out(0, 3).real(), (0.25 + 0.5 * std::sqrt(0.5)) / 2.0, 1e-15);
  EXPECT_NEAR(out(0, 3).real(), 0.30178, 1e-5);
  for (double p = 0.0; p <= 1.0; p += 0.05)
    for (double u = 0.0; u <= 1.0; u += 0.05)
      EXPECT_LE(max_abs_diff(resource_state(ChannelKind::amplitude_damping, std::min(p, 1.0), std::min(u, 1.0)).matrix(),
                             testing::analytic_ad_resource(std::min(p, 1.0), std::min(u, 1.0))),
                1e-12);
}

TEST(CorrelatedChannel, FamiliesCompleteAndOutputsValidOnGrid) {
  std::mt19937_64 rng(4);
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double p = i / 100.0;
      const double u = j / 100.0;
      for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::amplitude_damping}) {
        const CorrelatedChannel ch = make_channel(kind, p, u);
        ASSERT_LE(completeness_error<4>(ch.uncorrelated), 1e-12);
        ASSERT_LE(completeness_error<4>(ch.correlated), 1e-12);
        if ((i + j) % 10 == 0) expect_valid_density(apply_correlated(ch, random_state(rng)).matrix());
      }
    }
  }
}

TEST(CorrelatedChannel, AffineInMemory) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rho = random_state(rng);
    const double p = d(rng);
    const double u = d(rng);
    for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::amplitude_damping}) {
      const Matrix4 lo = apply_correlated(make_channel(kind, p, 0.0), rho).matrix();
      const Matrix4 hi = apply_correlated(make_channel(kind, p, 1.0), rho).matrix();
      const Matrix4 mid = apply_correlated(make_channel(kind, p, u), rho).matrix();
      EXPECT_LE(max_abs_diff(mid, (1.0 - u) * lo + u * hi), 1e-12);
    }
  }
}

TEST(CorrelatedChannel, MalformedFamilyPropagates) {
  CorrelatedChannel ch = dephasing_channel(0.3, 0.5);
  ch.correlated[0].weight = 0.5;
  EXPECT_THROW(apply_correlated(ch, bell_phi_plus()), CompletenessViolation);
}

TEST(DephasingTime, StartsCoherent) {
  for (double tau : {0.01, 0.1, 0.25, 0.5, 7.0}) EXPECT_EQ(DephasingTimeModel(tau).p_of_t(0.0), 0.0);
}

TEST(DephasingTime, LongTimeLimitIsHalf) {
  for (double tau : {0.01, 0.1, 0.25, 0.5, 7.0}) EXPECT_NEAR(DephasingTimeModel(tau).p_of_t(2000.0), 0.5, 1e-12);
  // far past the point where cosh overflows
  EXPECT_NEAR(DephasingTimeModel(0.01).p_of_t(1e6), 0.5, 1e-12);
}

TEST(DephasingTime, RejectsBadInputs) {
  EXPECT_THROW(DephasingTimeModel(0.0), RangeError);
  EXPECT_THROW(DephasingTimeModel(-1.0), RangeError);
  EXPECT_THROW(DephasingTimeModel(0.1).p_of_t(-0.5), RangeError);
}

TEST(DephasingTime, ContinuousAcrossCriticalMemory) {
  const DephasingTimeModel below(0.25 - 1e-6), at(0.25), above(0.25 + 1e-6);
  for (double t = 0.0; t <= 20.0; t += 0.1) {
    EXPECT_NEAR(below.p_of_t(t), at.p_of_t(t), 1e-4);
    EXPECT_NEAR(above.p_of_t(t), at.p_of_t(t), 1e-4);
  }
}

TEST(DephasingTime, MarkovianRegimeIsMonotone) {
  for (double tau : {0.005, 0.05, 0.1, 0.2, 0.245}) {
    const DephasingTimeModel m(tau);
    EXPECT_TRUE(m.markovian());
    double prev = 0.0;
    for (int k = 0; k <= 2000; ++k) {
      const double p = m.p_of_t(k * 0.025);
      EXPECT_GE(p, prev - 1e-15);
      prev = p;
    }
  }
}

TEST(DephasingTime, LongMemoryDipsNearMultiplesOfPi) {
  const DephasingTimeModel m(7.0);
  EXPECT_FALSE(m.markovian());
  for (int n = 1; n <= 5; ++n) {
    double best_t = 0.0;
    double best_p = 2.0;
    for (double t = n * pi - 0.5; t <= n * pi + 0.5; t += 1e-4) {
      const double p = m.p_of_t(t);
      if (p < best_p) best_p = p, best_t = t;
    }
    EXPECT_NEAR(best_t, n * pi, 0.05);
    // large-tau approximation (1 - e^{-t/2tau} cos 2t)/2
    EXPECT_NEAR(best_p, 0.5 * (1.0 - std::exp(-best_t / 14.0) * std::cos(2.0 * best_t)), 2e-3);
  }
}

TEST(DampingTime, StartsUndamped) {
  for (double width : {0.1, 1.0, 2.0, 5.0}) EXPECT_EQ(ADTimeModel(1.0, width).p_of_t(0.0), 0.0);
}

TEST(DampingTime, FullyDampsEventually) {
  EXPECT_GE(ADTimeModel(1.0, 5.0).p_of_t(100.0), 1.0 - 1e-12);
  EXPECT_GE(ADTimeModel(1.0, 5.0).p_of_t(1e5), 1.0 - 1e-12);
  EXPECT_NEAR(ADTimeModel(1.0, 5.0).survival(100.0), 0.0, 1e-12);
}

TEST(DampingTime, RegimeFlag) {
  EXPECT_TRUE(ADTimeModel(1.0, 5.0).markovian());
  EXPECT_FALSE(ADTimeModel(1.0, 0.1).markovian());
  EXPECT_FALSE(ADTimeModel(0.5, 1.0).markovian());
  EXPECT_THROW(ADTimeModel(0.0, 1.0), RangeError);
  EXPECT_THROW(ADTimeModel(1.0, -1.0), RangeError);
}

TEST(DampingTime, ContinuousAcrossCriticalCoupling) {
  const ADTimeModel below(0.5 - 1e-6, 1.0), at(0.5, 1.0), above(0.5 + 1e-6, 1.0);
  for (double t = 0.0; t <= 40.0; t += 0.1) {
    EXPECT_NEAR(below.p_of_t(t), at.p_of_t(t), 1e-4);
    EXPECT_NEAR(above.p_of_t(t), at.p_of_t(t), 1e-4);
  }
}

TEST(DampingTime, WeakCouplingIsMonotone) {
  const ADTimeModel m(1.0, 5.0);
  double prev = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double p = m.p_of_t(k * 0.02);
    EXPECT_GE(p, prev - 1e-15);
    prev = p;
  }
}

TEST(DampingTime, StrongCouplingDipsWithPredictedPeriod) {
  const double width = 0.1;
  const ADTimeModel m(1.0, width);
  const double ds = std::sqrt(2.0 * width - width * width);
  for (int n = 1; n <= 3; ++n) {
    const double centre = 2.0 * pi * n / ds;
    double best_t = 0.0;
    double best_p = 2.0;
    for (double t = centre - 2.0; t <= centre + 2.0; t += 1e-4) {
      const double p = m.p_of_t(t);
      if (p < best_p) best_p = p, best_t = t;
    }
    EXPECT_NEAR(best_t, centre, 2e-4);
    EXPECT_NEAR(best_p, 1.0 - std::exp(-width * centre), 1e-9);
  }
}

}  // namespace
}  // namespace bqt
