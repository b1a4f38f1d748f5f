#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bqt/negativity.hpp"
#include "bqt/teleport.hpp"
#include "test_support.hpp"

namespace bqt {
namespace {

constexpr Backend kBackends[] = {Backend::closed_form, Backend::oracle};
constexpr ChannelKind kChannels[] = {ChannelKind::dephasing, ChannelKind::amplitude_damping};
constexpr Direction kDirections[] = {Direction::a_to_b, Direction::b_to_a};

ProtocolSettings random_settings(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> th(0.0, pi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  return {PureQubit(th(rng), ph(rng)), PureQubit(th(rng), ph(rng)), TriggerSetting(th(rng)), TriggerSetting(th(rng))};
}

/// Alice sends with certainty, Bob never fires.
ProtocolSettings sharp_alice(double theta, double phi) {
  return {PureQubit(theta, phi), PureQubit(0.0, 0.0), TriggerSetting(theta), TriggerSetting(pi)};
}

TEST(MeasurementProbability, Examples) {
  EXPECT_NEAR(measurement_probability(PureQubit(1.1, 0.0), TriggerSetting(1.1)), 1.0, 1e-15);
  EXPECT_NEAR(measurement_probability(PureQubit(0.0, 0.0), TriggerSetting(pi)), 0.0, 1e-15);
  for (double phi : {0.0, 0.7, 2.0, 5.5})
    EXPECT_NEAR(measurement_probability(PureQubit(pi / 2, phi), TriggerSetting(0.0)), 0.5, 1e-15);
}

TEST(MeasurementProbability, EqualsStateOverlap) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> th(0.0, pi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  for (int i = 0; i < 500; ++i) {
    const PureQubit s(th(rng), ph(rng));
    const double tt = th(rng);
    const Matrix2 trigger = projector(Ket<2>{std::cos(tt / 2), std::sin(tt / 2)});
    const double overlap = (trigger * projector(s.ket())).trace().real();
    EXPECT_NEAR(measurement_probability(s, TriggerSetting(tt)), overlap, 1e-14);
  }
}

TEST(Angles, RangeChecks) {
  EXPECT_THROW(PureQubit(-0.1, 0.0), RangeError);
  EXPECT_THROW(PureQubit(pi + 0.1, 0.0), RangeError);
  EXPECT_THROW(TriggerSetting(4.0), RangeError);
  EXPECT_NEAR(PureQubit(1.0, 2.0 * pi + 0.3).phi(), 0.3, 1e-15);
  EXPECT_NEAR(PureQubit(1.0, -0.3).phi(), 2.0 * pi - 0.3, 1e-15);
}

TEST(ResourceState, Examples) {
  for (ChannelKind kind : kChannels)
    for (double u : {0.0, 0.5, 1.0})
      EXPECT_LE(max_abs_diff(resource_state(kind, 0.0, u).matrix(), bell_phi_plus().matrix()), 1e-15);
  EXPECT_NEAR(resource_state(ChannelKind::dephasing, 0.5, 0.3)(0, 3).real(), 0.15, 1e-15);
  EXPECT_LE(max_abs_diff(resource_state(ChannelKind::amplitude_damping, 1.0, 0.0).matrix(),
                         Matrix4::diagonal({1.0, 0.0, 0.0, 0.0})),
            1e-15);
  EXPECT_THROW(resource_state(ChannelKind::dephasing, 0.5, 1.5), RangeError);
}

TEST(ResidualState, Examples) {
  EXPECT_EQ(residual_state(ChannelKind::dephasing, 0.4, 0.2), (BlochVector{0, 0, 0}));
  EXPECT_EQ(residual_state(ChannelKind::amplitude_damping, 0.5, 0.3), (BlochVector{0, 0, 0.5}));
  EXPECT_EQ(residual_state(ChannelKind::amplitude_damping, 0.0, 0.3), (BlochVector{0, 0, 0}));
}

TEST(ResidualState, IsSingleQubitDampingOfMixedState) {
  // K0 (I/2) K0^dag + K1 (I/2) K1^dag for one damped qubit
  for (double p : {0.0, 0.2, 0.7, 1.0}) {
    const auto k = amplitude_damping_kraus(p);
    const Matrix2 half = Matrix2::identity() * 0.5;
    const Matrix2 out = k[0] * half * k[0].adjoint() + k[1] * half * k[1].adjoint();
    EXPECT_LE(max_abs_diff(pauli_components(out), residual_state(ChannelKind::amplitude_damping, p, 0.0)), 1e-15);
  }
}

TEST(DephasingClosedForm, IdealTeleportation) {
  const auto s = sharp_alice(1.2, 0.0);
  const auto out = teleported_bloch_dephasing(s, Direction::a_to_b, 1.0);
  EXPECT_DOUBLE_EQ(out.weight, 1.0);
  EXPECT_LE(max_abs_diff(out.bloch, s.alice_state.bloch()), 1e-15);
}

TEST(DephasingClosedForm, ZeroWeightGivesMixedState) {
  const ProtocolSettings s{PureQubit(0.0, 0.0), PureQubit(0.4, 1.0), TriggerSetting(pi), TriggerSetting(0.3)};
  const auto out = teleported_bloch_dephasing(s, Direction::a_to_b, 0.6);
  EXPECT_NEAR(out.weight, 0.0, 1e-30);
  EXPECT_LE(out.bloch.norm(), 1e-30);
}

TEST(DephasingClosedForm, TransverseScalesWithRootNegativity) {
  const auto out = teleported_bloch_dephasing(sharp_alice(pi / 2, 0.0), Direction::a_to_b, 0.25);
  EXPECT_LE(max_abs_diff(out.bloch, BlochVector{0.5, 0.0, 0.0}), 1e-15);
  EXPECT_THROW(teleported_bloch_dephasing(sharp_alice(pi / 2, 0.0), Direction::a_to_b, 1.2), RangeError);
}

TEST(DephasingClosedForm, AzimuthFollowsInput) {
  // phase pi/2 points the input along +y; a sharp, noiseless pass keeps it there
  const ProtocolSettings s{PureQubit(pi / 2, pi / 2), PureQubit(0.0, 0.0), TriggerSetting(0.0), TriggerSetting(pi)};
  const auto out = teleported_bloch_dephasing(s, Direction::a_to_b, 1.0);
  EXPECT_NEAR(out.weight, 0.5, 1e-15);
  EXPECT_LE(max_abs_diff(out.bloch, BlochVector{0.0, 0.5, 0.0}), 1e-15);
}

TEST(DampingClosedForm, NoDampingReducesToDephasing) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_settings(rng);
    for (Direction d : kDirections)
      for (double u : {0.0, 0.5, 1.0})
        EXPECT_LE(max_abs_diff(teleported_bloch_ad(s, d, 0.0, u).bloch, teleported_bloch_dephasing(s, d, 1.0).bloch),
                  1e-15);
  }
}

TEST(DampingClosedForm, ZeroWeightLeavesResidual) {
  const ProtocolSettings s{PureQubit(0.0, 0.0), PureQubit(0.0, 0.0), TriggerSetting(pi), TriggerSetting(pi)};
  EXPECT_LE(max_abs_diff(teleported_bloch_ad(s, Direction::a_to_b, 0.7, 0.4).bloch, BlochVector{0, 0, 0.7}), 1e-15);
}

TEST(DampingClosedForm, NorthPoleAtHalfDamping) {
  const auto out = teleported_bloch_ad(sharp_alice(0.0, 0.0), Direction::a_to_b, 0.5, 0.0);
  EXPECT_NEAR(out.bloch.z, 0.0, 1e-15);
}

TEST(DampingClosedForm, LeavesBallForSouthernInputs) {
  // B = p - 2p^2 - 1 at u = 0 drops below -1 once p > 1/2
  EXPECT_THROW(teleported_bloch_ad(sharp_alice(pi, 0.0), Direction::a_to_b, 0.7, 0.0), BlochOutOfBall);
  EXPECT_NO_THROW(teleported_bloch_ad(sharp_alice(pi, 0.0), Direction::a_to_b, 0.4, 0.0));
}

TEST(ConvexLaw, Examples) {
  const PureQubit in(1.0, 0.4);
  const auto ideal = teleport_output(Direction::a_to_b, 1.0, 0.0, in, {});
  EXPECT_EQ(ideal.bloch, in.bloch());
  const BlochVector r{0.0, 0.0, 0.3};
  EXPECT_EQ(teleport_output(Direction::a_to_b, 1.0, 1.0, in, r).bloch, r);
  const auto half = teleport_output(Direction::b_to_a, 0.5, 0.0, in, {});
  EXPECT_LE(max_abs_diff(half.bloch, 0.5 * in.bloch()), 1e-16);
  EXPECT_EQ(half.direction, Direction::b_to_a);
}

TEST(ConvexLaw, AffineInWeight) {
  const BlochVector t{0.2, -0.3, 0.5};
  const BlochVector r{0.0, 0.0, 0.4};
  for (double ms = 0.0; ms <= 1.0; ms += 0.1)
    for (double mr = 0.0; mr <= 1.0; mr += 0.1) {
      const auto out = teleport_output(Direction::a_to_b, ms, mr, t, r);
      const double w = ms * (1.0 - mr);
      EXPECT_NEAR(out.weight, w, 1e-15);
      EXPECT_LE(max_abs_diff(out.bloch, r + w * (t - r)), 1e-15);
    }
}

TEST(Oracle, IdealResourceIsIdentity) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> th(0.0, pi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  for (int i = 0; i < 200; ++i) {
    const PureQubit in(th(rng), ph(rng));
    EXPECT_LE(max_abs_diff(oracle_teleport(bell_phi_plus(), in), in.bloch()), 1e-12);
  }
}

TEST(Oracle, UselessResource) {
  for (double theta : {0.0, 1.0, pi})
    EXPECT_LE(oracle_teleport(DensityMatrix4::maximally_mixed(), PureQubit(theta, 0.3)).norm(), 1e-15);
}

TEST(Oracle, TransverseEqualsXXCorrelation) {
  for (double p : {0.1, 0.3, 0.5})
    for (double u : {0.0, 0.4}) {
      const auto rho = resource_state(ChannelKind::dephasing, p, u);
      const double xx = (rho.matrix() * tensor(pauli::x(), pauli::x())).trace().real();
      const BlochVector out = oracle_teleport(rho, PureQubit(pi / 2, 0.0));
      EXPECT_NEAR(out.x, xx, 1e-12);
      EXPECT_NEAR(out.x, negativity_dephasing(p, u), 1e-12);
    }
}

TEST(Oracle, TransferMatchesDirectRun) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> th(0.0, pi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  for (ChannelKind kind : kChannels) {
    const auto rho = resource_state(kind, 0.37, 0.61);
    const OracleTransfer transfer(rho);
    for (int i = 0; i < 50; ++i) {
      const PureQubit in(th(rng), ph(rng));
      EXPECT_LE(max_abs_diff(transfer.apply(in.bloch()), oracle_teleport(rho, in)), 1e-13);
    }
  }
}

TEST(Oracle, DephasingScalingLaw) {
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double p = i * 0.05;
      const double u = j * 0.05;
      const double n = negativity_dephasing(p, u);
      const OracleTransfer t(resource_state(ChannelKind::dephasing, p, u));
      EXPECT_LE(t.offset().norm(), 1e-14);
      EXPECT_LE(max_abs_diff(t.linear({1, 0, 0}), BlochVector{n, 0, 0}), 1e-10);
      EXPECT_LE(max_abs_diff(t.linear({0, 1, 0}), BlochVector{0, n, 0}), 1e-10);
      EXPECT_LE(max_abs_diff(t.linear({0, 0, 1}), BlochVector{0, 0, 1}), 1e-10);
    }
}

TEST(Oracle, DampingTransverseMatchesClosedForm) {
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double p = i * 0.05;
      const double u = j * 0.05;
      const OracleTransfer t(resource_state(ChannelKind::amplitude_damping, p, u));
      const double k = ad_profile(p, u).transverse;
      EXPECT_NEAR(t.linear({1, 0, 0}).x, k, 1e-12);
      EXPECT_NEAR(t.linear({0, 1, 0}).y, k, 1e-12);
      EXPECT_LE(t.offset().norm(), 1e-14);
      // longitudinal: closed form sits exactly p below the circuit value
      const double zz = t.linear({0, 0, 1}).z;
      for (double theta : {0.0, 0.9, 2.1, pi}) {
        const auto a = InputAngles::of(theta, 0.0);
        const double closed = detail::closed_form_transmission(ad_profile(p, u), a).value.z;
        EXPECT_NEAR(closed - zz * std::cos(theta), -p, 1e-12);
      }
    }
}

TEST(Backends, SwapSymmetry) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_settings(rng);
    for (Backend b : kBackends)
      for (ChannelKind kind : kChannels) {
        const TeleportModel m(b, kind, 0.2, 0.5);
        EXPECT_EQ(m.teleport(swapped(s), Direction::a_to_b).bloch, m.teleport(s, Direction::b_to_a).bloch);
        EXPECT_EQ(m.teleport(swapped(s), Direction::b_to_a).bloch, m.teleport(s, Direction::a_to_b).bloch);
      }
  }
}

TEST(Backends, AgreeForNoiselessResource) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_settings(rng);
    for (ChannelKind kind : kChannels)
      for (Direction d : kDirections)
        EXPECT_LE(max_abs_diff(teleport(Backend::closed_form, kind, s, d, 0.0, 0.3).bloch,
                               teleport(Backend::oracle, kind, s, d, 0.0, 0.3).bloch),
                  1e-12);
  }
}

TEST(Backends, IdealIdentityWithSharpWeights) {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> th(0.0, pi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  for (int i = 0; i < 200; ++i) {
    const PureQubit in(th(rng), ph(rng));
    const auto a = InputAngles::of(in.theta(), in.phi());
    for (Backend b : kBackends)
      for (ChannelKind kind : kChannels) {
        const TeleportModel m(b, kind, 0.0, 0.5);
        const auto out = teleport_output(Direction::a_to_b, 1.0, 0.0, m.transmitted(a).value, m.residual());
        EXPECT_LE(max_abs_diff(out.bloch, in.bloch()), 1e-12);
      }
  }
}

TEST(Backends, PhaseWrapInvariance) {
  std::mt19937_64 rng(28);
  for (int i = 0; i < 50; ++i) {
    auto s = random_settings(rng);
    auto t = s;
    t.alice_state = PureQubit(s.alice_state.theta(), s.alice_state.phi() + 2.0 * pi);
    t.bob_state = PureQubit(s.bob_state.theta(), s.bob_state.phi() - 2.0 * pi);
    for (Backend b : kBackends)
      for (Direction d : kDirections) {
        const TeleportModel m(b, ChannelKind::dephasing, 0.3, 0.2);
        EXPECT_LE(max_abs_diff(m.teleport(s, d).bloch, m.teleport(t, d).bloch), 1e-14);
      }
  }
}

TEST(Backends, OutputsStayInBall) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto s = random_settings(rng);
    const double p = unit(rng);
    const double u = unit(rng);
    for (ChannelKind kind : kChannels)
      for (Direction d : kDirections) EXPECT_LE(teleport(Backend::oracle, kind, s, d, p, u).bloch.norm(), 1.0 + 1e-12);
    for (Direction d : kDirections)
      EXPECT_LE(teleport(Backend::closed_form, ChannelKind::dephasing, s, d, p, u).bloch.norm(), 1.0 + 1e-12);
  }
}

TEST(Backends, JetDerivativeMatchesDifference) {
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> th(0.1, pi - 0.1);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  for (int i = 0; i < 50; ++i) {
    const double theta = th(rng), phi = ph(rng), tt = th(rng);
    for (Backend b : kBackends)
      for (ChannelKind kind : kChannels) {
        const TeleportModel m(b, kind, 0.25, 0.5);
        const double h = 1e-6;
        const BlochVector fd =
            (1.0 / (2.0 * h)) * (m.output(theta + h, phi, tt, 0.3).value - m.output(theta - h, phi, tt, 0.3).value);
        EXPECT_LE(max_abs_diff(m.output(theta, phi, tt, 0.3).d_theta, fd), 1e-8);
      }
  }
}

}  // namespace
}  // namespace bqt
