#pragma once

// Bidirectional teleportation of single-qubit states over a noisy Bell pair.
//
// Each party holds a pure input and a trigger qubit. A party fires a sharp
// Bell measurement with probability M = Tr[rho_trigger rho_input]; the state
// travelling sender -> receiver arrives with weight M_send (1 - M_recv) and
// otherwise the receiver is left with a residual state:
//
//   rho_out = M_send (1 - M_recv) rho_transmitted + (1 - M_send (1 - M_recv)) rho_0.
//
// Two backends produce rho_transmitted: closed-form Bloch components for each
// channel, and a brute-force three-qubit circuit simulation.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "bqt/errors.hpp"
#include "bqt/negativity.hpp"
#include "bqt/noise.hpp"
#include "bqt/qmath.hpp"

namespace bqt {

inline constexpr double pi = std::numbers::pi;

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, theta in [0, pi]. The phase
/// is stored modulo 2 pi.
class PureQubit {
 public:
  PureQubit() = default;
  PureQubit(double theta, double phi) : theta_(theta), phi_(std::remainder(phi, 2.0 * pi)) {
    if (!(theta >= 0.0 && theta <= pi)) throw RangeError("theta outside [0, pi]");
    if (!std::isfinite(phi)) throw RangeError("phi must be finite");
    if (phi_ < 0.0) phi_ += 2.0 * pi;
  }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

  BlochVector bloch() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_), std::cos(theta_)};
  }

  Ket<2> ket() const {
    return {cplx(std::cos(theta_ / 2.0), 0.0), std::polar(std::sin(theta_ / 2.0), phi_)};
  }

  friend bool operator==(const PureQubit&, const PureQubit&) = default;

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// cos(theta~/2)|0> + sin(theta~/2)|1>
class TriggerSetting {
 public:
  TriggerSetting() = default;
  explicit TriggerSetting(double theta_tilde) : theta_tilde_(theta_tilde) {
    if (!(theta_tilde >= 0.0 && theta_tilde <= pi)) throw RangeError("trigger angle outside [0, pi]");
  }
  double theta_tilde() const noexcept { return theta_tilde_; }
  friend bool operator==(const TriggerSetting&, const TriggerSetting&) = default;

 private:
  double theta_tilde_ = 0.0;
};

struct ProtocolSettings {
  PureQubit alice_state;
  PureQubit bob_state;
  TriggerSetting alice_trigger;
  TriggerSetting bob_trigger;

  friend bool operator==(const ProtocolSettings&, const ProtocolSettings&) = default;
};

/// Alice and Bob exchange roles.
inline ProtocolSettings swapped(const ProtocolSettings& s) {
  return {s.bob_state, s.alice_state, s.bob_trigger, s.alice_trigger};
}

enum class Direction { a_to_b, b_to_a };

inline std::string_view to_string(Direction d) { return d == Direction::a_to_b ? "A2B" : "B2A"; }

enum class Backend { closed_form, oracle };

inline std::string_view to_string(Backend b) { return b == Backend::closed_form ? "closed-form" : "oracle"; }

struct Roles {
  PureQubit sender;
  TriggerSetting sender_trigger;
  PureQubit receiver;
  TriggerSetting receiver_trigger;
};

inline Roles roles(const ProtocolSettings& s, Direction d) {
  if (d == Direction::a_to_b) return {s.alice_state, s.alice_trigger, s.bob_state, s.bob_trigger};
  return {s.bob_state, s.bob_trigger, s.alice_state, s.alice_trigger};
}

struct TeleportedState {
  Direction direction;
  BlochVector bloch;
  BlochVector residual;
  double weight;
};

/// Value of a Bloch vector together with its derivative in the sender's
/// polar angle.
struct BlochJet {
  BlochVector value;
  BlochVector d_theta;
};

// ---------------------------------------------------------------------------
// Measurement probabilities

namespace detail {

/// |cos(t/2)cos(tt/2) + e^{i phi} sin(t/2)sin(tt/2)|^2 and its t-derivative.
/// The expanded form (1 + cos t cos tt + sin t sin tt cos phi)/2 is used for
/// the derivative.
struct ProbabilityJet {
  double value;
  double d_theta;
};

inline ProbabilityJet measurement_probability(double theta, double phi, double theta_tilde) {
  const cplx amp = std::cos(theta / 2.0) * std::cos(theta_tilde / 2.0) +
                   std::polar(1.0, phi) * std::sin(theta / 2.0) * std::sin(theta_tilde / 2.0);
  const double d =
      0.5 * (-std::sin(theta) * std::cos(theta_tilde) + std::cos(theta) * std::sin(theta_tilde) * std::cos(phi));
  return {std::clamp(std::norm(amp), 0.0, 1.0), d};
}

}  // namespace detail

inline double measurement_probability(const PureQubit& state, const TriggerSetting& trigger) {
  return detail::measurement_probability(state.theta(), state.phi(), trigger.theta_tilde()).value;
}

// ---------------------------------------------------------------------------
// Resource and residual states

inline DensityMatrix4 resource_state(ChannelKind kind, double p, double u) {
  return apply_correlated(make_channel(kind, p, u), bell_phi_plus());
}

/// Output delivered when the teleportation does not go through: the channel's
/// single-qubit action on the maximally mixed state.
inline BlochVector residual_state(ChannelKind kind, double p, double u) {
  check_unit_interval(p, "p");
  check_unit_interval(u, "u");
  if (kind == ChannelKind::dephasing) return {};
  return {0.0, 0.0, p};
}

// ---------------------------------------------------------------------------
// Convex output law

inline TeleportedState teleport_output(Direction dir, double m_send, double m_recv, const BlochVector& transmitted,
                                       const BlochVector& residual) {
  check_unit_interval(m_send, "M_send");
  check_unit_interval(m_recv, "M_recv");
  const double w = m_send * (1.0 - m_recv);
  return {dir, w * transmitted + (1.0 - w) * residual, residual, w};
}

/// Noiseless transmission of `input`.
inline TeleportedState teleport_output(Direction dir, double m_send, double m_recv, const PureQubit& input,
                                       const BlochVector& residual) {
  return teleport_output(dir, m_send, m_recv, input.bloch(), residual);
}

// ---------------------------------------------------------------------------
// Circuit oracle

namespace detail {

/// Standard teleportation of the single-qubit operator `x` through
/// `resource`, as an explicit three-qubit computation: qubit 0 carries x,
/// qubits 1 (sender half) and 2 (receiver half) the resource. Each of the four
/// Bell projections on qubits 0,1 is followed by its Pauli correction on
/// qubit 2 (Phi+ -> I, Psi+ -> X, Phi- -> Z, Psi- -> XZ) and the corrected
/// branches are summed. Linear in x.
inline Matrix2 teleport_map(const Matrix4& resource, const Matrix2& x) {
  const Matrix8 joint = tensor(x, resource);
  const double r = 1.0 / std::sqrt(2.0);
  const std::array<Ket<4>, 4> bell = {Ket<4>{r, 0.0, 0.0, r}, Ket<4>{0.0, r, r, 0.0}, Ket<4>{r, 0.0, 0.0, -r},
                                      Ket<4>{0.0, r, -r, 0.0}};
  const std::array<Matrix2, 4> correction = {pauli::id(), pauli::x(), pauli::z(), pauli::x() * pauli::z()};

  Matrix2 out;
  for (std::size_t k = 0; k < 4; ++k) {
    const Matrix8 proj = tensor(projector(bell[k]), pauli::id());
    const Matrix8 branch = proj * joint * proj;
    Matrix2 bob;
    for (std::size_t m = 0; m < 4; ++m)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) bob(i, j) += branch(2 * m + i, 2 * m + j);
    out += correction[k] * bob * correction[k].adjoint();
  }
  return out;
}

}  // namespace detail

/// Bloch vector received through `resource` by brute-force simulation of the
/// sharp-measurement teleportation circuit.
inline BlochVector oracle_teleport(const DensityMatrix4& resource, const PureQubit& input) {
  const Matrix2 out = detail::teleport_map(resource.matrix(), projector(input.ket()));
  return bloch_from_density(DensityMatrix2::from(out.hermitian_part()));
}

/// The oracle channel tabulated as an affine map on Bloch vectors,
/// v = offset + T n, by running the circuit on I/2 and sigma_k/2.
class OracleTransfer {
 public:
  explicit OracleTransfer(const DensityMatrix4& resource) {
    offset_ = pauli_components(detail::teleport_map(resource.matrix(), operator_from_components(1.0, {})));
    const std::array<BlochVector, 3> basis = {BlochVector{1, 0, 0}, BlochVector{0, 1, 0}, BlochVector{0, 0, 1}};
    for (std::size_t j = 0; j < 3; ++j)
      columns_[j] = pauli_components(detail::teleport_map(resource.matrix(), operator_from_components(0.0, basis[j])));
  }

  const BlochVector& offset() const noexcept { return offset_; }

  /// T applied to a direction; no offset.
  BlochVector linear(const BlochVector& n) const {
    return n.x * columns_[0] + n.y * columns_[1] + n.z * columns_[2];
  }

  BlochVector apply(const BlochVector& n) const { return offset_ + linear(n); }

 private:
  BlochVector offset_;
  std::array<BlochVector, 3> columns_;
};

// ---------------------------------------------------------------------------
// Closed forms
//
// The sharp-measurement output for input angles (theta, phi) has the shape
//   (k sin(theta) cos(phi), k sin(theta) sin(phi), A cos^2(theta/2) + B sin^2(theta/2))
// with channel-dependent coefficients.

struct ClosedFormProfile {
  double transverse;
  double a;
  double b;
};

/// Dephasing: transverse sqrt(N), longitudinal unchanged.
inline ClosedFormProfile dephasing_profile(double n) {
  check_unit_interval(n, "N");
  return {std::sqrt(n), 1.0, -1.0};
}

/// Amplitude damping: transverse N - (1-u)(p^2 - p),
/// A = (1-p)(1-2p+2up), B = (1-u)(p-2p^2-1) - u(1+p).
inline ClosedFormProfile ad_profile(double p, double u) {
  const double n = negativity_ad(p, u);
  return {n - (1.0 - u) * (p * p - p), (1.0 - p) * (1.0 - 2.0 * p + 2.0 * u * p),
          (1.0 - u) * (p - 2.0 * p * p - 1.0) - u * (1.0 + p)};
}

/// Trigonometric values of a pure input's angles.
struct InputAngles {
  double sin_t;
  double cos_t;
  double cos_half_sq;
  double sin_half_sq;
  double cos_p;
  double sin_p;

  static InputAngles of(double theta, double phi) {
    const double ch = std::cos(theta / 2.0);
    const double sh = std::sin(theta / 2.0);
    return {std::sin(theta), std::cos(theta), ch * ch, sh * sh, std::cos(phi), std::sin(phi)};
  }

  BlochVector direction() const { return {sin_t * cos_p, sin_t * sin_p, cos_t}; }
  BlochVector d_direction() const { return {cos_t * cos_p, cos_t * sin_p, -sin_t}; }
};

namespace detail {

inline BlochJet closed_form_transmission(const ClosedFormProfile& c, const InputAngles& a) {
  return {{c.transverse * a.sin_t * a.cos_p, c.transverse * a.sin_t * a.sin_p,
           c.a * a.cos_half_sq + c.b * a.sin_half_sq},
          {c.transverse * a.cos_t * a.cos_p, c.transverse * a.cos_t * a.sin_p, 0.5 * (c.b - c.a) * a.sin_t}};
}

/// (1 + cos t cos tt + sin t sin tt cos phi) / 2 and its t-derivative.
inline ProbabilityJet measurement_probability(const InputAngles& a, double cos_tt, double sin_tt) {
  return {std::clamp(0.5 * (1.0 + a.cos_t * cos_tt + a.sin_t * sin_tt * a.cos_p), 0.0, 1.0),
          0.5 * (-a.sin_t * cos_tt + a.cos_t * sin_tt * a.cos_p)};
}

}  // namespace detail

/// Evaluates one (backend, channel, p, u) point for any inputs. Reusable
/// across many input angles.
class TeleportModel {
 public:
  TeleportModel(Backend backend, ChannelKind kind, double p, double u)
      : backend_(backend), kind_(kind), p_(p), u_(u), residual_(residual_state(kind, p, u)) {
    if (backend == Backend::oracle) {
      transfer_.emplace(resource_state(kind, p, u));
    } else {
      profile_ = kind == ChannelKind::dephasing ? dephasing_profile(negativity_dephasing(p, u)) : ad_profile(p, u);
    }
  }

  Backend backend() const noexcept { return backend_; }
  ChannelKind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  double u() const noexcept { return u_; }
  const BlochVector& residual() const noexcept { return residual_; }

  /// Sharp-measurement output for a pure input, with its theta-derivative.
  BlochJet transmitted(const InputAngles& a) const {
    if (backend_ == Backend::closed_form) return detail::closed_form_transmission(profile_, a);
    return {transfer_->apply(a.direction()), transfer_->linear(a.d_direction())};
  }

  /// Receiver's Bloch vector for a sender input `a` with trigger angle
  /// `sender_trigger`, the receiver firing with probability `m_recv`.
  BlochJet output(const InputAngles& a, double sender_trigger, double m_recv) const {
    return output(a, std::cos(sender_trigger), std::sin(sender_trigger), m_recv);
  }

  BlochJet output(const InputAngles& a, double cos_trigger, double sin_trigger, double m_recv) const {
    const auto m = detail::measurement_probability(a, cos_trigger, sin_trigger);
    const double keep = 1.0 - m_recv;
    const double w = m.value * keep;
    const double dw = m.d_theta * keep;
    const BlochJet t = transmitted(a);
    return {w * t.value + (1.0 - w) * residual_, dw * (t.value - residual_) + w * t.d_theta};
  }

  /// Raw angles; theta is not range-checked, which finite differences need.
  BlochJet output(double theta, double phi, double sender_trigger, double m_recv) const {
    return output(InputAngles::of(theta, phi), sender_trigger, m_recv);
  }

  TeleportedState teleport(const ProtocolSettings& s, Direction dir) const {
    const Roles r = roles(s, dir);
    const double m_send = measurement_probability(r.sender, r.sender_trigger);
    const double m_recv = measurement_probability(r.receiver, r.receiver_trigger);
    const BlochVector t = transmitted(InputAngles::of(r.sender.theta(), r.sender.phi())).value;
    TeleportedState out = teleport_output(dir, m_send, m_recv, t, residual_);
    check_in_ball(out.bloch);
    return out;
  }

  BlochJet jet(const ProtocolSettings& s, Direction dir) const {
    const Roles r = roles(s, dir);
    const double m_recv = measurement_probability(r.receiver, r.receiver_trigger);
    BlochJet j = output(r.sender.theta(), r.sender.phi(), r.sender_trigger.theta_tilde(), m_recv);
    check_in_ball(j.value);
    return j;
  }

 private:
  Backend backend_;
  ChannelKind kind_;
  double p_;
  double u_;
  BlochVector residual_;
  ClosedFormProfile profile_{};
  std::optional<OracleTransfer> transfer_;
};

inline TeleportedState teleported_bloch_dephasing(const ProtocolSettings& s, Direction dir, double n) {
  const Roles r = roles(s, dir);
  const BlochVector t =
      detail::closed_form_transmission(dephasing_profile(n), InputAngles::of(r.sender.theta(), r.sender.phi())).value;
  TeleportedState out = teleport_output(dir, measurement_probability(r.sender, r.sender_trigger),
                                        measurement_probability(r.receiver, r.receiver_trigger), t, BlochVector{});
  check_in_ball(out.bloch);
  return out;
}

inline TeleportedState teleported_bloch_ad(const ProtocolSettings& s, Direction dir, double p, double u) {
  return TeleportModel(Backend::closed_form, ChannelKind::amplitude_damping, p, u).teleport(s, dir);
}

inline TeleportedState teleport(Backend backend, ChannelKind kind, const ProtocolSettings& s, Direction dir, double p,
                                double u) {
  return TeleportModel(backend, kind, p, u).teleport(s, dir);
}

}  // namespace bqt
