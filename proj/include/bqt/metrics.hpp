#pragma once

// Figures of merit for the teleported states: negativity of the resource,
// pointwise and sphere-averaged fidelity, and quantum Fisher information of
// the sender's polar angle.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bqt/errors.hpp"
#include "bqt/negativity.hpp"
#include "bqt/quadrature.hpp"
#include "bqt/teleport.hpp"
#include "bqt/tolerances.hpp"

namespace bqt {

/// <S|rho_out|S> = (1 + n_in . v_out) / 2
inline double fidelity(const PureQubit& input, const BlochVector& out) {
  return clamp_probability(0.5 * (1.0 + input.bloch().dot(out)), "fidelity");
}

/// The closed-form teleportation-fidelity formulas, evaluated as written. For
/// dephasing this coincides with fidelity() on the closed-form output; the
/// amplitude-damping formula is not bounded by 1 and is not used elsewhere.
inline double fidelity_closed(ChannelKind kind, const ProtocolSettings& s, Direction dir, double p, double u) {
  const Roles r = roles(s, dir);
  const double w = measurement_probability(r.sender, r.sender_trigger) *
                   (1.0 - measurement_probability(r.receiver, r.receiver_trigger));
  const double theta = r.sender.theta();
  const double s2 = std::sin(theta) * std::sin(theta);
  if (kind == ChannelKind::dephasing) {
    const double n = negativity_dephasing(p, u);
    return -0.5 * w * (1.0 - std::sqrt(n)) * s2 + 0.5 * (1.0 + w);
  }
  const double n = negativity_ad(p, u);
  const double root = std::sqrt(1.0 - p);
  const double chi = n - (1.0 - u) * (2.0 * p * p - 2.0 * p);
  const double delta = n + u * (1.0 - p - root);
  const double eta = n + (u + 2.0 * p - u * root);
  const double c2 = std::cos(theta / 2.0) * std::cos(theta / 2.0);
  const double h2 = std::sin(theta / 2.0) * std::sin(theta / 2.0);
  return w * (chi * s2 + delta * c2 * c2 + eta * h2 * h2) + 0.5 * (1.0 - w) * (1.0 + p * std::cos(theta));
}

inline constexpr std::size_t default_quadrature_nodes = 64;

namespace detail {

/// n x n product rule on the unit sphere: Gauss-Legendre in cos(theta),
/// uniform in phi. Weights include the 1/(4 pi) normalization.
struct SphereGrid {
  std::vector<InputAngles> points;
  std::vector<double> weights;
};

inline SphereGrid make_sphere_grid(std::size_t n) {
  const QuadratureRule gl = gauss_legendre(n);
  const double dphi = 2.0 * pi / static_cast<double>(n);
  SphereGrid g;
  g.points.reserve(n * n);
  g.weights.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = std::acos(gl.nodes[i]);
    for (std::size_t j = 0; j < n; ++j) {
      g.points.push_back(InputAngles::of(theta, dphi * static_cast<double>(j)));
      g.weights.push_back(gl.weights[i] * dphi / (4.0 * pi));
    }
  }
  return g;
}

inline const SphereGrid& sphere_grid(std::size_t n) {
  thread_local std::map<std::size_t, SphereGrid> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_sphere_grid(n)).first;
  return it->second;
}

}  // namespace detail

/// Mean of f over the unit sphere with the n x n product rule.
template <class F>
double sphere_average(std::size_t n, F&& f) {
  const detail::SphereGrid& grid = detail::sphere_grid(n);
  double total = 0.0;
  for (std::size_t k = 0; k < grid.points.size(); ++k) total += grid.weights[k] * f(grid.points[k]);
  return total;
}

/// sphere_average at n nodes, rejected if 2n nodes move it by more than
/// tol::quadrature_doubling.
template <class F>
double checked_sphere_average(std::size_t n, F&& f) {
  if (n < 8) throw RangeError("sphere average needs at least 8 quadrature nodes");
  const double coarse = sphere_average(n, f);
  const double fine = sphere_average(2 * n, f);
  if (std::abs(fine - coarse) > tol::quadrature_doubling)
    throw QuadratureTooCoarse("doubling " + std::to_string(n) + " nodes moved the average by " +
                              std::to_string(std::abs(fine - coarse)));
  return coarse;
}

/// Fidelity averaged over the sender's input sphere. The sender's firing
/// probability follows each input; the receiver's is held at its configured
/// value. The result at `nodes` is cross-checked against 2 * nodes.
inline double average_fidelity(const TeleportModel& model, const ProtocolSettings& s, Direction dir,
                               std::size_t nodes = default_quadrature_nodes) {
  const Roles r = roles(s, dir);
  const double m_recv = measurement_probability(r.receiver, r.receiver_trigger);
  const double ct = std::cos(r.sender_trigger.theta_tilde());
  const double st = std::sin(r.sender_trigger.theta_tilde());
  const double avg = checked_sphere_average(nodes, [&](const InputAngles& a) {
    const BlochVector v = model.output(a, ct, st, m_recv).value;
    check_in_ball(v);
    return 0.5 * (1.0 + a.direction().dot(v));
  });
  return clamp_probability(avg, "average fidelity");
}

inline double average_fidelity(Backend backend, ChannelKind kind, const ProtocolSettings& s, Direction dir, double p,
                               double u, std::size_t nodes = default_quadrature_nodes) {
  return average_fidelity(TeleportModel(backend, kind, p, u), s, dir, nodes);
}

struct FidelityReport {
  Direction direction;
  double pointwise;
  double averaged;
  std::size_t quadrature_nodes;
};

inline FidelityReport fidelity_report(const TeleportModel& model, const ProtocolSettings& s, Direction dir,
                                      std::size_t nodes = default_quadrature_nodes) {
  const Roles r = roles(s, dir);
  return {dir, fidelity(r.sender, model.teleport(s, dir).bloch), average_fidelity(model, s, dir, nodes), nodes};
}

// ---------------------------------------------------------------------------
// Quantum Fisher information

enum class QfiParameter { theta_a, theta_b };
enum class DerivativeMethod { analytic, finite_difference };

struct QfiReport {
  QfiParameter parameter;
  double value;
  DerivativeMethod derivative_method;
};

/// J = |dv|^2 + (v . dv)^2 / (1 - |v|^2), or |dv|^2 on the pure-state
/// surface. Near |v| = 1 the radial derivative must vanish.
inline double qfi_from_bloch(const BlochVector& v, const BlochVector& dv) {
  const double gap = 1.0 - v.norm_sq();
  const double radial = v.dot(dv);
  if (gap < tol::qfi_pure) {
    if (std::abs(radial) < tol::qfi_pure) return dv.norm_sq();
    throw SingularBloch("|v| -> 1 with radial derivative " + std::to_string(radial));
  }
  return dv.norm_sq() + radial * radial / gap;
}

inline QfiParameter qfi_parameter(Direction dir) {
  return dir == Direction::a_to_b ? QfiParameter::theta_a : QfiParameter::theta_b;
}

inline QfiReport qfi_theta(const TeleportModel& model, const ProtocolSettings& s, Direction dir) {
  const BlochJet j = model.jet(s, dir);
  return {qfi_parameter(dir), qfi_from_bloch(j.value, j.d_theta), DerivativeMethod::analytic};
}

inline QfiReport qfi_theta(Backend backend, ChannelKind kind, const ProtocolSettings& s, Direction dir, double p,
                           double u) {
  return qfi_theta(TeleportModel(backend, kind, p, u), s, dir);
}

/// Same quantity with a central difference of step `h` in the sender's angle.
inline QfiReport qfi_theta_finite_difference(const TeleportModel& model, const ProtocolSettings& s, Direction dir,
                                             double h = 1e-5) {
  const Roles r = roles(s, dir);
  const double m_recv = measurement_probability(r.receiver, r.receiver_trigger);
  const double theta = r.sender.theta();
  const double phi = r.sender.phi();
  const double tt = r.sender_trigger.theta_tilde();
  const BlochVector v = model.output(theta, phi, tt, m_recv).value;
  const BlochVector plus = model.output(theta + h, phi, tt, m_recv).value;
  const BlochVector minus = model.output(theta - h, phi, tt, m_recv).value;
  const BlochVector dv = (1.0 / (2.0 * h)) * (plus - minus);
  return {qfi_parameter(dir), qfi_from_bloch(v, dv), DerivativeMethod::finite_difference};
}

}  // namespace bqt
