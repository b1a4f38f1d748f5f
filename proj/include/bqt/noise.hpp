#pragma once

// Two-use correlated noise channels and their time-dependent decoherence
// factors.
//
// A correlated channel mixes an uncorrelated Kraus family (independent action
// on each use) with a correlated family (identical action on both uses):
//
//   X(rho) = (1 - u) sum K^I rho K^I^dag + u sum K^c rho K^c^dag,
//
// with memory strength u in [0, 1].

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bqt/errors.hpp"
#include "bqt/qmath.hpp"
#include "bqt/tolerances.hpp"

namespace bqt {

enum class ChannelKind { dephasing, amplitude_damping };

inline std::string_view to_string(ChannelKind k) {
  return k == ChannelKind::dephasing ? "dephasing" : "amplitude_damping";
}

inline void check_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw RangeError(std::string(name) + " = " + std::to_string(v) + " outside [0, 1]");
}

/// Clamps values within tol::probability_clamp of [0, 1]; anything further
/// out is a model error.
inline double clamp_probability(double p, const char* what) {
  if (p < -tol::probability_clamp || p > 1.0 + tol::probability_clamp || std::isnan(p))
    throw RangeError(std::string(what) + " = " + std::to_string(p) + " left [0, 1]");
  return std::clamp(p, 0.0, 1.0);
}

struct CorrelatedChannel {
  ChannelKind kind;
  std::vector<WeightedOp<4>> uncorrelated;
  std::vector<WeightedOp<4>> correlated;
  double memory_u;
  double p;
};

inline void check_channel(const CorrelatedChannel& ch) {
  check_unit_interval(ch.memory_u, "u");
  check_unit_interval(ch.p, "p");
  check_completeness<4>(ch.uncorrelated);
  check_completeness<4>(ch.correlated);
}

/// Phase flip with probability p on each use; the correlated family flips
/// both qubits together.
inline CorrelatedChannel dephasing_channel(double p, double u) {
  check_unit_interval(p, "p");
  check_unit_interval(u, "u");
  const Matrix2 i = pauli::id();
  const Matrix2 z = pauli::z();
  const double q0 = 1.0 - p;
  const double q1 = p;
  return {ChannelKind::dephasing,
          {{q0 * q0, tensor(i, i)}, {q0 * q1, tensor(i, z)}, {q1 * q0, tensor(z, i)}, {q1 * q1, tensor(z, z)}},
          {{q0, tensor(i, i)}, {q1, tensor(z, z)}},
          u,
          p};
}

/// Single-qubit amplitude damping Kraus pair {K0, K1}.
inline std::array<Matrix2, 2> amplitude_damping_kraus(double p) {
  check_unit_interval(p, "p");
  return {Matrix2{1.0, 0.0, 0.0, std::sqrt(1.0 - p)}, Matrix2{0.0, std::sqrt(p), 0.0, 0.0}};
}

inline CorrelatedChannel amplitude_damping_channel(double p, double u) {
  check_unit_interval(p, "p");
  check_unit_interval(u, "u");
  const auto k = amplitude_damping_kraus(p);
  CorrelatedChannel ch{ChannelKind::amplitude_damping, {}, {}, u, p};
  for (const auto& a : k)
    for (const auto& b : k) ch.uncorrelated.push_back({1.0, tensor(a, b)});
  // |00><00| + |01><01| + |10><10| + sqrt(1-p)|11><11|  and  sqrt(p)|00><11|
  ch.correlated.push_back({1.0, Matrix4::diagonal({1.0, 1.0, 1.0, std::sqrt(1.0 - p)})});
  Matrix4 decay;
  decay(0, 3) = std::sqrt(p);
  ch.correlated.push_back({1.0, decay});
  return ch;
}

inline CorrelatedChannel make_channel(ChannelKind kind, double p, double u) {
  return kind == ChannelKind::dephasing ? dephasing_channel(p, u) : amplitude_damping_channel(p, u);
}

inline DensityMatrix4 apply_correlated(const CorrelatedChannel& ch, const DensityMatrix4& rho) {
  check_channel(ch);
  const Matrix4 out = (1.0 - ch.memory_u) * kraus_sum<4>(rho.matrix(), ch.uncorrelated) +
                      ch.memory_u * kraus_sum<4>(rho.matrix(), ch.correlated);
  return DensityMatrix4::from(out.hermitian_part());
}

// ---------------------------------------------------------------------------
// Time models

/// Random-telegraph (colored) dephasing. tau < 1/4 is Markovian, tau > 1/4
/// oscillates.
class DephasingTimeModel {
 public:
  explicit DephasingTimeModel(double tau) : tau_(tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw RangeError("tau must be positive");
  }
  double tau() const noexcept { return tau_; }
  bool markovian() const noexcept { return tau_ < 0.25; }

  /// Coherence factor gamma(t) = e^{-nu}(cosh(U nu) + sinh(U nu)/U),
  /// nu = t/(2 tau), U = sqrt(1 - 16 tau^2), continued to the real
  /// trigonometric form when U is imaginary.
  double coherence(double t) const {
    if (!(t >= 0.0)) throw RangeError("t must be nonnegative");
    const double nu = t / (2.0 * tau_);
    const double disc = 1.0 - 16.0 * tau_ * tau_;
    if (disc > 0.0) {
      const double u = std::sqrt(disc);
      const double x = u * nu;
      if (x < 1.0) return std::exp(-nu) * (std::cosh(x) + std::sinh(x) / u);
      // e^{-nu} cosh, e^{-nu} sinh split into decaying exponentials
      const double slow = std::exp(-nu * (1.0 - u));
      const double fast = std::exp(-nu * (1.0 + u));
      return 0.5 * (slow + fast) + 0.5 * (slow - fast) / u;
    }
    if (disc < 0.0) {
      const double w = std::sqrt(-disc);
      return std::exp(-nu) * (std::cos(w * nu) + std::sin(w * nu) / w);
    }
    return std::exp(-nu) * (1.0 + nu);
  }

  double p_of_t(double t) const { return clamp_probability(0.5 * (1.0 - coherence(t)), "dephasing p"); }

 private:
  double tau_;
};

inline double dephasing_p_of_t(const DephasingTimeModel& model, double t) { return model.p_of_t(t); }

/// Qubit coupled to a damped cavity mode with Lorentzian spectral width
/// Gamma and coupling gamma. gamma < Gamma/2 is the weak (Markovian) regime.
class ADTimeModel {
 public:
  ADTimeModel(double gamma, double reservoir_width) : gamma_(gamma), width_(reservoir_width) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw RangeError("gamma must be positive");
    if (!(reservoir_width > 0.0) || !std::isfinite(reservoir_width))
      throw RangeError("reservoir width must be positive");
  }
  double gamma() const noexcept { return gamma_; }
  double reservoir_width() const noexcept { return width_; }
  bool markovian() const noexcept { return gamma_ < width_ / 2.0; }

  /// Excited-state amplitude G(t).
  double amplitude(double t) const {
    if (!(t >= 0.0)) throw RangeError("t must be nonnegative");
    const double w = width_;
    const double disc = w * w - 2.0 * gamma_ * w;
    const double half = w * t / 2.0;
    if (disc > 0.0) {
      const double d = std::sqrt(disc);
      const double x = d * t / 2.0;
      if (x < 1.0) return std::exp(-half) * (std::cosh(x) + (w / d) * std::sinh(x));
      const double slow = std::exp(-(w - d) * t / 2.0);
      const double fast = std::exp(-(w + d) * t / 2.0);
      return 0.5 * (1.0 + w / d) * slow + 0.5 * (1.0 - w / d) * fast;
    }
    if (disc < 0.0) {
      const double d = std::sqrt(-disc);
      const double x = d * t / 2.0;
      return std::exp(-half) * (std::cos(x) + (w / d) * std::sin(x));
    }
    return std::exp(-half) * (1.0 + half);
  }

  /// Excited-state population G(t)^2.
  double survival(double t) const {
    const double g = amplitude(t);
    return clamp_probability(g * g, "survival");
  }

  /// Damping probability 1 - G(t)^2.
  double p_of_t(double t) const { return clamp_probability(1.0 - survival(t), "damping p"); }

 private:
  double gamma_;
  double width_;
};

inline double ad_p_of_t(const ADTimeModel& model, double t) { return model.p_of_t(t); }

}  // namespace bqt
