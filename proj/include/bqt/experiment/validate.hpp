#pragma once

// End-to-end checks of the simulator against closed forms, the circuit
// oracle and the expected asymptotes. Shared by `bqt-sim validate` and the
// acceptance test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bqt/experiment/output.hpp"
#include "bqt/experiment/presets.hpp"
#include "bqt/experiment/sweep.hpp"
#include "bqt/metrics.hpp"
#include "bqt/negativity.hpp"
#include "bqt/noise.hpp"
#include "bqt/teleport.hpp"

namespace bqt::experiment {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

namespace detail {

inline std::string g(double v) { return fmt("%.6g", v); }

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Peak {
  double t;
  double value;
};

/// Golden-section refinement of a maximum bracketed by [a, b].
inline Peak refine_max(const std::function<double(double)>& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-12; ++i) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a), fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, f(t)};
}

/// Interior local maxima of f on [a, b], located on a grid of spacing `step`
/// and refined.
inline std::vector<Peak> local_maxima(const std::function<double(double)>& f, double a, double b, double step) {
  std::vector<Peak> peaks;
  const auto n = static_cast<std::size_t>((b - a) / step);
  double prev = f(a), cur = f(a + step);
  for (std::size_t i = 2; i <= n; ++i) {
    const double t = a + step * static_cast<double>(i);
    const double next = f(t);
    if (cur > prev && cur >= next) peaks.push_back(refine_max(f, t - 2.0 * step, t));
    prev = cur;
    cur = next;
  }
  return peaks;
}

inline ProtocolSettings figure_settings() { return preset("fig3").settings; }

}  // namespace detail

inline CheckResult check_negativity_agreement() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j)
      for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::amplitude_damping}) {
        const double p = i / 100.0, u = j / 100.0;
        worst = std::max(worst, std::abs(negativity(resource_state(kind, p, u)) - negativity_closed(kind, p, u)));
      }
  const double secs = detail::seconds_since(start);
  return {"spectral vs closed-form negativity, 101x101 grid", worst <= 1e-10 && secs < 5.0,
          "max error " + detail::g(worst) + ", " + detail::g(secs) + " s"};
}

inline CheckResult check_cptp() {
  double completeness = 0.0;
  double min_eig = 1.0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j)
      for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::amplitude_damping}) {
        const double p = i / 100.0, u = j / 100.0;
        const CorrelatedChannel ch = make_channel(kind, p, u);
        completeness = std::max({completeness, completeness_error<4>(ch.uncorrelated), completeness_error<4>(ch.correlated)});
        min_eig = std::min(min_eig, hermitian_eigenvalues(resource_state(kind, p, u).matrix())[0]);
      }
  return {"Kraus completeness and resource positivity", completeness <= 1e-12 && min_eig >= -1e-10,
          "max completeness error " + detail::g(completeness) + ", min eigenvalue " + detail::g(min_eig)};
}

inline CheckResult check_ideal_identity() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> th(0.0, pi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PureQubit in(th(rng), ph(rng));
    const InputAngles a = InputAngles::of(in.theta(), in.phi());
    for (Backend b : {Backend::closed_form, Backend::oracle})
      for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::amplitude_damping}) {
        const TeleportModel m(b, kind, 0.0, 0.0);
        for (Direction d : {Direction::a_to_b, Direction::b_to_a}) {
          const auto out = teleport_output(d, 1.0, 0.0, m.transmitted(a).value, m.residual());
          worst = std::max(worst, max_abs_diff(out.bloch, in.bloch()));
        }
      }
  }
  return {"ideal protocol reproduces the input", worst <= 1e-12, "max Bloch error " + detail::g(worst)};
}

inline CheckResult check_oracle_scaling() {
  double transverse = 0.0, longitudinal = 0.0, offset = 0.0;
  double ratio_min = 1e300, ratio_max = 0.0;
  int singular = 0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double p = i * 0.05, u = j * 0.05;
      const double n = negativity_dephasing(p, u);
      const OracleTransfer t(resource_state(ChannelKind::dephasing, p, u));
      transverse = std::max({transverse, std::abs(t.linear({1, 0, 0}).x - n), std::abs(t.linear({0, 1, 0}).y - n)});
      longitudinal = std::max(longitudinal, std::abs(t.linear({0, 0, 1}).z - 1.0));
      offset = std::max(offset, t.offset().norm());
      if (n > 1e-12) {
        const double ratio = std::sqrt(n) / n;
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
      } else {
        ++singular;
      }
    }
  return {"circuit scaling law for dephasing",
          transverse <= 1e-10 && longitudinal <= 1e-10 && offset <= 1e-10,
          "transverse error " + detail::g(transverse) + ", longitudinal error " + detail::g(longitudinal) +
              "; closed-form/circuit transverse ratio in [" + detail::g(ratio_min) + ", " + detail::g(ratio_max) +
              "], undefined at " + std::to_string(singular) + " points with N = 0"};
}

inline CheckResult check_dephasing_asymptotes() {
  bool ok = true;
  std::string detail;
  for (Backend b : {Backend::closed_form, Backend::oracle}) {
    SweepSpec spec = preset("fig3");
    spec.backend = b;
    const ResultTable table = run_sweep(spec);
    const std::size_t nc = table.column("negativity");
    const std::vector<std::size_t> monotone = {nc, table.column("fidelity_avg_A2B"), table.column("fidelity_avg_B2A"),
                                               table.column("qfi_thetaA"), table.column("qfi_thetaB")};
    double worst_tail = 0.0;
    double worst_rise = 0.0;
    const std::size_t nt = spec.t_grid.steps;
    for (std::size_t k = 0; k < spec.u_values.size(); ++k) {
      const auto& last = table.rows[(k + 1) * nt - 1];
      worst_tail = std::max(worst_tail, std::abs(last[nc] - last[1]));
      for (std::size_t i = k * nt + 1; i < (k + 1) * nt; ++i)
        for (std::size_t c : monotone) worst_rise = std::max(worst_rise, table.rows[i][c] - table.rows[i - 1][c]);
    }
    ok = ok && worst_tail <= 0.01 && worst_rise <= 1e-10;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(b)) + ": |N(50) - u| <= " +
              detail::g(worst_tail) + ", largest rise " + detail::g(worst_rise);
  }
  return {"Markovian dephasing asymptote and monotone decay", ok, detail};
}

inline CheckResult check_nonmarkovian_dephasing() {
  const DephasingTimeModel model(7.0);
  const auto n_of_t = [&](double t) { return negativity_dephasing(model.p_of_t(t), 0.0); };
  bool ok = true;
  std::string detail;
  double prev_height = 2.0;
  for (int n = 1; n <= 5; ++n) {
    const auto peaks = detail::local_maxima(n_of_t, n * pi - 0.3, n * pi + 0.3, 1e-3);
    if (peaks.empty()) {
      ok = false;
      detail += " n=" + std::to_string(n) + ": no maximum;";
      continue;
    }
    const detail::Peak pk = peaks.front();
    ok = ok && std::abs(pk.t - n * pi) <= 0.05 && pk.value < prev_height;
    prev_height = pk.value;
    detail += " t=" + detail::g(pk.t) + " (N=" + detail::g(pk.value) + ")";
  }
  return {"non-Markovian dephasing maxima near n pi", ok, "maxima at" + detail};
}

inline CheckResult check_damping_limits() {
  const ADTimeModel model(1.0, 5.0);
  const double p0 = model.p_of_t(0.0);
  const double n0 = negativity_ad(p0, 0.0);
  const double p_inf = model.p_of_t(100.0);
  const double n_inf = negativity_ad(p_inf, 0.0);
  const bool limits = p0 == 0.0 && n0 == 1.0 && n_inf <= 1e-3 && p_inf >= 1.0 - 1e-3;

  const SweepSpec spec = preset("fig7");
  const double f_inf = average_fidelity(TeleportModel(spec.backend, spec.channel, p_inf, 0.0), spec.settings,
                                        Direction::a_to_b, spec.nodes);
  const double f_oracle = average_fidelity(TeleportModel(Backend::oracle, spec.channel, p_inf, 0.0), spec.settings,
                                           Direction::a_to_b, spec.nodes);
  const bool frozen = f_inf >= 0.29 && f_inf <= 0.39;
  return {"amplitude-damping limits and fidelity freeze", limits && frozen,
          "p(0)=" + detail::g(p0) + " N(0)=" + detail::g(n0) + " p(100)=" + detail::g(p_inf) +
              " N(100)=" + detail::g(n_inf) + (limits ? " [ok]" : " [FAIL]") + "; F_avg(100) " +
              std::string(to_string(spec.backend)) + " " + detail::g(f_inf) + ", oracle " + detail::g(f_oracle) +
              " vs [0.29, 0.39]" + (frozen ? " [ok]" : " [FAIL]")};
}

inline CheckResult check_damping_revivals() {
  const double width = 0.1;
  const ADTimeModel model(1.0, width);
  const double period = 2.0 * pi / std::sqrt(2.0 * width - width * width);
  const auto n_of_t = [&](double t) { return negativity_ad(model.p_of_t(t), 0.0); };
  const auto peaks = detail::local_maxima(n_of_t, 0.0, 4.5 * period, 1e-3);
  bool ok = peaks.size() >= 3;
  double worst_gap = 0.0;
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    ok = ok && peaks[i].value < peaks[i - 1].value;
    worst_gap = std::max(worst_gap, std::abs((peaks[i].t - peaks[i - 1].t) / period - 1.0));
  }
  // the first revival sits one period after the t = 0 maximum
  if (!peaks.empty()) worst_gap = std::max(worst_gap, std::abs(peaks[0].t / period - 1.0));
  ok = ok && worst_gap <= 0.02;
  const double measured = peaks.size() >= 2 ? (peaks.back().t - peaks.front().t) / static_cast<double>(peaks.size() - 1)
                                            : 0.0;
  return {"amplitude-damping revivals", ok,
          std::to_string(peaks.size()) + " maxima, period " + detail::g(measured) + " (" +
              detail::g(measured / pi) + " pi) vs predicted " + detail::g(period) + ", worst deviation " +
              detail::g(100.0 * worst_gap) + "%; reference T = 9 pi = " + detail::g(9.0 * pi)};
}

inline CheckResult check_qfi() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> th(0.0, pi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  double worst_rel = 0.0;
  int redrawn = 0;
  for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::amplitude_damping})
    for (Backend b : {Backend::closed_form, Backend::oracle}) {
      int done = 0;
      while (done < 100) {
        const ProtocolSettings s{PureQubit(th(rng), ph(rng)), PureQubit(th(rng), ph(rng)), TriggerSetting(th(rng)),
                                 TriggerSetting(th(rng))};
        const Direction d = done % 2 ? Direction::b_to_a : Direction::a_to_b;
        const TeleportModel m(b, kind, unit(rng), unit(rng));
        try {
          const double exact = qfi_theta(m, s, d).value;
          const double fd = qfi_theta_finite_difference(m, s, d).value;
          worst_rel = std::max(worst_rel, std::abs(exact - fd) / std::max(exact, 1e-300));
          ++done;
        } catch (const BlochOutOfBall&) {
          ++redrawn;
        }
      }
    }
  double ideal = 0.0;
  double zero = 0.0;
  for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::amplitude_damping})
    for (Backend b : {Backend::closed_form, Backend::oracle}) {
      const ProtocolSettings sharp{PureQubit(1.0, 0.0), PureQubit(0.0, 0.0), TriggerSetting(1.0), TriggerSetting(pi)};
      ideal = std::max(ideal, std::abs(qfi_theta(b, kind, sharp, Direction::a_to_b, 0.0, 0.0).value - 1.0));
      const ProtocolSettings blocked{PureQubit(1.0, 0.3), PureQubit(0.0, 0.0), TriggerSetting(0.2), TriggerSetting(0.0)};
      zero = std::max(zero, qfi_theta(b, kind, blocked, Direction::a_to_b, 0.3, 0.4).value);
    }
  return {"QFI analytic derivative", worst_rel <= 1e-6 && ideal <= 1e-10 && zero == 0.0,
          "max relative error vs finite difference " + detail::g(worst_rel) + " (" + std::to_string(redrawn) +
              " closed-form points outside the Bloch ball redrawn); |J_ideal - 1| = " + detail::g(ideal) +
              "; J at zero weight = " + detail::g(zero)};
}

struct MonteCarloCase {
  std::string label;
  std::string preset_id;
  Backend backend;
  double t;
  double u;
  Direction direction;
};

inline CheckResult check_average_fidelity_monte_carlo(std::size_t samples = 1000000) {
  const std::vector<MonteCarloCase> cases = {
      {"fig3 t=5 u=0.3", "fig3", Backend::closed_form, 5.0, 0.3, Direction::a_to_b},
      {"fig5 t=2 u=0.6", "fig5", Backend::oracle, 2.0, 0.6, Direction::a_to_b},
      {"fig7 t=1 u=0", "fig7", Backend::closed_form, 1.0, 0.0, Direction::a_to_b},
      {"fig9 t=10 u=0.9", "fig9", Backend::oracle, 10.0, 0.9, Direction::a_to_b},
      {"fig7 t=2 u=0.3 B2A", "fig7", Backend::oracle, 2.0, 0.3, Direction::b_to_a},
  };
  std::mt19937_64 rng(1234567);
  std::uniform_real_distribution<double> z(-1.0, 1.0);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const SweepSpec spec = preset(c.preset_id);
    const double param = spec.parameters().front();
    const double p = spec.channel == ChannelKind::dephasing ? DephasingTimeModel(param).p_of_t(c.t)
                                                            : ADTimeModel(spec.gamma, param).p_of_t(c.t);
    const TeleportModel model(c.backend, spec.channel, p, c.u);
    const double quad = average_fidelity(model, spec.settings, c.direction, spec.nodes);

    const Roles r = roles(spec.settings, c.direction);
    const double m_recv = measurement_probability(r.receiver, r.receiver_trigger);
    const double ct = std::cos(r.sender_trigger.theta_tilde());
    const double st = std::sin(r.sender_trigger.theta_tilde());
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const InputAngles a = InputAngles::of(std::acos(z(rng)), ph(rng));
      const double f = 0.5 * (1.0 + a.direction().dot(model.output(a, ct, st, m_recv).value));
      sum += f;
      sum_sq += f * f;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / (n - 1.0));
    const bool pass = std::abs(mean - quad) <= 3.0 * se;
    ok = ok && pass;
    detail += (detail.empty() ? "" : "; ") + c.label + ": quadrature " + detail::g(quad) + ", MC " + detail::g(mean) +
              " +- " + detail::g(se) + (pass ? "" : " [FAIL]");
  }
  return {"average fidelity vs Monte Carlo", ok, detail};
}

inline CheckResult check_sweep_determinism() {
  const SweepSpec spec = preset("fig3");
  const std::string a = to_csv(run_sweep(spec));
  const std::string b = to_csv(run_sweep(spec, 1));
  return {"fig3 sweep is byte-deterministic", a == b, std::to_string(a.size()) + " bytes"};
}

/// The full suite, in order.
inline std::vector<CheckResult> run_validation() {
  return {check_negativity_agreement(),   check_cptp(),
          check_ideal_identity(),         check_oracle_scaling(),
          check_dephasing_asymptotes(),   check_nonmarkovian_dephasing(),
          check_damping_limits(),         check_damping_revivals(),
          check_qfi(),                    check_average_fidelity_monte_carlo(),
          check_sweep_determinism()};
}

}  // namespace bqt::experiment
