#pragma once

// Sweep description and its plain-text configuration format.
//
//   # comment
//   channel = dephasing
//   tau = 0.1                       # or a list: 0.1, 0.2, linspace(0.3, 10, 50)
//   u_values = 0, 0.3, 0.6, 0.9
//   t_grid = 0, 5*pi, 500           # t_min, t_max, steps (alias: t)
//   trigger_b = pi
//
// Angles and times accept `pi` multiples: pi, 2pi, 3*pi/4, pi/2.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bqt/errors.hpp"
#include "bqt/noise.hpp"
#include "bqt/teleport.hpp"

namespace bqt::experiment {

enum class Output { negativity, fidelity_avg_A2B, fidelity_avg_B2A, qfi_thetaA, qfi_thetaB, p_of_t };

inline constexpr std::array<Output, 6> all_outputs = {Output::negativity, Output::fidelity_avg_A2B,
                                                      Output::fidelity_avg_B2A, Output::qfi_thetaA,
                                                      Output::qfi_thetaB, Output::p_of_t};

inline std::string_view to_string(Output o) {
  switch (o) {
    case Output::negativity: return "negativity";
    case Output::fidelity_avg_A2B: return "fidelity_avg_A2B";
    case Output::fidelity_avg_B2A: return "fidelity_avg_B2A";
    case Output::qfi_thetaA: return "qfi_thetaA";
    case Output::qfi_thetaB: return "qfi_thetaB";
    case Output::p_of_t: return "p_of_t";
  }
  return "?";
}

inline std::optional<Output> output_from_string(std::string_view s) {
  for (Output o : all_outputs)
    if (to_string(o) == s) return o;
  return std::nullopt;
}

/// Horizontal axis for plots.
enum class TimeAxis { raw, rescaled };

struct TimeGrid {
  double t_min = 0.0;
  double t_max = 1.0;
  std::size_t steps = 2;

  /// Inclusive, evenly spaced.
  double at(std::size_t i) const {
    if (i + 1 == steps) return t_max;
    return t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct SweepSpec {
  ChannelKind channel = ChannelKind::dephasing;
  std::vector<double> tau;              // dephasing memory times
  double gamma = 1.0;                   // damping: qubit-cavity coupling
  std::vector<double> reservoir_width;  // damping: Gamma values
  std::vector<double> u_values;
  TimeGrid t_grid;
  ProtocolSettings settings{PureQubit(0.0, 0.0), PureQubit(0.0, 0.0), TriggerSetting(0.0), TriggerSetting(pi)};
  Backend backend = Backend::closed_form;
  std::vector<Output> outputs{all_outputs.begin(), all_outputs.end()};
  std::size_t nodes = 64;
  TimeAxis time_axis = TimeAxis::raw;

  /// Time-model parameters in the order they are swept.
  const std::vector<double>& parameters() const {
    return channel == ChannelKind::dephasing ? tau : reservoir_width;
  }
  bool wants(Output o) const { return std::find(outputs.begin(), outputs.end(), o) != outputs.end(); }

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// n evenly spaced values from a to b inclusive.
inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = (n == 1 || i + 1 == n) ? (n == 1 ? a : b) : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> plain_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// number | [coef[*]]pi[/den]
inline double parse_scalar(std::string_view s, int line) {
  s = trim(s);
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) {
    if (auto v = plain_number(s)) return *v;
    throw ParseError(line, "not a number: '" + std::string(s) + "'");
  }
  double coef = 1.0;
  std::string_view head = trim(s.substr(0, pos));
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  if (head == "-") {
    coef = -1.0;
  } else if (!head.empty()) {
    const auto c = plain_number(head);
    if (!c) throw ParseError(line, "bad multiple of pi: '" + std::string(s) + "'");
    coef = *c;
  }
  double den = 1.0;
  const std::string_view tail = trim(s.substr(pos + 2));
  if (!tail.empty()) {
    if (tail.front() != '/') throw ParseError(line, "bad multiple of pi: '" + std::string(s) + "'");
    const auto d = plain_number(tail.substr(1));
    if (!d || *d == 0.0) throw ParseError(line, "bad divisor: '" + std::string(s) + "'");
    den = *d;
  }
  return coef * pi / den;
}

/// Splits on commas outside parentheses.
inline std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

inline std::size_t parse_count(std::string_view s, int line) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(line, "not a nonnegative integer: '" + std::string(s) + "'");
  return v;
}

/// Comma list of scalars and linspace(a, b, n) items.
inline std::vector<double> parse_list(std::string_view s, int line) {
  std::vector<double> out;
  for (std::string_view item : split_top_level(s)) {
    if (item.empty()) throw ParseError(line, "empty list item");
    if (item.starts_with("linspace")) {
      const auto open = item.find('(');
      if (open == std::string_view::npos || item.back() != ')')
        throw ParseError(line, "expected linspace(a, b, n)");
      const auto args = split_top_level(item.substr(open + 1, item.size() - open - 2));
      if (args.size() != 3) throw ParseError(line, "linspace takes three arguments");
      const auto v = linspace(parse_scalar(args[0], line), parse_scalar(args[1], line), parse_count(args[2], line));
      out.insert(out.end(), v.begin(), v.end());
    } else {
      out.push_back(parse_scalar(item, line));
    }
  }
  return out;
}

inline void require_positive(const std::vector<double>& v, const char* field) {
  if (v.empty()) throw ValidationError(field, "needs at least one value");
  for (double x : v)
    if (!(x > 0.0)) throw ValidationError(field, "values must be positive, got " + std::to_string(x));
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

}  // namespace detail

inline SweepSpec parse_config(std::string_view text) {
  using namespace detail;
  SweepSpec spec;
  std::set<std::string> seen;
  std::optional<ChannelKind> channel;
  bool have_grid = false;
  std::array<double, 6> angles = {0.0, 0.0, 0.0, 0.0, 0.0, pi};  // theta_a phi_a theta_b phi_b trigger_a trigger_b
  bool gamma_given = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "t") key = "t_grid";
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(line_no, "duplicate key '" + key + "'");

    if (key == "channel") {
      if (value == "dephasing") channel = ChannelKind::dephasing;
      else if (value == "amplitude_damping") channel = ChannelKind::amplitude_damping;
      else throw ValidationError("channel", "expected dephasing or amplitude_damping, got '" + std::string(value) + "'");
    } else if (key == "tau") {
      spec.tau = parse_list(value, line_no);
      require_positive(spec.tau, "tau");
    } else if (key == "gamma") {
      spec.gamma = parse_scalar(value, line_no);
      gamma_given = true;
      if (!(spec.gamma > 0.0)) throw ValidationError("gamma", "must be positive");
    } else if (key == "reservoir_width") {
      spec.reservoir_width = parse_list(value, line_no);
      require_positive(spec.reservoir_width, "reservoir_width");
    } else if (key == "u_values") {
      spec.u_values = parse_list(value, line_no);
      if (spec.u_values.empty()) throw ValidationError("u_values", "needs at least one value");
      for (double u : spec.u_values)
        if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("u_values", format_double(u) + " outside [0, 1]");
    } else if (key == "t_grid") {
      const auto parts = split_top_level(value);
      if (parts.size() != 3) throw ParseError(line_no, "t_grid takes t_min, t_max, steps");
      spec.t_grid = {parse_scalar(parts[0], line_no), parse_scalar(parts[1], line_no), parse_count(parts[2], line_no)};
      if (!(spec.t_grid.t_min >= 0.0)) throw ValidationError("t_grid", "t_min must be nonnegative");
      if (!(spec.t_grid.t_max > spec.t_grid.t_min)) throw ValidationError("t_grid", "t_max must exceed t_min");
      if (spec.t_grid.steps < 2) throw ValidationError("t_grid", "steps must be at least 2");
      have_grid = true;
    } else if (key == "theta_a" || key == "phi_a" || key == "theta_b" || key == "phi_b" || key == "trigger_a" ||
               key == "trigger_b") {
      static constexpr std::array<std::string_view, 6> names = {"theta_a", "phi_a",     "theta_b",
                                                                "phi_b",   "trigger_a", "trigger_b"};
      const auto idx = static_cast<std::size_t>(std::find(names.begin(), names.end(), key) - names.begin());
      const double v = parse_scalar(value, line_no);
      const bool polar = key.starts_with("theta") || key.starts_with("trigger");
      if (polar && !(v >= 0.0 && v <= pi)) throw ValidationError(key, "must lie in [0, pi]");
      angles[idx] = v;
    } else if (key == "backend") {
      if (value == "closed-form" || value == "closed_form") spec.backend = Backend::closed_form;
      else if (value == "oracle") spec.backend = Backend::oracle;
      else throw ValidationError("backend", "expected closed-form or oracle");
    } else if (key == "outputs") {
      spec.outputs.clear();
      for (std::string_view name : split_top_level(value)) {
        const auto o = output_from_string(name);
        if (!o) throw ValidationError("outputs", "unknown output '" + std::string(name) + "'");
        if (spec.wants(*o)) throw ValidationError("outputs", "repeated output '" + std::string(name) + "'");
        spec.outputs.push_back(*o);
      }
      std::sort(spec.outputs.begin(), spec.outputs.end());
    } else if (key == "nodes") {
      spec.nodes = parse_count(value, line_no);
      if (spec.nodes < 8) throw ValidationError("nodes", "at least 8 quadrature nodes");
    } else if (key == "time_axis") {
      if (value == "t") spec.time_axis = TimeAxis::raw;
      else if (value == "t_star") spec.time_axis = TimeAxis::rescaled;
      else throw ValidationError("time_axis", "expected t or t_star");
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }

  if (!channel) throw ValidationError("channel", "required");
  spec.channel = *channel;
  if (spec.u_values.empty()) throw ValidationError("u_values", "required");
  if (!have_grid) throw ValidationError("t_grid", "required");
  if (spec.channel == ChannelKind::dephasing) {
    if (spec.tau.empty()) throw ValidationError("tau", "required for dephasing");
    if (!spec.reservoir_width.empty()) throw ValidationError("reservoir_width", "only for amplitude_damping");
    if (gamma_given) throw ValidationError("gamma", "only for amplitude_damping");
  } else {
    if (spec.reservoir_width.empty()) throw ValidationError("reservoir_width", "required for amplitude_damping");
    if (!spec.tau.empty()) throw ValidationError("tau", "only for dephasing");
  }
  spec.settings = {PureQubit(angles[0], angles[1]), PureQubit(angles[2], angles[3]), TriggerSetting(angles[4]),
                   TriggerSetting(angles[5])};
  return spec;
}

/// Text that parse_config maps back to `spec`.
inline std::string format_config(const SweepSpec& spec) {
  using detail::format_double;
  using detail::format_list;
  std::ostringstream out;
  out << "channel = " << to_string(spec.channel) << '\n';
  if (spec.channel == ChannelKind::dephasing) {
    out << "tau = " << format_list(spec.tau) << '\n';
  } else {
    out << "gamma = " << format_double(spec.gamma) << '\n';
    out << "reservoir_width = " << format_list(spec.reservoir_width) << '\n';
  }
  out << "u_values = " << format_list(spec.u_values) << '\n';
  out << "t_grid = " << format_double(spec.t_grid.t_min) << ", " << format_double(spec.t_grid.t_max) << ", "
      << spec.t_grid.steps << '\n';
  const ProtocolSettings& s = spec.settings;
  out << "theta_a = " << format_double(s.alice_state.theta()) << '\n';
  out << "phi_a = " << format_double(s.alice_state.phi()) << '\n';
  out << "theta_b = " << format_double(s.bob_state.theta()) << '\n';
  out << "phi_b = " << format_double(s.bob_state.phi()) << '\n';
  out << "trigger_a = " << format_double(s.alice_trigger.theta_tilde()) << '\n';
  out << "trigger_b = " << format_double(s.bob_trigger.theta_tilde()) << '\n';
  out << "backend = " << to_string(spec.backend) << '\n';
  out << "outputs = ";
  for (std::size_t i = 0; i < spec.outputs.size(); ++i) out << (i ? ", " : "") << to_string(spec.outputs[i]);
  out << '\n';
  out << "nodes = " << spec.nodes << '\n';
  out << "time_axis = " << (spec.time_axis == TimeAxis::raw ? "t" : "t_star") << '\n';
  return out.str();
}

}  // namespace bqt::experiment
