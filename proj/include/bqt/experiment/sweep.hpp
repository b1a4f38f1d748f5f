#pragma once

// Evaluates a SweepSpec over its (u, parameter, t) grid.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bqt/errors.hpp"
#include "bqt/experiment/config.hpp"
#include "bqt/metrics.hpp"
#include "bqt/negativity.hpp"
#include "bqt/noise.hpp"
#include "bqt/teleport.hpp"

namespace bqt::experiment {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool empty() const noexcept { return rows.empty(); }

  std::size_t column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ValidationError("column", "no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

/// Name of the swept time-model parameter column.
inline std::string parameter_column(ChannelKind kind) {
  return kind == ChannelKind::dephasing ? "tau" : "gamma_ratio";
}

inline std::vector<std::string> table_columns(const SweepSpec& spec) {
  std::vector<std::string> cols{"t", "u", "t_star", parameter_column(spec.channel)};
  for (Output o : spec.outputs) {
    cols.emplace_back(to_string(o));
    if (o == Output::p_of_t && spec.channel == ChannelKind::amplitude_damping) cols.emplace_back("survival");
  }
  return cols;
}

namespace detail {

inline std::vector<double> evaluate_row(const SweepSpec& spec, double u, double param, double t) {
  double p = 0.0;
  double survival = 0.0;
  double axis_value = param;
  if (spec.channel == ChannelKind::dephasing) {
    p = DephasingTimeModel(param).p_of_t(t);
  } else {
    const ADTimeModel model(spec.gamma, param);
    survival = model.survival(t);
    p = model.p_of_t(t);
    axis_value = param / spec.gamma;
  }

  std::vector<double> row{t, u, t / pi, axis_value};
  const bool needs_model = std::any_of(spec.outputs.begin(), spec.outputs.end(), [](Output o) {
    return o != Output::negativity && o != Output::p_of_t;
  });
  std::optional<TeleportModel> model;
  if (needs_model) model.emplace(spec.backend, spec.channel, p, u);

  for (Output o : spec.outputs) {
    switch (o) {
      case Output::negativity:
        row.push_back(spec.backend == Backend::oracle ? negativity(resource_state(spec.channel, p, u))
                                                      : negativity_closed(spec.channel, p, u));
        break;
      case Output::fidelity_avg_A2B:
        row.push_back(average_fidelity(*model, spec.settings, Direction::a_to_b, spec.nodes));
        break;
      case Output::fidelity_avg_B2A:
        row.push_back(average_fidelity(*model, spec.settings, Direction::b_to_a, spec.nodes));
        break;
      case Output::qfi_thetaA:
        row.push_back(qfi_theta(*model, spec.settings, Direction::a_to_b).value);
        break;
      case Output::qfi_thetaB:
        row.push_back(qfi_theta(*model, spec.settings, Direction::b_to_a).value);
        break;
      case Output::p_of_t:
        row.push_back(p);
        if (spec.channel == ChannelKind::amplitude_damping) row.push_back(survival);
        break;
    }
  }
  return row;
}

}  // namespace detail

/// One row per (u, parameter, t), sorted in that order. Rows are computed on
/// `threads` workers (0: hardware concurrency); the result does not depend on
/// the worker count. The first failing point, in row order, is rethrown as a
/// SweepPointError.
inline ResultTable run_sweep(const SweepSpec& spec, unsigned threads = 0) {
  const std::vector<double>& params = spec.parameters();
  const std::size_t nt = spec.t_grid.steps;
  const std::size_t np = params.size();
  const std::size_t total = spec.u_values.size() * np * nt;

  std::vector<double> us = spec.u_values;
  std::sort(us.begin(), us.end());
  std::vector<double> ps = params;
  std::sort(ps.begin(), ps.end());

  ResultTable table{table_columns(spec), std::vector<std::vector<double>>(total)};
  std::vector<std::exception_ptr> errors(total);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));

  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < total; i += threads) {
      const double u = us[i / (np * nt)];
      const double param = ps[(i / nt) % np];
      const double t = spec.t_grid.at(i % nt);
      try {
        table.rows[i] = detail::evaluate_row(spec, u, param, t);
      } catch (const Error& e) {
        errors[i] = std::make_exception_ptr(SweepPointError(t, u, e.what()));
      }
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return table;
}

}  // namespace bqt::experiment
