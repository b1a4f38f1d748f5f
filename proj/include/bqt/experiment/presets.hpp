#pragma once

// Figure-reproduction presets. Surface figures (2, 4, 6, 8) sweep the
// time-model parameter on a 50 x 50 grid; curve figures (3, 5, 7, 9) plot all
// outputs against t* = t/pi with both inputs at the north pole and triggers
// (0, pi). Damping presets use gamma = 1 as the time unit.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bqt/errors.hpp"
#include "bqt/experiment/config.hpp"
#include "bqt/experiment/output.hpp"
#include "bqt/experiment/sweep.hpp"

namespace bqt::experiment {

inline constexpr std::array<std::string_view, 8> preset_ids = {"fig2", "fig3", "fig4", "fig5",
                                                               "fig6", "fig7", "fig8", "fig9"};

inline SweepSpec preset(std::string_view id) {
  SweepSpec s;
  const std::vector<double> pair{0.0, 0.5};
  const std::vector<double> four{0.0, 0.3, 0.6, 0.9};
  auto surface = [&](ChannelKind kind, std::vector<double> params, double t_max) {
    s.channel = kind;
    (kind == ChannelKind::dephasing ? s.tau : s.reservoir_width) = std::move(params);
    s.u_values = pair;
    s.t_grid = {0.0, t_max, 50};
    s.outputs = {Output::negativity};
    s.time_axis = TimeAxis::raw;
  };
  auto curves = [&](ChannelKind kind, double param, double t_max, std::size_t steps) {
    s.channel = kind;
    (kind == ChannelKind::dephasing ? s.tau : s.reservoir_width) = {param};
    s.u_values = four;
    s.t_grid = {0.0, t_max, steps};
    s.time_axis = TimeAxis::rescaled;
  };

  if (id == "fig2") surface(ChannelKind::dephasing, linspace(0.005, 0.245, 50), 10.0);
  else if (id == "fig3") curves(ChannelKind::dephasing, 0.1, 50.0, 500);
  else if (id == "fig4") surface(ChannelKind::dephasing, linspace(0.3, 10.0, 50), 10.0);
  else if (id == "fig5") curves(ChannelKind::dephasing, 7.0, 5.0 * pi, 500);
  else if (id == "fig6") surface(ChannelKind::amplitude_damping, linspace(0.6, 10.0, 50), 10.0);
  else if (id == "fig7") curves(ChannelKind::amplitude_damping, 5.0, 5.0 * pi, 500);
  else if (id == "fig8") surface(ChannelKind::amplitude_damping, linspace(0.01, 0.49, 50), 50.0);
  else if (id == "fig9") curves(ChannelKind::amplitude_damping, 0.1, 20.0 * pi, 1000);
  else throw ValidationError("preset", "unknown preset '" + std::string(id) + "'");
  return s;
}

struct PresetOverrides {
  std::optional<Backend> backend;
  std::optional<std::size_t> nodes;
};

inline void apply(SweepSpec& spec, const PresetOverrides& o) {
  if (o.backend) spec.backend = *o.backend;
  if (o.nodes) {
    if (*o.nodes < 8) throw ValidationError("nodes", "at least 8 quadrature nodes");
    spec.nodes = *o.nodes;
  }
}

/// Plotted columns: every requested output, with survival next to p_of_t
/// for damping.
inline std::vector<std::string> plot_columns(const SweepSpec& spec) {
  const auto cols = table_columns(spec);
  return {cols.begin() + 4, cols.end()};
}

/// Writes <name>.csv and <name>_<column>.svg into `out_dir`; returns the paths.
inline std::vector<std::filesystem::path> emit(const SweepSpec& spec, const ResultTable& table,
                                               const std::filesystem::path& out_dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  written.push_back(out_dir / (name + ".csv"));
  write_csv(table, written.back());
  PlotOptions opt;
  opt.x_column = spec.time_axis == TimeAxis::rescaled ? "t_star" : "t";
  for (const std::string& col : plot_columns(spec)) {
    opt.title = name + ": " + col;
    written.push_back(out_dir / (name + "_" + col + ".svg"));
    write_svg(table, col, written.back(), opt);
  }
  return written;
}

inline std::vector<std::filesystem::path> run_preset(std::string_view id, const std::filesystem::path& out_dir,
                                                     const PresetOverrides& overrides = {}, unsigned threads = 0) {
  SweepSpec spec = preset(id);
  apply(spec, overrides);
  return emit(spec, run_sweep(spec, threads), out_dir, std::string(id));
}

}  // namespace bqt::experiment
