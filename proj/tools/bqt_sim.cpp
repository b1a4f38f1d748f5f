// bqt-sim: parameter sweeps, figure presets and self-validation.
//
// Exit status: 0 on success, 1 on invalid input or failed validation,
// 2 when output cannot be written.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bqt/errors.hpp"
#include "bqt/experiment/config.hpp"
#include "bqt/experiment/output.hpp"
#include "bqt/experiment/presets.hpp"
#include "bqt/experiment/sweep.hpp"
#include "bqt/experiment/validate.hpp"

namespace fs = std::filesystem;
using namespace bqt;
using namespace bqt::experiment;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report(const std::vector<fs::path>& written) {
  for (const auto& p : written) std::cout << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bidirectional quantum teleportation over correlated noisy channels"};
  app.require_subcommand(1);

  std::string backend_name;
  std::size_t nodes = 0;
  unsigned threads = 0;
  app.add_option("--backend", backend_name, "closed-form or oracle")
      ->check(CLI::IsMember({"closed-form", "oracle"}));
  app.add_option("--nodes", nodes, "Gauss-Legendre nodes per sphere axis (>= 8)");
  app.add_option("--threads", threads, "worker threads (0: all cores)");

  auto* sweep = app.add_subcommand("sweep", "run a sweep described by a config file");
  std::string config_path;
  std::string out_dir = "out";
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--out", out_dir);

  auto* presets = app.add_subcommand("preset", "reproduce a figure");
  std::string preset_id;
  bool dump = false;
  std::string preset_out = "out";
  presets->add_option("id", preset_id, "fig2 .. fig9")->required();
  presets->add_option("--out", preset_out);
  presets->add_flag("--dump-config", dump, "print the preset as a config file and exit");

  auto* validate = app.add_subcommand("validate", "run the invariant suite");

  CLI11_PARSE(app, argc, argv);

  PresetOverrides overrides;
  if (!backend_name.empty()) overrides.backend = backend_name == "oracle" ? Backend::oracle : Backend::closed_form;
  if (nodes != 0) overrides.nodes = nodes;

  try {
    if (*sweep) {
      SweepSpec spec = parse_config(read_text(config_path));
      apply(spec, overrides);
      report(emit(spec, run_sweep(spec, threads), out_dir, fs::path(config_path).stem().string()));
    } else if (*presets) {
      SweepSpec spec = preset(preset_id);
      apply(spec, overrides);
      if (dump) {
        std::cout << format_config(spec);
        return 0;
      }
      report(emit(spec, run_sweep(spec, threads), preset_out, preset_id));
    } else if (*validate) {
      bool all = true;
      for (const CheckResult& c : run_validation()) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.passed;
      }
      return all ? 0 : 1;
    }
  } catch (const IoError& e) {
    std::cerr << "bqt-sim: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bqt-sim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
