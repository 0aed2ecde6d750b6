#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rotrate/config.hpp"
#include "rotrate/errors.hpp"
#include "rotrate/experiments.hpp"

namespace fs = std::filesystem;

namespace {

// Preset directory: $ROTRATE_CONFIG_DIR, then the install tree next to the
// binary, then the source tree configs/.
fs::path preset_dir(const char* argv0) {
  if (const char* env = std::getenv("ROTRATE_CONFIG_DIR")) return env;
  std::error_code ec;
  const fs::path exe = fs::canonical("/proc/self/exe", ec);
  const fs::path bin = ec ? fs::path(argv0).parent_path() : exe.parent_path();
  const fs::path installed = bin.parent_path() / ROTRATE_INSTALLED_CONFIG_DIR;
  if (fs::is_directory(installed, ec)) return installed;
  return ROTRATE_CONFIG_DIR;
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation rates of quasiperiodic trajectories from projected observations"};
  app.set_version_flag("--version", "rotrate 0.1.0");

  std::string experiment;
  std::string input, out_dir, precision, config_file;
  double N = 0, K = -1, delta = 0, ref_x = 0, ref_y = 0;
  int p = 0;
  long long seed = 0;
  bool allow_winding = false;
  bool no_preset = false;

  app.add_option("--experiment", experiment,
                 "fish | flower | fish-delay-pair | flower-delay-pair | fish-torus | "
                 "flower-torus | cr3bp | custom")
      ->check(CLI::IsMember({"fish", "flower", "fish-delay-pair", "flower-delay-pair",
                             "fish-torus", "flower-torus", "cr3bp", "custom"}));
  app.add_option("--input", input, "observation CSV (n,phi or n,x,y) for custom");
  auto* n_opt = app.add_option("--N", N, "number of observations")->check(CLI::PositiveNumber);
  auto* k_opt = app.add_option("--K", K, "delay number")->check(CLI::NonNegativeNumber);
  auto* d_opt = app.add_option("--delta", delta, "continuation radius in (0, 0.5)");
  auto* p_opt = app.add_option("--p", p, "weight exponent")->check(CLI::PositiveNumber);
  auto* rx = app.add_option("--ref-x", ref_x, "reference point x");
  auto* ry = app.add_option("--ref-y", ref_y, "reference point y");
  auto* out_opt = app.add_option("--out-dir", out_dir, "artifact directory");
  auto* seed_opt = app.add_option("--seed", seed, "seed for the orbit search");
  auto* prec_opt = app.add_option("--precision", precision, "double | extended")
                       ->check(CLI::IsMember({"double", "extended"}));
  app.add_flag("--allow-winding", allow_winding, "accept |W| != 1 at the reference point");
  app.add_option("--config", config_file, "key = value file; overrides flags")
      ->check(CLI::ExistingFile);
  app.add_flag("--no-preset", no_preset, "do not load configs/<experiment>.cfg");
  rx->needs(ry);
  ry->needs(rx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(rotrate::ExitCode::usage);
  }

  try {
    rotrate::ConfigMap flags;
    if (!experiment.empty()) flags.set("experiment", experiment);
    if (!input.empty()) flags.set("input", input);
    if (*n_opt) flags.set("N", format(N));
    if (*k_opt) flags.set("K", format(K));
    if (*d_opt) flags.set("delta", format(delta));
    if (*p_opt) flags.set("p", std::to_string(p));
    if (*rx) flags.set("ref", format(ref_x) + " " + format(ref_y));
    if (*out_opt) flags.set("out_dir", out_dir);
    if (*seed_opt) flags.set("seed", std::to_string(seed));
    if (*prec_opt) flags.set("precision", precision);
    if (allow_winding) flags.set("allow_winding", "true");

    rotrate::ConfigMap file;
    if (!config_file.empty()) file = rotrate::ConfigMap::load(config_file);

    // Which preset: the config file wins over the flag, as for every key.
    std::string name = file.get("experiment").value_or(flags.get("experiment").value_or(""));
    if (name.empty()) {
      std::cerr << "error: --experiment is required (or set experiment in --config)\n";
      return static_cast<int>(rotrate::ExitCode::usage);
    }

    rotrate::ConfigMap merged;
    const fs::path preset = preset_dir(argv[0]) / (name + ".cfg");
    if (!no_preset && fs::exists(preset)) merged = rotrate::ConfigMap::load(preset);
    merged.merge(flags);
    merged.merge(file);

    const auto config = rotrate::config_from_map(merged);
    const auto outcome = rotrate::run_experiment(config);
    std::cout << outcome.summary_json << '\n';
    if (!outcome.message.empty()) std::cerr << "rotrate: " << outcome.message << '\n';
    return static_cast<int>(outcome.exit_code);
  } catch (const rotrate::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(rotrate::ExitCode::io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(rotrate::ExitCode::usage);
  }
}
