#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rotrate/config.hpp"
#include "rotrate/cr3bp.hpp"
#include "rotrate/projections.hpp"

namespace rotrate {

enum class ExitCode : int {
  ok = 0,
  usage = 1,
  incomplete_lift = 2,
  ambiguity = 3,
  winding_refusal = 4,
  io = 5,
  not_converged = 6,
};

enum class Precision { standard, extended };

struct ExperimentConfig {
  /// fish | flower | fish-delay-pair | flower-delay-pair | fish-torus |
  /// flower-torus | cr3bp | custom
  std::string experiment = "fish";
  std::size_t N = 100000;
  /// 0 selects the pipeline default.
  std::size_t K = 0;
  std::optional<double> delta;
  std::optional<int> p;
  /// Reference point of the (first) projection.
  std::optional<PlanarPoint> ref;
  /// Second reference point: torus projection 2, or the planar comparison
  /// run of the delay-pair experiments.
  std::optional<PlanarPoint> ref2;
  std::filesystem::path out_dir = "rotrate-out";
  std::optional<std::filesystem::path> input;
  std::uint64_t seed = 1;
  Precision precision = Precision::standard;
  bool allow_winding = false;
  std::optional<FourierCurve> curve;

  Cr3bpParams cr3bp;
  std::optional<Cr3bpState> initial_state;
  double t_end = 500.0;
  std::size_t trajectory_stride = 1;
  /// Run the orbit search instead of using initial_state.
  bool search = false;
  OrbitSearchParams search_params;
};

/// Reads the keys documented in the README over `base`.
ExperimentConfig config_from_map(const ConfigMap& map, ExperimentConfig base = {});

struct ExperimentOutcome {
  ExitCode exit_code = ExitCode::ok;
  std::string message;
  /// summary.json (or rates.json for cr3bp) contents.
  std::string summary_json;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs one experiment end to end and writes its artifacts under out_dir.
/// Library errors are mapped onto exit codes rather than thrown.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

struct RateRecord {
  bool planar = false;
  std::size_t n_observations = 0;
  std::size_t K = 0;
  double delta = 0.0;
  std::optional<double> pilot_separation;
  bool complete = false;
  double assigned_fraction = 0.0;
  /// Meaningful only when complete.
  double rate = 0.0;
  double unreduced = 0.0;
  std::optional<int> winding;
};

/// Observation file to rate. Planar files need `ref`. Errors from parsing,
/// the winding check and continuation propagate as exceptions; an
/// incomplete lift is reported through `complete`.
RateRecord estimate_from_file(const std::filesystem::path& path, std::size_t K,
                              std::optional<double> delta, int p,
                              std::optional<PlanarPoint> ref = std::nullopt,
                              bool allow_winding = false);

/// Golden rotation number (sqrt 5 - 1)/2 used by the curve experiments.
double golden_rotation();
/// sqrt(3)/2, the second frequency of the torus experiments.
double torus_second_frequency();

}  // namespace rotrate
