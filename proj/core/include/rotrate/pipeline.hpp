#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rotrate/birkhoff.hpp"
#include "rotrate/continuation.hpp"
#include "rotrate/embedding.hpp"
#include "rotrate/projections.hpp"

namespace rotrate {

/// Upper bound on the pilot-derived delta; larger radii only add neighbours.
inline constexpr double kPilotDeltaCap = 0.03;
/// Delta used for the pilot run itself and when the pilot fails.
inline constexpr double kFallbackDelta = 0.05;
inline constexpr std::size_t kPilotLength = 20000;
/// Source points used by the pilot separation estimate.
inline constexpr std::size_t kSeparationSources = 2000;

struct PilotResult {
  double delta = kFallbackDelta;
  std::optional<double> separation;
};

/// Runs continuation at kFallbackDelta on the first kPilotLength vectors and,
/// if it completes, returns min(separation / 4, kPilotDeltaCap).
PilotResult pilot_delta(const DelayCloud& cloud);

struct PipelineOptions {
  /// 0 selects the default: 7 for angle embeddings, 5 for planar ones.
  std::size_t K = 0;
  std::optional<double> delta;
  WeightParams weight{1};
  std::size_t d_assumed = 1;
  /// Embed the planar points themselves rather than their angles.
  bool embed_planar = false;
  bool allow_winding = false;
  FrontierOrder order = FrontierOrder::fifo;
  bool exhaustive = false;
};

struct PipelineResult {
  std::vector<double> angles;
  std::size_t K = 0;
  double delta = 0.0;
  std::optional<double> pilot_separation;
  ContinuationResult continuation;
  /// Present when the lift is complete.
  std::optional<RateResult> rate;
  /// Planar inputs only: winding estimated from the observations.
  std::optional<int> winding;
};

/// Angle observations in [0,1).
PipelineResult estimate_rotation_rate(std::span<const double> angles,
                                      const PipelineOptions& options);

/// Planar observations measured from reference point p. Throws
/// WindingRefusal when the estimated |W| != 1 and allow_winding is false.
PipelineResult estimate_rotation_rate(std::span<const PlanarPoint> points, PlanarPoint p,
                                      const PipelineOptions& options);

/// |W| (or, on a d-torus, the gcd of the degree vector) recovered from a
/// complete lift: pairs of near returns to Theta_0 at times s give
/// s * rate - round(lift sum over the pair) = W * (s rho - nearest integer),
/// and cross differences of two such values are integer multiples of W.
/// Returns nullopt when fewer than two usable returns exist.
std::optional<int> winding_from_lift(const DelayCloud& cloud, const LiftedSeries& lift,
                                     double unreduced_rate);

}  // namespace rotrate
