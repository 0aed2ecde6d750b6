#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rotrate/birkhoff.hpp"
#include "rotrate/embedding.hpp"
#include "rotrate/lifted_series.hpp"
#include "rotrate/torus.hpp"

namespace rotrate {

enum class FrontierOrder { fifo, lifo };

struct ContinuationParams {
  /// Match radius in the (Theta, lift) product metric; must lie in (0, 1/2).
  double delta = 0.05;
  /// Cap on frontier expansions; 0 means no cap.
  std::size_t max_rounds = 0;
  /// Cap on candidates examined per expansion; 0 means no cap.
  std::size_t neighbor_budget = 0;
  FrontierOrder order = FrontierOrder::fifo;
  /// Scan all pairs instead of using the grid (reference path, small N).
  bool exhaustive = false;
  bool record_edges = false;
};

/// An accepted assignment: `to` received its offset from `from`.
struct LiftEdge {
  std::size_t from;
  std::size_t to;
  double distance;
  /// Distance with the next-best integer, always >= 1/2 for delta < 1/2.
  double runner_up;
};

struct ContinuationResult {
  LiftedSeries lift;
  bool complete = false;
  /// assigned / total
  double assigned_fraction = 0.0;
  std::size_t expansions = 0;
  std::vector<LiftEdge> edges;
};

/// Breadth-first assignment of integer offsets starting from m_0 = 0. Every
/// pair of indices found within delta is checked for consistency; a pair
/// that is within delta of a different translate raises AmbiguityError.
/// Running out of frontier is reported through `complete`, not thrown.
ContinuationResult continue_lift(const DelayCloud& cloud, const ContinuationParams& params);

struct RateResult {
  /// In [0,1).
  double rate = 0.0;
  /// Weighted average of the lift before reduction.
  double unreduced = 0.0;
  AverageReport report;
};

RateResult rotation_rate(const LiftedSeries& lift, WeightParams p);

/// Ground-truth lift from known torus coordinates: offsets are propagated by
/// continuity of the lift in theta, then shifted so m_0 = 0. Throws
/// OracleError when the samples are too sparse to follow the lift.
LiftedSeries lift_oracle(const std::vector<TorusPoint>& theta_sequence,
                         const std::vector<double>& deltas);

}  // namespace rotrate
