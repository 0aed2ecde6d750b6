#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rotrate/lifted_series.hpp"
#include "rotrate/projections.hpp"

namespace rotrate {

enum class ComponentMetric { circle, euclidean };

struct EmbeddingConfig {
  std::size_t K = 7;
  ComponentMetric component_metric = ComponentMetric::circle;
  /// Torus dimension, used only for the K*D >= 2d+1 check.
  std::size_t d_assumed = 1;
  /// Disable to build deliberately undersized embeddings.
  bool check_embedding_dimension = true;
};

/// Delay vectors stored row-major: vector n occupies K*D consecutive scalars.
struct DelayCloud {
  std::size_t K = 0;
  /// Scalars per observation: 1 for angles, 2 for planar points.
  std::size_t D = 1;
  ComponentMetric component_metric = ComponentMetric::circle;
  std::vector<double> coords;
  /// Delta_n = mod1(phi_{n+1} - phi_n), one per delay vector.
  std::vector<double> deltas;

  std::size_t size() const { return deltas.size(); }
  std::size_t width() const { return K * D; }
  std::span<const double> vector(std::size_t n) const {
    return std::span<const double>(coords).subspan(n * width(), width());
  }
};

/// Scalar observations (circle-valued angles or real values). Holds
/// min(N-K+1, N-1) vectors, since each needs a following angle for Delta.
DelayCloud build_delay_cloud(std::span<const double> observations,
                             const EmbeddingConfig& config);

/// Planar observations with their angles about a reference point. Component
/// distance is Euclidean in the plane.
DelayCloud build_delay_cloud(std::span<const PlanarPoint> points,
                             std::span<const double> angles,
                             const EmbeddingConfig& config);

/// Euclidean norm of the per-component distances.
double embedded_distance(std::span<const double> u, std::span<const double> v,
                         ComponentMetric metric);

/// Distance between (Theta_a, lift_a) and (Theta_b, lift_b).
double gamma_distance(const DelayCloud& cloud, std::size_t a, double lift_a,
                      std::size_t b, double lift_b);

/// Minimum distance between the lifted cloud and its translates by j = +-1, +-2
/// in the lift coordinate. Distances are measured from at most max_sources
/// evenly strided points to every point; 0 means every point is a source.
/// Subsampling the sources can only overestimate.
double estimate_separation(const DelayCloud& cloud, const LiftedSeries& lift,
                           std::size_t max_sources = 0);

}  // namespace rotrate
