#include "rotrate/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rotrate/compensated.hpp"
#include "rotrate/errors.hpp"

namespace rotrate {
namespace {

DelayCloud prefix(const DelayCloud& cloud, std::size_t n) {
  DelayCloud out;
  out.K = cloud.K;
  out.D = cloud.D;
  out.component_metric = cloud.component_metric;
  out.coords.assign(cloud.coords.begin(),
                    cloud.coords.begin() + static_cast<std::ptrdiff_t>(n * cloud.width()));
  out.deltas.assign(cloud.deltas.begin(), cloud.deltas.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

PipelineResult run(std::vector<double> angles, const DelayCloud& cloud,
                   const PipelineOptions& options, std::size_t K) {
  PipelineResult result;
  result.angles = std::move(angles);
  result.K = K;
  if (options.delta) {
    result.delta = *options.delta;
  } else {
    const PilotResult pilot = pilot_delta(cloud);
    result.delta = pilot.delta;
    result.pilot_separation = pilot.separation;
  }
  ContinuationParams params;
  params.delta = result.delta;
  params.order = options.order;
  params.exhaustive = options.exhaustive;
  result.continuation = continue_lift(cloud, params);
  if (result.continuation.complete) {
    result.rate = rotation_rate(result.continuation.lift, options.weight);
  }
  return result;
}

}  // namespace

PilotResult pilot_delta(const DelayCloud& cloud) {
  PilotResult pilot;
  const DelayCloud head = prefix(cloud, std::min(cloud.size(), kPilotLength));
  ContinuationParams params;
  params.delta = kFallbackDelta;
  try {
    const auto r = continue_lift(head, params);
    if (!r.complete) return pilot;
    pilot.separation = estimate_separation(head, r.lift, kSeparationSources);
    pilot.delta = std::min(*pilot.separation / 4.0, kPilotDeltaCap);
  } catch (const AmbiguityError&) {
  }
  return pilot;
}

PipelineResult estimate_rotation_rate(std::span<const double> angles,
                                      const PipelineOptions& options) {
  EmbeddingConfig config;
  config.K = options.K == 0 ? 7 : options.K;
  config.component_metric = ComponentMetric::circle;
  config.d_assumed = options.d_assumed;
  const DelayCloud cloud = build_delay_cloud(angles, config);
  return run(std::vector<double>(angles.begin(), angles.end()), cloud, options, config.K);
}

PipelineResult estimate_rotation_rate(std::span<const PlanarPoint> points, PlanarPoint p,
                                      const PipelineOptions& options) {
  std::vector<double> angles(points.size());
  for (std::size_t n = 0; n < points.size(); ++n) angles[n] = angle_from_reference(points[n], p);

  EmbeddingConfig config;
  config.d_assumed = options.d_assumed;
  DelayCloud cloud;
  if (options.embed_planar) {
    config.K = options.K == 0 ? 5 : options.K;
    config.component_metric = ComponentMetric::euclidean;
    // Unit-extent coordinates, so delta means the same for every curve.
    double x_lo = points[0].x, x_hi = x_lo, y_lo = points[0].y, y_hi = y_lo;
    for (const auto& q : points) {
      x_lo = std::min(x_lo, q.x);
      x_hi = std::max(x_hi, q.x);
      y_lo = std::min(y_lo, q.y);
      y_hi = std::max(y_hi, q.y);
    }
    const double extent = std::max(x_hi - x_lo, y_hi - y_lo);
    const double scale = extent > 0.0 ? 1.0 / extent : 1.0;
    std::vector<PlanarPoint> scaled(points.size());
    for (std::size_t n = 0; n < points.size(); ++n) {
      scaled[n] = {(points[n].x - x_lo) * scale, (points[n].y - y_lo) * scale};
    }
    cloud = build_delay_cloud(scaled, angles, config);
  } else {
    config.K = options.K == 0 ? 7 : options.K;
    config.component_metric = ComponentMetric::circle;
    cloud = build_delay_cloud(angles, config);
  }
  PipelineResult result = run(std::move(angles), cloud, options, config.K);
  if (result.rate) {
    result.winding = winding_from_lift(cloud, result.continuation.lift, result.rate->unreduced);
    if (result.winding && std::abs(*result.winding) != 1 && !options.allow_winding) {
      throw WindingRefusal(*result.winding,
                           "observations wind " + std::to_string(*result.winding) +
                               " times around the reference point; the measured rate would be "
                               "that multiple of the underlying rate (override with "
                               "--allow-winding)");
    }
  }
  return result;
}

std::optional<int> winding_from_lift(const DelayCloud& cloud, const LiftedSeries& lift,
                                     double unreduced_rate) {
  constexpr std::size_t kReturns = 12;
  constexpr double kMaxReturnDistance = 0.2;
  const std::size_t n = cloud.size();
  if (n < 3 || !lift.complete()) return std::nullopt;

  std::vector<std::pair<double, std::size_t>> near;
  near.reserve(n);
  const auto v0 = cloud.vector(0);
  for (std::size_t s = 1; s < n; ++s) {
    const double d = embedded_distance(v0, cloud.vector(s), cloud.component_metric);
    if (d < kMaxReturnDistance) near.emplace_back(d, s);
  }
  const std::size_t keep = std::min(near.size(), kReturns);
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(keep), near.end());
  near.resize(keep);
  if (near.size() < 2) return std::nullopt;

  // Prefix sums of the lift give the total lifted angle up to each return.
  std::vector<double> v;
  std::vector<double> steps;
  {
    std::vector<std::size_t> returns;
    for (const auto& [d, s] : near) returns.push_back(s);
    std::sort(returns.begin(), returns.end());
    CompensatedSum<double> total;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n && next < returns.size(); ++i) {
      if (i == returns[next]) {
        const double s = static_cast<double>(returns[next]);
        v.push_back(s * unreduced_rate - std::round(total.value()));
        steps.push_back(s);
        ++next;
      }
      total.add(lift.delta_hat(i));
    }
  }

  std::int64_t g = 0;
  bool any_usable = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double d = steps[j] * v[i] - steps[i] * v[j];
      const double r = std::round(d);
      if (std::abs(d - r) >= 0.1) continue;
      any_usable = true;
      g = std::gcd(g, static_cast<std::int64_t>(std::abs(r)));
    }
  }
  if (!any_usable) return std::nullopt;
  return static_cast<int>(g);
}

}  // namespace rotrate
