#include "rotrate/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rotrate/errors.hpp"
#include "rotrate/torus.hpp"

namespace rotrate {

std::size_t LiftedSeries::assigned_count() const {
  return static_cast<std::size_t>(
      std::count_if(offsets.begin(), offsets.end(), [](const auto& m) { return m.has_value(); }));
}

std::vector<double> LiftedSeries::delta_hats() const {
  if (!complete()) throw UsageError("lift is not fully assigned");
  std::vector<double> out(size());
  for (std::size_t n = 0; n < size(); ++n) out[n] = delta_hat(n);
  return out;
}

std::vector<std::int64_t> LiftedSeries::offset_values() const {
  if (!complete()) throw UsageError("lift is not fully assigned");
  std::vector<std::int64_t> out(size());
  for (std::size_t n = 0; n < size(); ++n) out[n] = *offsets[n];
  return out;
}

namespace {

void check_config(std::size_t n_obs, std::size_t D, const EmbeddingConfig& config) {
  if (config.K < 1) throw UsageError("delay count K must be >= 1");
  if (n_obs <= config.K) {
    throw UsageError("need N > K observations (N = " + std::to_string(n_obs) +
                     ", K = " + std::to_string(config.K) + ")");
  }
  if (config.check_embedding_dimension && config.K * D < 2 * config.d_assumed + 1) {
    throw ConfigurationError("K*D = " + std::to_string(config.K * D) + " < 2d+1 = " +
                             std::to_string(2 * config.d_assumed + 1));
  }
}

std::size_t cloud_size(std::size_t n_obs, std::size_t K) {
  return std::min(n_obs - K + 1, n_obs - 1);
}

}  // namespace

DelayCloud build_delay_cloud(std::span<const double> obs, const EmbeddingConfig& config) {
  check_config(obs.size(), 1, config);
  for (const double v : obs) {
    if (!std::isfinite(v)) throw DomainError("build_delay_cloud: non-finite observation");
    if (config.component_metric == ComponentMetric::circle && (v < 0.0 || v >= 1.0)) {
      throw UsageError("build_delay_cloud: circle observation outside [0,1)");
    }
  }
  DelayCloud cloud;
  cloud.K = config.K;
  cloud.D = 1;
  cloud.component_metric = config.component_metric;
  const std::size_t count = cloud_size(obs.size(), config.K);
  cloud.coords.reserve(count * config.K);
  cloud.deltas.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t j = 0; j < config.K; ++j) cloud.coords.push_back(obs[n + j]);
    cloud.deltas.push_back(mod1(obs[n + 1] - obs[n]));
  }
  return cloud;
}

DelayCloud build_delay_cloud(std::span<const PlanarPoint> points,
                             std::span<const double> angles,
                             const EmbeddingConfig& config) {
  if (points.size() != angles.size()) {
    throw UsageError("build_delay_cloud: points and angles differ in length");
  }
  check_config(points.size(), 2, config);
  for (const double a : angles) {
    if (!std::isfinite(a) || a < 0.0 || a >= 1.0) {
      throw UsageError("build_delay_cloud: angle outside [0,1)");
    }
  }
  DelayCloud cloud;
  cloud.K = config.K;
  cloud.D = 2;
  cloud.component_metric = ComponentMetric::euclidean;
  const std::size_t count = cloud_size(points.size(), config.K);
  cloud.coords.reserve(count * config.K * 2);
  cloud.deltas.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t j = 0; j < config.K; ++j) {
      cloud.coords.push_back(points[n + j].x);
      cloud.coords.push_back(points[n + j].y);
    }
    cloud.deltas.push_back(mod1(angles[n + 1] - angles[n]));
  }
  return cloud;
}

double embedded_distance(std::span<const double> u, std::span<const double> v,
                         ComponentMetric metric) {
  if (u.size() != v.size()) throw UsageError("embedded_distance: length mismatch");
  double sum = 0.0;
  if (metric == ComponentMetric::circle) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double c = circle_distance(u[i], v[i]);
      sum += c * c;
    }
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double c = u[i] - v[i];
      sum += c * c;
    }
  }
  return std::sqrt(sum);
}

double gamma_distance(const DelayCloud& cloud, std::size_t a, double lift_a,
                      std::size_t b, double lift_b) {
  const double e = embedded_distance(cloud.vector(a), cloud.vector(b), cloud.component_metric);
  return std::hypot(e, lift_a - lift_b);
}

double estimate_separation(const DelayCloud& cloud, const LiftedSeries& lift,
                           std::size_t max_sources) {
  if (lift.size() != cloud.size()) {
    throw UsageError("estimate_separation: lift and cloud differ in length");
  }
  const std::vector<double> hat = lift.delta_hats();
  const std::size_t n = hat.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return hat[a] < hat[b] || (hat[a] == hat[b] && a < b);
  });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = hat[order[i]];

  const std::size_t stride =
      (max_sources == 0 || n <= max_sources) ? 1 : (n + max_sources - 1) / max_sources;
  const std::size_t width = cloud.width();
  const bool circle = cloud.component_metric == ComponentMetric::circle;

  // A point and its own translate by 1.
  double best = 1.0;
  auto consider = [&](std::size_t a, std::size_t b, double gap) {
    double sum = gap * gap;
    const double limit = best * best;
    const double* va = cloud.coords.data() + a * width;
    const double* vb = cloud.coords.data() + b * width;
    for (std::size_t i = 0; i < width && sum < limit; ++i) {
      double d = std::abs(va[i] - vb[i]);
      if (circle && d > 0.5) d = 1.0 - d;
      sum += d * d;
    }
    if (sum < limit) best = std::sqrt(sum);
  };
  // Negative j is the same pair with roles swapped, so j = 1, 2 suffice.
  for (int j = 1; j <= 2; ++j) {
    for (std::size_t n1 = 0; n1 < n; n1 += stride) {
      const double target = hat[n1] + j;
      const auto start = std::lower_bound(sorted.begin(), sorted.end(), target) - sorted.begin();
      for (auto i = start; i < static_cast<std::ptrdiff_t>(n); ++i) {
        if (sorted[i] - target >= best) break;
        consider(n1, order[i], sorted[i] - target);
      }
      for (auto i = start - 1; i >= 0; --i) {
        if (target - sorted[i] >= best) break;
        consider(n1, order[i], sorted[i] - target);
      }
    }
  }
  return best;
}

}  // namespace rotrate
