#include "rotrate/continuation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>
#include <unordered_map>

#include "rotrate/errors.hpp"

namespace rotrate {
namespace {

constexpr std::size_t kMaxGridDims = 4;
using CellKey = std::array<std::int64_t, kMaxGridDims>;

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto v : k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// Uniform grid over the leading delay coordinates. Cells are at least delta
// wide, so every point within delta of a query lies in a neighbouring cell.
// Points are stored cell by cell so a cell's coordinates are contiguous.
class NeighborGrid {
 public:
  NeighborGrid(const DelayCloud& cloud, double delta)
      : width_(cloud.width()),
        dims_(std::min(cloud.width(), kMaxGridDims)),
        circle_(cloud.component_metric == ComponentMetric::circle) {
    if (circle_) {
      cells_per_unit_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(1.0 / delta)));
    } else {
      cell_size_ = delta;
    }
    const std::size_t n = cloud.size();
    keys_.resize(n);
    for (std::size_t i = 0; i < n; ++i) keys_[i] = key_of(cloud.vector(i).data());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::uint32_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
      return keys_[a] < keys_[b] || (keys_[a] == keys_[b] && a < b);
    });
    coords_.resize(n * width_);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = cloud.vector(order_[i]);
      std::copy(v.begin(), v.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i * width_));
    }
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && keys_[order_[j]] == keys_[order_[i]]) ++j;
      ranges_.emplace(keys_[order_[i]], std::make_pair(i, j));
      i = j;
    }
  }

  /// Calls fn(index, coordinates) for every point in the 3^dims cells around n.
  template <typename Fn>
  void for_each_candidate(std::size_t n, Fn&& fn) const {
    const CellKey& base = keys_[n];
    CellKey seen[81];
    std::size_t n_seen = 0;
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims_; ++d) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      CellKey key{};
      for (std::size_t d = 0; d < dims_; ++d) {
        key[d] = base[d] + static_cast<std::int64_t>(c % 3) - 1;
        c /= 3;
        if (circle_) key[d] = ((key[d] % cells_per_unit_) + cells_per_unit_) % cells_per_unit_;
      }
      if (circle_ && cells_per_unit_ < 3) {
        if (std::find(seen, seen + n_seen, key) != seen + n_seen) continue;
        seen[n_seen++] = key;
      }
      const auto it = ranges_.find(key);
      if (it == ranges_.end()) continue;
      for (std::size_t i = it->second.first; i < it->second.second; ++i) {
        fn(static_cast<std::size_t>(order_[i]), coords_.data() + i * width_);
      }
    }
  }

 private:
  CellKey key_of(const double* v) const {
    CellKey key{};
    for (std::size_t d = 0; d < dims_; ++d) {
      if (circle_) {
        key[d] = std::min<std::int64_t>(
            cells_per_unit_ - 1, static_cast<std::int64_t>(std::floor(v[d] * cells_per_unit_)));
      } else {
        key[d] = static_cast<std::int64_t>(std::floor(v[d] / cell_size_));
      }
    }
    return key;
  }

  std::size_t width_;
  std::size_t dims_;
  bool circle_;
  std::int64_t cells_per_unit_ = 1;
  double cell_size_ = 1.0;
  std::vector<CellKey> keys_;
  std::vector<std::uint32_t> order_;
  std::vector<double> coords_;
  std::unordered_map<CellKey, std::pair<std::size_t, std::size_t>, CellKeyHash> ranges_;
};

// Squared embedded distance, abandoned once it reaches limit_sq.
inline double bounded_distance_sq(const double* a, const double* b, std::size_t width,
                                  bool circle, double limit_sq) {
  double sum = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    double d = std::abs(a[i] - b[i]);
    if (circle && d > 0.5) d = 1.0 - d;
    sum += d * d;
    if (sum >= limit_sq) return limit_sq;
  }
  return sum;
}

}  // namespace

ContinuationResult continue_lift(const DelayCloud& cloud, const ContinuationParams& params) {
  if (cloud.size() == 0) throw UsageError("continue_lift: empty cloud");
  if (!(params.delta > 0.0) || !(params.delta < 0.5)) {
    throw UsageError("continue_lift: delta must lie in (0, 1/2)");
  }
  const std::size_t n_total = cloud.size();
  ContinuationResult result;
  result.lift = LiftedSeries(cloud.deltas);
  auto& offsets = result.lift.offsets;

  const std::size_t width = cloud.width();
  const bool circle = cloud.component_metric == ComponentMetric::circle;
  const double delta_sq = params.delta * params.delta;
  std::optional<NeighborGrid> grid;
  if (!params.exhaustive) grid.emplace(cloud, params.delta);

  std::vector<char> expanded(n_total, 0);
  std::deque<std::size_t> frontier;
  offsets[0] = 0;
  frontier.push_back(0);
  std::size_t assigned = 1;

  while (!frontier.empty()) {
    if (params.max_rounds != 0 && result.expansions >= params.max_rounds) break;
    std::size_t n1;
    if (params.order == FrontierOrder::fifo) {
      n1 = frontier.front();
      frontier.pop_front();
    } else {
      n1 = frontier.back();
      frontier.pop_back();
    }
    ++result.expansions;
    expanded[n1] = 1;
    const double hat1 = result.lift.delta_hat(n1);
    const double* v1 = cloud.coords.data() + n1 * width;
    std::size_t examined = 0;

    auto visit = [&](std::size_t n2, const double* v2) {
      // Pairs with an expanded index were checked when it was expanded.
      if (expanded[n2]) return;
      if (params.neighbor_budget != 0 && examined >= params.neighbor_budget) return;
      ++examined;
      const double e_sq =
          bounded_distance_sq(v1, v2, width, circle, delta_sq);
      if (e_sq >= delta_sq) return;
      const double k = std::round(hat1 - cloud.deltas[n2]);
      const double gap = cloud.deltas[n2] + k - hat1;
      const double dist_sq = e_sq + gap * gap;
      if (dist_sq >= delta_sq) return;
      const double dist = std::sqrt(dist_sq);
      const auto k_int = static_cast<std::int64_t>(k);
      if (offsets[n2]) {
        if (*offsets[n2] != k_int) {
          throw AmbiguityError(
              n1, n2,
              "lift ambiguity: indices " + std::to_string(n1) + " and " + std::to_string(n2) +
                  " are within delta = " + std::to_string(params.delta) +
                  " of different translates; reduce delta");
        }
        return;
      }
      offsets[n2] = k_int;
      ++assigned;
      frontier.push_back(n2);
      if (params.record_edges) {
        const double runner_gap = gap + (gap > 0 ? -1.0 : 1.0);
        result.edges.push_back({n1, n2, dist, std::sqrt(e_sq + runner_gap * runner_gap)});
      }
    };

    if (grid) {
      grid->for_each_candidate(n1, visit);
    } else {
      for (std::size_t n2 = 0; n2 < n_total; ++n2) visit(n2, cloud.coords.data() + n2 * width);
    }
  }

  result.complete = assigned == n_total;
  result.assigned_fraction = static_cast<double>(assigned) / static_cast<double>(n_total);
  return result;
}

RateResult rotation_rate(const LiftedSeries& lift, WeightParams p) {
  if (!lift.complete()) throw UsageError("rotation_rate: lift is incomplete");
  const auto hats = lift.delta_hats();
  RateResult r;
  r.report = weighted_birkhoff_average(hats, p);
  r.unreduced = r.report.value;
  r.rate = mod1(r.unreduced);
  return r;
}

namespace {

void normalize_gauge(LiftedSeries& lift) {
  const std::int64_t m0 = *lift.offsets[0];
  for (auto& m : lift.offsets) *m -= m0;
}

// Offset that keeps the lift continuous from `from` to `to`.
std::int64_t continue_offset(const LiftedSeries& lift, std::size_t from, std::size_t to) {
  const double hat = lift.delta_hat(from);
  const double k = std::round(hat - lift.deltas[to]);
  if (std::abs(lift.deltas[to] + k - hat) > 0.25) {
    throw OracleError("lift_oracle: jump of " +
                      std::to_string(std::abs(lift.deltas[to] + k - hat)) +
                      " between neighbouring theta samples " + std::to_string(from) + " and " +
                      std::to_string(to));
  }
  return static_cast<std::int64_t>(k);
}

}  // namespace

LiftedSeries lift_oracle(const std::vector<TorusPoint>& theta, const std::vector<double>& deltas) {
  if (theta.size() != deltas.size()) throw UsageError("lift_oracle: length mismatch");
  if (theta.empty()) throw UsageError("lift_oracle: empty input");
  const std::size_t n_total = theta.size();
  const std::size_t d = theta[0].dim();
  LiftedSeries lift(deltas);

  if (d == 1) {
    std::vector<std::size_t> order(n_total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return theta[a][0] < theta[b][0]; });
    lift.offsets[order[0]] = 0;
    for (std::size_t i = 1; i < n_total; ++i) {
      lift.offsets[order[i]] = continue_offset(lift, order[i - 1], order[i]);
    }
    // Closing the circle must reproduce the starting offset.
    if (n_total > 1 && continue_offset(lift, order.back(), order.front()) != *lift.offsets[order[0]]) {
      throw OracleError("lift_oracle: lift does not close around the circle");
    }
    normalize_gauge(lift);
    return lift;
  }

  // d >= 2: breadth-first over a uniform grid in theta.
  const auto cells = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n_total), 1.0 / d) / 3.0)));
  const double radius = 1.0 / static_cast<double>(cells);
  auto cell_index = [&](const TorusPoint& p) {
    std::int64_t idx = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const auto c = std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>(p[j] * cells));
      idx = idx * cells + c;
    }
    return idx;
  };
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  for (std::size_t n = 0; n < n_total; ++n) buckets[cell_index(theta[n])].push_back(n);

  std::deque<std::size_t> frontier{0};
  lift.offsets[0] = 0;
  std::size_t assigned = 1;
  std::size_t neighbours = 1;
  for (std::size_t j = 0; j < d; ++j) neighbours *= 3;
  while (!frontier.empty()) {
    const std::size_t n1 = frontier.front();
    frontier.pop_front();
    std::vector<std::int64_t> base(d);
    for (std::size_t j = 0; j < d; ++j) {
      base[j] = std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>(theta[n1][j] * cells));
    }
    std::vector<std::int64_t> seen;
    for (std::size_t code = 0; code < neighbours; ++code) {
      std::size_t c = code;
      std::int64_t idx = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const std::int64_t v = ((base[j] + static_cast<std::int64_t>(c % 3) - 1) % cells + cells) % cells;
        c /= 3;
        idx = idx * cells + v;
      }
      if (std::find(seen.begin(), seen.end(), idx) != seen.end()) continue;
      seen.push_back(idx);
      const auto it = buckets.find(idx);
      if (it == buckets.end()) continue;
      for (const std::size_t n2 : it->second) {
        if (n2 == n1 || torus_distance(theta[n1], theta[n2]) >= radius) continue;
        const std::int64_t k = continue_offset(lift, n1, n2);
        if (lift.offsets[n2]) {
          if (*lift.offsets[n2] != k) {
            throw OracleError("lift_oracle: inconsistent offsets at index " + std::to_string(n2));
          }
          continue;
        }
        lift.offsets[n2] = k;
        ++assigned;
        frontier.push_back(n2);
      }
    }
  }
  if (assigned != n_total) {
    throw OracleError("lift_oracle: theta samples do not connect (" + std::to_string(assigned) +
                      " of " + std::to_string(n_total) + " reached)");
  }
  normalize_gauge(lift);
  return lift;
}

}  // namespace rotrate
