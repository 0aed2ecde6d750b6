#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace rotrate {

/// Angle increments Delta_n in [0,1) with integer offsets m_n; the lift is
/// Delta_n + m_n.
struct LiftedSeries {
  std::vector<double> deltas;
  std::vector<std::optional<std::int64_t>> offsets;

  LiftedSeries() = default;
  explicit LiftedSeries(std::vector<double> d)
      : deltas(std::move(d)), offsets(deltas.size()) {}

  std::size_t size() const { return deltas.size(); }
  std::size_t assigned_count() const;
  bool complete() const { return assigned_count() == size(); }
  bool assigned(std::size_t n) const { return offsets[n].has_value(); }
  double delta_hat(std::size_t n) const {
    return deltas[n] + static_cast<double>(*offsets[n]);
  }
  /// Throws UsageError unless complete.
  std::vector<double> delta_hats() const;
  /// Throws UsageError unless complete.
  std::vector<std::int64_t> offset_values() const;
};

}  // namespace rotrate
