#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rotrate/compensated.hpp"

namespace rotrate {

/// Exponent p of the bump weight. Any p >= 1 is accepted.
struct WeightParams {
  int p = 1;
};

/// (N, value) pair recorded while averaging.
using Checkpoint = std::pair<std::size_t, double>;

struct AverageReport {
  double value = 0.0;
  std::size_t n_used = 0;
  /// Strictly increasing in N; the last entry is (n_used, value).
  std::vector<Checkpoint> partial_values;
};

/// w(t) = exp(-1/(t^p (1-t)^p)) on (0,1), zero elsewhere.
double weight(double t, WeightParams params);

/// Plain mean with left-to-right compensated summation.
double birkhoff_average(std::span<const double> f_values);

/// Weighted mean sum_n w(n/N) f_n / sum_n w(n/N), n = 0..N-1, over the whole
/// series. Checkpoints are recorded at 10, 100, ... below N and at N.
AverageReport weighted_birkhoff_average(std::span<const double> f_values,
                                        WeightParams params);

/// Weighted average of the first N values for each N in checkpoints.
std::vector<Checkpoint> convergence_curve(std::span<const double> f_values,
                                          WeightParams params,
                                          std::span<const std::size_t> checkpoints);

/// Powers of ten in [10, n) followed by n.
std::vector<std::size_t> decade_checkpoints(std::size_t n);

/// Sum of the normalized weights for a given N; equals 1 up to rounding.
double normalized_weight_sum(std::size_t n, WeightParams params);

namespace detail {

void validate_weight_params(WeightParams params);

/// Scalar-generic kernel shared by the double and extended-precision paths.
/// exp_fn must evaluate the exponential in type T.
template <typename T, typename ExpFn>
T weighted_mean(std::span<const T> f, int p, ExpFn exp_fn) {
  const std::size_t n = f.size();
  CompensatedSum<T> num;
  CompensatedSum<T> den;
  const T nn = static_cast<T>(n);
  for (std::size_t i = 1; i < n; ++i) {
    const T t = static_cast<T>(i) / nn;
    T base = t * (T(1) - t);
    T prod = base;
    for (int k = 1; k < p; ++k) prod *= base;
    const T w = exp_fn(-T(1) / prod);
    num.add(w * f[i]);
    den.add(w);
  }
  return num.value() / den.value();
}

}  // namespace detail
}  // namespace rotrate
