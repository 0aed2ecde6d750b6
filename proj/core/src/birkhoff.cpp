#include "rotrate/birkhoff.hpp"

#include <cmath>
#include <string>

#include "rotrate/errors.hpp"

namespace rotrate {

namespace detail {
void validate_weight_params(WeightParams params) {
  if (params.p < 1) throw UsageError("weight exponent p must be >= 1");
}
}  // namespace detail

namespace {

double exp_double(double x) { return std::exp(x); }

void require_finite(std::span<const double> f) {
  for (const double v : f) {
    if (!std::isfinite(v)) throw DomainError("average: non-finite entry");
  }
}

}  // namespace

double weight(double t, WeightParams params) {
  detail::validate_weight_params(params);
  if (!std::isfinite(t)) throw DomainError("weight: non-finite t");
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double base = std::pow(t * (1.0 - t), params.p);
  return std::exp(-1.0 / base);
}

double birkhoff_average(std::span<const double> f_values) {
  if (f_values.empty()) throw UsageError("birkhoff_average: empty series");
  require_finite(f_values);
  return compensated_sum(f_values) / static_cast<double>(f_values.size());
}

std::vector<std::size_t> decade_checkpoints(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t c = 10; c < n; c *= 10) out.push_back(c);
  out.push_back(n);
  return out;
}

std::vector<Checkpoint> convergence_curve(std::span<const double> f_values,
                                          WeightParams params,
                                          std::span<const std::size_t> checkpoints) {
  detail::validate_weight_params(params);
  require_finite(f_values);
  std::vector<Checkpoint> out;
  out.reserve(checkpoints.size());
  std::size_t prev = 0;
  for (const std::size_t n : checkpoints) {
    if (n > f_values.size()) {
      throw UsageError("convergence_curve: checkpoint " + std::to_string(n) +
                       " exceeds series length " + std::to_string(f_values.size()));
    }
    if (n < 2) throw UsageError("convergence_curve: checkpoints must be >= 2");
    if (n <= prev) throw UsageError("convergence_curve: checkpoints must increase");
    prev = n;
    out.emplace_back(n, detail::weighted_mean<double>(f_values.first(n), params.p,
                                                      exp_double));
  }
  return out;
}

AverageReport weighted_birkhoff_average(std::span<const double> f_values,
                                        WeightParams params) {
  if (f_values.size() < 2) {
    throw UsageError("weighted_birkhoff_average: need N >= 2 (weight mass is zero)");
  }
  const auto checkpoints = decade_checkpoints(f_values.size());
  AverageReport report;
  report.partial_values = convergence_curve(f_values, params, checkpoints);
  report.value = report.partial_values.back().second;
  report.n_used = f_values.size();
  return report;
}

double normalized_weight_sum(std::size_t n, WeightParams params) {
  detail::validate_weight_params(params);
  if (n < 2) throw UsageError("normalized_weight_sum: need N >= 2");
  std::vector<double> w(n);
  CompensatedSum<double> den;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = weight(static_cast<double>(i) / static_cast<double>(n), params);
    den.add(w[i]);
  }
  const double total = den.value();
  CompensatedSum<double> acc;
  for (const double wi : w) acc.add(wi / total);
  return acc.value();
}

}  // namespace rotrate
