#pragma once

#include <cstddef>
#include <string>

#include "rotrate/birkhoff.hpp"
#include "rotrate/lifted_series.hpp"
#include "rotrate/projections.hpp"

namespace rotrate {

/// True when the library was built with binary128 (libquadmath) support.
bool extended_precision_available();

struct ExtendedRateReport {
  /// Rate and rotation number rendered with 36 significant digits.
  std::string rate;
  std::string rho;
  /// min(|rate - rho|, |rate - (1 - rho)|), rounded to double.
  double abs_error = 0.0;
  std::size_t n_used = 0;
};

/// Repeats the angle pipeline for gamma(n rho) with rho = (sqrt 5 - 1)/2 in
/// binary128: observations, increments and the weighted average are all
/// evaluated in 113-bit precision. Only the integer offsets are taken from
/// `lift`, a complete double-precision lift of the same orbit. Throws
/// UsageError when extended precision is unavailable.
ExtendedRateReport extended_golden_curve_rate(const FourierCurve& curve, PlanarPoint p,
                                              const LiftedSeries& lift, WeightParams weight);

}  // namespace rotrate
