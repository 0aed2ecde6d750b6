#pragma once

// Synthetic data shared by several test files.

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rotrate/lifted_series.hpp"
#include "rotrate/projections.hpp"
#include "rotrate/torus.hpp"

namespace fixture {

inline const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
inline const rotrate::PlanarPoint kFishP{8.25, 4.4};
inline const rotrate::PlanarPoint kFlowerP{0.5, 1.5};

inline std::vector<rotrate::PlanarPoint> golden_points(const rotrate::FourierCurve& c,
                                                       std::size_t n) {
  std::vector<rotrate::PlanarPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = rotrate::eval_fourier(c, rotrate::rigid_orbit_point(rotrate::RotationVector({kGolden}),
                                                                 rotrate::TorusPoint({0.0}),
                                                                 static_cast<long long>(i))[0]);
  }
  return out;
}

inline std::vector<double> golden_angles(const rotrate::FourierCurve& c, rotrate::PlanarPoint p,
                                         std::size_t n) {
  const auto pts = golden_points(c, n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rotrate::angle_from_reference(pts[i], p);
  return out;
}

inline std::vector<rotrate::TorusPoint> golden_thetas(std::size_t n) {
  return rotrate::rigid_orbit(rotrate::RotationVector({kGolden}), rotrate::TorusPoint({0.0}),
                              n - 1);
}

/// LiftedSeries whose offsets reproduce the given lift values.
inline rotrate::LiftedSeries lift_from_hats(const std::vector<double>& deltas,
                                            const std::vector<double>& hats) {
  rotrate::LiftedSeries lift(deltas);
  for (std::size_t n = 0; n < deltas.size(); ++n) {
    lift.offsets[n] = static_cast<std::int64_t>(std::llround(hats[n] - deltas[n]));
  }
  return lift;
}

}  // namespace fixture
