#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rotrate {

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

struct ReferencePoint {
  PlanarPoint point;
  std::optional<int> expected_winding;
};

/// gamma(theta) = sum_k c_k z^k with z = exp(2 pi i theta).
struct FourierCurve {
  std::vector<std::pair<int, std::complex<double>>> coefficients;
};

FourierCurve fish_curve();
/// (3/4) z + z^6
FourierCurve flower_curve();

PlanarPoint eval_fourier(const FourierCurve& curve, double theta);

/// Angle of g - P in revolutions, in [0,1).
double angle_from_reference(PlanarPoint g, PlanarPoint p);
inline double angle_from_reference(PlanarPoint g, const ReferencePoint& p) {
  return angle_from_reference(g, p.point);
}

/// Increment b - a reduced to (-1/2, 1/2].
double signed_increment(double a, double b);

/// Winding number of the closed polygon through the samples (the last sample
/// is joined back to the first). Throws UndersampledError when an angular
/// step exceeds 0.45 rev or the total is not within 0.01 of an integer, and
/// DegeneratePointError when P is within 1e-9 of a sample.
int winding_number(std::span<const PlanarPoint> curve_samples, const ReferencePoint& p);

/// Samples curve on a uniform grid, starting at 10^4 points and doubling until
/// every angular step about P is below 1/4 rev.
int winding_number(const FourierCurve& curve, const ReferencePoint& p);

std::vector<PlanarPoint> sample_curve(const FourierCurve& curve, std::size_t n);

/// (s_{n-1}, s_n) for n = 1..N-1.
std::vector<PlanarPoint> delay_pair_series(std::span<const double> scalar_series);

using Vec3 = std::array<double, 3>;

/// ((Re g + 2) cos 2 pi y, (Re g + 2) sin 2 pi y, Im g) with g = gamma(theta).
Vec3 torus_map_3d(const FourierCurve& gamma, double theta, double y);

/// Rotates f by alpha in the f2-f3 plane and returns (sqrt(h1^2 + h2^2), f3).
PlanarPoint tilted_radial_projection(const Vec3& f, double alpha);

/// The tilt used by the torus experiments, 0.05 pi.
inline constexpr double kTorusTilt = 0.05 * 3.14159265358979323846;

}  // namespace rotrate
