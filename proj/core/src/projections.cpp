#include "rotrate/projections.hpp"

#include <cmath>
#include <numbers>

#include "rotrate/errors.hpp"
#include "rotrate/torus.hpp"

namespace rotrate {

FourierCurve fish_curve() {
  return FourierCurve{{{-1, {1.4, -2.0}},
                       {0, {4.1, 1.34}},
                       {1, {-2.0, 2.412}},
                       {2, {-2.5, -1.752}}}};
}

FourierCurve flower_curve() { return FourierCurve{{{1, {0.75, 0.0}}, {6, {1.0, 0.0}}}}; }

PlanarPoint eval_fourier(const FourierCurve& curve, double theta) {
  if (curve.coefficients.empty()) throw UsageError("eval_fourier: empty curve");
  std::complex<double> sum{0.0, 0.0};
  for (const auto& [k, c] : curve.coefficients) {
    // Reduce k*theta first so the trig argument stays in [0, 2 pi).
    const double a = 2.0 * std::numbers::pi * mod1(static_cast<double>(k) * theta);
    sum += c * std::complex<double>(std::cos(a), std::sin(a));
  }
  return {sum.real(), sum.imag()};
}

double angle_from_reference(PlanarPoint g, PlanarPoint p) {
  const double dx = g.x - p.x;
  const double dy = g.y - p.y;
  if (std::hypot(dx, dy) <= 1e-12) {
    throw DegeneratePointError("angle_from_reference: point coincides with reference");
  }
  return mod1(std::atan2(dy, dx) / (2.0 * std::numbers::pi));
}

double signed_increment(double a, double b) {
  const double d = mod1(b - a);
  return d > 0.5 ? d - 1.0 : d;
}

int winding_number(std::span<const PlanarPoint> samples, const ReferencePoint& p) {
  if (samples.size() < 3) throw UndersampledError("winding_number: need at least 3 samples");
  std::vector<double> angles(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::hypot(samples[i].x - p.point.x, samples[i].y - p.point.y) <= 1e-9) {
      throw DegeneratePointError("winding_number: reference point lies on the curve");
    }
    angles[i] = angle_from_reference(samples[i], p.point);
  }
  double total = 0.0;
  double max_step = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double step = signed_increment(angles[i], angles[(i + 1) % angles.size()]);
    max_step = std::max(max_step, std::abs(step));
    total += step;
  }
  if (max_step > 0.45) {
    throw UndersampledError("winding_number: angular step of " + std::to_string(max_step) +
                            " rev; sample more densely");
  }
  const double rounded = std::round(total);
  if (std::abs(total - rounded) >= 0.01) {
    throw UndersampledError("winding_number: residual " +
                            std::to_string(std::abs(total - rounded)) + " rev");
  }
  return static_cast<int>(rounded);
}

std::vector<PlanarPoint> sample_curve(const FourierCurve& curve, std::size_t n) {
  std::vector<PlanarPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = eval_fourier(curve, static_cast<double>(i) / static_cast<double>(n));
  }
  return out;
}

int winding_number(const FourierCurve& curve, const ReferencePoint& p) {
  constexpr std::size_t kMaxSamples = std::size_t{1} << 24;
  for (std::size_t n = 10000; n <= kMaxSamples; n *= 2) {
    const auto samples = sample_curve(curve, n);
    double max_step = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = angle_from_reference(samples[i], p.point);
      const double b = angle_from_reference(samples[(i + 1) % n], p.point);
      max_step = std::max(max_step, std::abs(signed_increment(a, b)));
    }
    if (max_step < 0.25) return winding_number(samples, p);
  }
  throw UndersampledError("winding_number: reference point too close to the curve");
}

std::vector<PlanarPoint> delay_pair_series(std::span<const double> s) {
  if (s.size() < 2) throw UsageError("delay_pair_series: need at least 2 values");
  std::vector<PlanarPoint> out;
  out.reserve(s.size() - 1);
  for (std::size_t n = 1; n < s.size(); ++n) out.push_back({s[n - 1], s[n]});
  return out;
}

Vec3 torus_map_3d(const FourierCurve& gamma, double theta, double y) {
  const PlanarPoint g = eval_fourier(gamma, theta);
  const double radius = g.x + 2.0;
  const double a = 2.0 * std::numbers::pi * mod1(y);
  return {radius * std::cos(a), radius * std::sin(a), g.y};
}

PlanarPoint tilted_radial_projection(const Vec3& f, double alpha) {
  const double h1 = f[0];
  const double h2 = std::cos(alpha) * f[1] - std::sin(alpha) * f[2];
  return {std::hypot(h1, h2), f[2]};
}

}  // namespace rotrate
