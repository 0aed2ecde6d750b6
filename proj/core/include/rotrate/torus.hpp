#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rotrate {

/// Reduces x to [0,1); x - mod1(x) is an integer. Throws DomainError for
/// non-finite input.
double mod1(double x);

/// Distance on the unit circle R/Z, in [0, 1/2].
double circle_distance(double a, double b);

/// Point on the d-torus, every coordinate in [0,1) revolutions.
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> coords);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// Rotation vector rho of the rigid rotation theta -> theta + rho mod 1.
class RotationVector {
 public:
  RotationVector() = default;
  explicit RotationVector(std::vector<double> rho);

  std::size_t dim() const { return rho_.size(); }
  double operator[](std::size_t i) const { return rho_[i]; }
  std::span<const double> coords() const { return rho_; }

  friend bool operator==(const RotationVector&, const RotationVector&) = default;

 private:
  std::vector<double> rho_;
};

/// Square integer matrix with determinant +1 or -1.
class UnimodularMatrix {
 public:
  /// Row-major entries; throws UsageError unless square with |det| = 1.
  UnimodularMatrix(std::size_t dim, std::vector<std::int64_t> entries);

  static UnimodularMatrix identity(std::size_t dim);
  /// [[1, m], [0, 1]]
  static UnimodularMatrix shear_upper(std::int64_t m);
  /// [[1, 0], [k, 1]]
  static UnimodularMatrix shear_lower(std::int64_t k);

  std::size_t dim() const { return dim_; }
  std::int64_t operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  std::int64_t determinant() const;

  UnimodularMatrix operator*(const UnimodularMatrix& rhs) const;

 private:
  std::size_t dim_;
  std::vector<std::int64_t> entries_;
};

/// Exact determinant of a row-major integer matrix (fraction-free Bareiss).
std::int64_t integer_determinant(std::size_t dim,
                                 std::span<const std::int64_t> entries);

/// Translation-invariant torus metric: sum of per-coordinate circle distances.
double torus_distance(const TorusPoint& a, const TorusPoint& b);

/// theta_n = theta0 + n*rho mod 1 for n = 0..n_steps. Each point is computed
/// directly from n, so the error does not grow with n.
std::vector<TorusPoint> rigid_orbit(const RotationVector& rho,
                                    const TorusPoint& theta0,
                                    std::size_t n_steps);

/// Single point of the rigid orbit.
TorusPoint rigid_orbit_point(const RotationVector& rho, const TorusPoint& theta0,
                             long long n);

/// A*rho mod 1 (the rotation vector in the coordinates A*theta).
RotationVector apply_unimodular(const UnimodularMatrix& a,
                                const RotationVector& rho);

/// Best rational p/q with q <= max_denominator and |x - p/q| < tolerance.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_approximation(
    double x, std::int64_t max_denominator = 1000, double tolerance = 1e-12);

/// Advisory irrationality check: no coordinate is within tolerance of a
/// rational with small denominator. Irrationality itself is not decidable
/// in floating point.
bool passes_irrationality_check(const RotationVector& rho,
                                std::int64_t max_denominator = 1000,
                                double tolerance = 1e-12);

struct RepresentationSamples {
  std::vector<RotationVector> points;
  std::optional<std::string> warning;
};

/// {B_m C_k rho mod 1 : |m| <= m_range, |k| <= k_range} for d = 2, with
/// B_m = [[1,m],[0,1]] and C_k = [[1,0],[k,1]].
RepresentationSamples representation_samples(const RotationVector& rho,
                                             std::int64_t m_range,
                                             std::int64_t k_range);

}  // namespace rotrate
