#include "rotrate/torus.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "rotrate/compensated.hpp"
#include "rotrate/errors.hpp"

namespace rotrate {
namespace {

__extension__ typedef __int128 int128;

void require_unit_interval(std::span<const double> values, const char* what) {
  if (values.empty()) {
    throw UsageError(std::string(what) + ": dimension must be at least 1");
  }
  for (const double v : values) {
    if (!std::isfinite(v) || v < 0.0 || v >= 1.0) {
      std::ostringstream os;
      os << what << ": coordinate " << v << " outside [0,1)";
      throw UsageError(os.str());
    }
  }
}

// Fractional part of a double-double value.
double frac(const DoubleDouble& x) {
  const double whole = std::floor(x.hi);
  return mod1((x.hi - whole) + x.lo);
}

}  // namespace

double mod1(double x) {
  if (!std::isfinite(x)) throw DomainError("mod1: non-finite input");
  const double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return r >= 1.0 ? 0.0 : r;
}

double circle_distance(double a, double b) {
  // |a - b| rather than mod1(a - b) keeps the result exactly symmetric.
  double d = std::abs(a - b);
  if (!std::isfinite(d)) throw DomainError("circle_distance: non-finite input");
  if (d >= 1.0) d = mod1(d);
  return std::min(d, 1.0 - d);
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  require_unit_interval(coords_, "TorusPoint");
}

RotationVector::RotationVector(std::vector<double> rho) : rho_(std::move(rho)) {
  require_unit_interval(rho_, "RotationVector");
}

std::int64_t integer_determinant(std::size_t dim,
                                 std::span<const std::int64_t> entries) {
  if (dim == 0 || entries.size() != dim * dim) {
    throw UsageError("integer_determinant: entries must form a square matrix");
  }
  std::vector<int128> m(entries.begin(), entries.end());
  auto at = [&](std::size_t r, std::size_t c) -> int128& { return m[r * dim + c]; };
  int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < dim; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < dim && at(swap_row, k) == 0) ++swap_row;
      if (swap_row == dim) return 0;
      for (std::size_t c = 0; c < dim; ++c) std::swap(at(k, c), at(swap_row, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < dim; ++i) {
      for (std::size_t j = k + 1; j < dim; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return static_cast<std::int64_t>(sign * at(dim - 1, dim - 1));
}

UnimodularMatrix::UnimodularMatrix(std::size_t dim, std::vector<std::int64_t> entries)
    : dim_(dim), entries_(std::move(entries)) {
  const std::int64_t det = integer_determinant(dim_, entries_);
  if (det != 1 && det != -1) {
    throw UsageError("UnimodularMatrix: |det| = " + std::to_string(det < 0 ? -det : det) +
                     ", expected 1");
  }
}

UnimodularMatrix UnimodularMatrix::identity(std::size_t dim) {
  std::vector<std::int64_t> e(dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1;
  return UnimodularMatrix(dim, std::move(e));
}

UnimodularMatrix UnimodularMatrix::shear_upper(std::int64_t m) {
  return UnimodularMatrix(2, {1, m, 0, 1});
}

UnimodularMatrix UnimodularMatrix::shear_lower(std::int64_t k) {
  return UnimodularMatrix(2, {1, 0, k, 1});
}

std::int64_t UnimodularMatrix::determinant() const {
  return integer_determinant(dim_, entries_);
}

UnimodularMatrix UnimodularMatrix::operator*(const UnimodularMatrix& rhs) const {
  if (rhs.dim_ != dim_) throw UsageError("UnimodularMatrix: dimension mismatch");
  std::vector<std::int64_t> out(dim_ * dim_, 0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k) out[i * dim_ + j] += (*this)(i, k) * rhs(k, j);
  return UnimodularMatrix(dim_, std::move(out));
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim() != b.dim()) throw UsageError("torus_distance: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += circle_distance(a[i], b[i]);
  return sum;
}

TorusPoint rigid_orbit_point(const RotationVector& rho, const TorusPoint& theta0,
                             long long n) {
  if (rho.dim() != theta0.dim()) throw UsageError("rigid_orbit: dimension mismatch");
  std::vector<double> c(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    c[i] = fractional_orbit_coordinate(theta0[i], rho[i], n);
  }
  return TorusPoint(std::move(c));
}

std::vector<TorusPoint> rigid_orbit(const RotationVector& rho, const TorusPoint& theta0,
                                    std::size_t n_steps) {
  if (n_steps < 1) throw UsageError("rigid_orbit: n_steps must be >= 1");
  std::vector<TorusPoint> out;
  out.reserve(n_steps + 1);
  for (std::size_t n = 0; n <= n_steps; ++n) {
    out.push_back(rigid_orbit_point(rho, theta0, static_cast<long long>(n)));
  }
  return out;
}

RotationVector apply_unimodular(const UnimodularMatrix& a, const RotationVector& rho) {
  if (a.dim() != rho.dim()) throw UsageError("apply_unimodular: dimension mismatch");
  std::vector<double> out(rho.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    DoubleDouble acc;
    for (std::size_t j = 0; j < a.dim(); ++j) {
      acc += DoubleDouble::from_product(static_cast<double>(a(i, j)), rho[j]);
    }
    out[i] = frac(acc);
  }
  return RotationVector(std::move(out));
}

std::optional<std::pair<std::int64_t, std::int64_t>> rational_approximation(
    double x, std::int64_t max_denominator, double tolerance) {
  if (!std::isfinite(x)) throw DomainError("rational_approximation: non-finite input");
  for (std::int64_t q = 1; q <= max_denominator; ++q) {
    const double p = std::round(x * static_cast<double>(q));
    if (std::abs(x - p / static_cast<double>(q)) < tolerance) {
      return std::make_pair(static_cast<std::int64_t>(p), q);
    }
  }
  return std::nullopt;
}

bool passes_irrationality_check(const RotationVector& rho, std::int64_t max_denominator,
                                double tolerance) {
  for (const double c : rho.coords()) {
    if (rational_approximation(c, max_denominator, tolerance)) return false;
  }
  return true;
}

RepresentationSamples representation_samples(const RotationVector& rho,
                                             std::int64_t m_range,
                                             std::int64_t k_range) {
  if (rho.dim() != 2) {
    throw UsageError("representation_samples: only d = 2 is supported");
  }
  if (m_range < 0 || k_range < 0) {
    throw UsageError("representation_samples: ranges must be non-negative");
  }
  RepresentationSamples result;
  if (!passes_irrationality_check(rho)) {
    result.warning =
        "rotation vector has a coordinate within 1e-12 of a rational with "
        "denominator <= 1000; representations will not be dense";
  }
  result.points.reserve(static_cast<std::size_t>((2 * m_range + 1) * (2 * k_range + 1)));
  for (std::int64_t m = -m_range; m <= m_range; ++m) {
    for (std::int64_t k = -k_range; k <= k_range; ++k) {
      const UnimodularMatrix a =
          UnimodularMatrix::shear_upper(m) * UnimodularMatrix::shear_lower(k);
      result.points.push_back(apply_unimodular(a, rho));
    }
  }
  return result;
}

}  // namespace rotrate
