#pragma once

#include <cmath>
#include <span>

namespace rotrate {

/// Error-free transformation a + b = s + e (Knuth two-sum).
template <typename T>
constexpr void two_sum(T a, T b, T& s, T& e) {
  s = a + b;
  const T bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

/// Error-free product a * b = p + e using a fused multiply-add.
inline void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

/// Neumaier-compensated running sum. Deterministic: the result depends only
/// on the order in which terms are added.
template <typename T = double>
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(T initial) : sum_(initial) {}

  constexpr void add(T x) {
    const T t = sum_ + x;
    if (abs_(sum_) >= abs_(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }

  constexpr T value() const { return sum_ + compensation_; }

 private:
  static constexpr T abs_(T x) { return x < T(0) ? -x : x; }

  T sum_{0};
  T compensation_{0};
};

template <typename T>
T compensated_sum(std::span<const T> values) {
  CompensatedSum<T> acc;
  for (const T v : values) acc.add(v);
  return acc.value();
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2. Only the operations the
/// library needs are provided: accumulation of doubles and rounding back.
struct DoubleDouble {
  double hi{0.0};
  double lo{0.0};

  static DoubleDouble from_sum(double a, double b) {
    DoubleDouble r;
    two_sum(a, b, r.hi, r.lo);
    return r;
  }

  static DoubleDouble from_product(double a, double b) {
    DoubleDouble r;
    two_product(a, b, r.hi, r.lo);
    return r;
  }

  DoubleDouble& operator+=(double x) {
    double s, e;
    two_sum(hi, x, s, e);
    e += lo;
    two_sum(s, e, hi, lo);
    return *this;
  }

  DoubleDouble& operator+=(const DoubleDouble& x) {
    double s, e;
    two_sum(hi, x.hi, s, e);
    e += lo + x.lo;
    two_sum(s, e, hi, lo);
    return *this;
  }

  double value() const { return hi + lo; }
};

/// Fractional part of (offset + n * step) with O(ulp) error independent of n.
/// The product n*step is split exactly with an FMA; subtracting its integer
/// part is exact, so only the final additions round.
double fractional_orbit_coordinate(double offset, double step, long long n);

}  // namespace rotrate
