#include "rotrate/compensated.hpp"

#include <cmath>

namespace rotrate {

double fractional_orbit_coordinate(double offset, double step, long long n) {
  double p, e;
  two_product(static_cast<double>(n), step, p, e);
  const double frac = p - std::floor(p);
  double s, e2;
  two_sum(frac, offset, s, e2);
  const double r = s + (e + e2);
  double f = r - std::floor(r);
  if (f >= 1.0) f = 0.0;
  return f;
}

}  // namespace rotrate
