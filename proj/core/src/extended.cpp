#include "rotrate/extended.hpp"

extern "C" {
#include <quadmath.h>
}

#include <vector>

#include "rotrate/errors.hpp"

namespace rotrate {
namespace {

using quad = __float128;

quad mod1q(quad x) {
  const quad r = x - floorq(x);
  return r >= 1 ? quad(0) : r;
}

std::string to_string(quad x) {
  char buf[64];
  quadmath_snprintf(buf, sizeof buf, "%.36Qg", x);
  return buf;
}

}  // namespace

bool extended_precision_available() { return true; }

ExtendedRateReport extended_golden_curve_rate(const FourierCurve& curve, PlanarPoint p,
                                              const LiftedSeries& lift, WeightParams weight) {
  detail::validate_weight_params(weight);
  if (!lift.complete()) throw UsageError("extended rate: lift is incomplete");
  const std::size_t n_lift = lift.size();
  const quad two_pi = 2 * M_PIq;
  const quad rho = (sqrtq(quad(5)) - 1) / 2;

  // Observations phi_0 .. phi_{n_lift}.
  std::vector<quad> phi(n_lift + 1);
  for (std::size_t n = 0; n <= n_lift; ++n) {
    const quad theta = mod1q(quad(n) * rho);
    quad re = 0, im = 0;
    for (const auto& [k, c] : curve.coefficients) {
      const quad a = two_pi * mod1q(quad(k) * theta);
      const quad cr = c.real(), ci = c.imag();
      const quad cs = cosq(a), sn = sinq(a);
      re += cr * cs - ci * sn;
      im += cr * sn + ci * cs;
    }
    phi[n] = mod1q(atan2q(im - quad(p.y), re - quad(p.x)) / two_pi);
  }

  std::vector<quad> hat(n_lift);
  for (std::size_t n = 0; n < n_lift; ++n) {
    const quad delta = mod1q(phi[n + 1] - phi[n]);
    // The double lift fixes the branch; the increment itself is recomputed.
    const quad offset = roundq(quad(lift.delta_hat(n)) - delta);
    hat[n] = delta + offset;
  }
  const quad mean = detail::weighted_mean<quad>(hat, weight.p, [](quad x) { return expq(x); });
  const quad rate = mod1q(mean);
  const quad e1 = fabsq(rate - rho);
  const quad e2 = fabsq(rate - (1 - rho));

  ExtendedRateReport report;
  report.rate = to_string(rate);
  report.rho = to_string(rho);
  report.abs_error = static_cast<double>(e1 < e2 ? e1 : e2);
  report.n_used = n_lift;
  return report;
}

}  // namespace rotrate
