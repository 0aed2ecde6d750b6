#include "rotrate/cr3bp.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "rotrate/errors.hpp"
#include "rotrate/rk8.hpp"
#include "rotrate/torus.hpp"

namespace rotrate {
namespace {

using Vec4 = std::array<double, 4>;

void validate(const Cr3bpParams& params) {
  if (!(params.mu > 0.0 && params.mu < 1.0)) throw UsageError("cr3bp: mu must lie in (0,1)");
  if (!(params.step_h > 0.0)) throw UsageError("cr3bp: step_h must be positive");
  if (!(params.output_Dt > 0.0)) throw UsageError("cr3bp: output_Dt must be positive");
  if (!(params.collision_distance > 0.0)) {
    throw UsageError("cr3bp: collision_distance must be positive");
  }
}

struct Distances {
  double moon;
  double planet;
};

Distances distances(double q1, double q2, const Cr3bpParams& params, double t) {
  const double dm = std::hypot(q1 - 1.0 + params.mu, q2);
  const double dp = std::hypot(q1 + params.mu, q2);
  if (dm < params.collision_distance || dp < params.collision_distance) {
    throw CollisionError(t, "cr3bp: collision with a primary at t = " + std::to_string(t));
  }
  return {dm, dp};
}

Vec4 field(const Vec4& y, double mu) {
  const double xm = y[0] - 1.0 + mu;
  const double xp = y[0] + mu;
  const double dm2 = xm * xm + y[1] * y[1];
  const double dp2 = xp * xp + y[1] * y[1];
  const double dm3 = dm2 * std::sqrt(dm2);
  const double dp3 = dp2 * std::sqrt(dp2);
  return {y[2] + y[1], y[3] - y[0],
          y[3] - mu * xm / dm3 - (1.0 - mu) * xp / dp3,
          -y[2] - mu * y[1] / dm3 - (1.0 - mu) * y[1] / dp3};
}

void guarded_step(Vec4& y, Vec4& carry, double h, const Cr3bpParams& params, double t) {
  const double mu = params.mu;
  rk8_step(y, h, [mu](const Vec4& in, Vec4& out) { out = field(in, mu); }, &carry);
  if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
    throw CollisionError(t, "cr3bp: state became non-finite at t = " + std::to_string(t));
  }
  distances(y[0], y[1], params, t);
}

double wrap_half(double x) {
  const double r = mod1(x);
  return r > 0.5 ? r - 1.0 : r;
}

}  // namespace

std::size_t steps_per_output(const Cr3bpParams& params) {
  validate(params);
  const double ratio = params.output_Dt / params.step_h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw UsageError("cr3bp: output_Dt must be an integer multiple of step_h");
  }
  return static_cast<std::size_t>(rounded);
}

double hamiltonian(const Cr3bpState& s, const Cr3bpParams& params) {
  validate(params);
  const auto [dm, dp] = distances(s.q1, s.q2, params, s.t);
  return 0.5 * (s.p1 * s.p1 + s.p2 * s.p2) + s.p1 * s.q2 - s.p2 * s.q1 -
         (1.0 - params.mu) / dp - params.mu / dm;
}

Cr3bpDerivative vector_field(const Cr3bpState& s, const Cr3bpParams& params) {
  validate(params);
  distances(s.q1, s.q2, params, s.t);
  const Vec4 d = field({s.q1, s.q2, s.p1, s.p2}, params.mu);
  return {d[0], d[1], d[2], d[3]};
}

std::vector<Cr3bpState> integrate_rk8(const Cr3bpState& s0, const Cr3bpParams& params,
                                      double t_end) {
  const std::size_t per_output = steps_per_output(params);
  if (!(t_end > 0.0)) throw UsageError("integrate_rk8: t_end must be positive");
  distances(s0.q1, s0.q2, params, s0.t);
  const auto n_out = static_cast<std::size_t>(std::floor(t_end / params.output_Dt + 1e-9));
  std::vector<Cr3bpState> out;
  out.reserve(n_out + 1);
  out.push_back(s0);
  Vec4 y{s0.q1, s0.q2, s0.p1, s0.p2};
  Vec4 carry{};
  for (std::size_t k = 1; k <= n_out; ++k) {
    for (std::size_t i = 0; i < per_output; ++i) {
      const double t = s0.t + static_cast<double>((k - 1) * per_output + i + 1) * params.step_h;
      guarded_step(y, carry, params.step_h, params, t);
    }
    // Times from the index so they do not drift.
    out.push_back({y[0], y[1], y[2], y[3], s0.t + static_cast<double>(k) * params.output_Dt});
  }
  return out;
}

Cr3bpState advance(const Cr3bpState& s0, const Cr3bpParams& params, double h,
                   std::size_t n_steps) {
  validate(params);
  Vec4 y{s0.q1, s0.q2, s0.p1, s0.p2};
  Vec4 carry{};
  for (std::size_t i = 0; i < n_steps; ++i) {
    guarded_step(y, carry, h, params, s0.t + static_cast<double>(i + 1) * h);
  }
  return {y[0], y[1], y[2], y[3], s0.t + static_cast<double>(n_steps) * h};
}

std::vector<double> continuous_angle_series(std::span<const Cr3bpState> states,
                                            PlanarPoint center, AngleCoordinates coordinates,
                                            const Cr3bpParams& params) {
  validate(params);
  std::vector<double> out;
  out.reserve(states.size());
  double prev = 0.0;
  for (std::size_t n = 0; n < states.size(); ++n) {
    const Cr3bpState& s = states[n];
    PlanarPoint g;
    if (coordinates == AngleCoordinates::q_plane) {
      g = {s.q1, s.q2};
    } else {
      const auto d = vector_field(s, params);
      const double x = s.q1 + params.mu;
      const double r = std::hypot(x, s.q2);
      g = {r, (x * d.dq1 + s.q2 * d.dq2) / r};
    }
    const double a = angle_from_reference(g, center);
    if (n == 0) {
      out.push_back(a);
    } else {
      const double inc = signed_increment(prev, a);
      if (std::abs(inc) > 0.45) {
        throw UndersampledError("continuous_angle_series: step of " + std::to_string(inc) +
                                " rev at t = " + std::to_string(s.t));
      }
      out.push_back(out.back() + inc);
    }
    prev = a;
  }
  return out;
}

double relation_residual(double rho_theta, double rho_phi) {
  if (rho_theta == 0.0) throw DomainError("relation_residual: rho_theta is zero");
  const double ratio = rho_phi / rho_theta;
  const double plus = std::abs(wrap_half(mod1(ratio) - kReturnMapRotation));
  const double minus = std::abs(wrap_half(mod1(-ratio) - kReturnMapRotation));
  return std::min(plus, minus);
}

AngleRate angle_rate(std::span<const double> lifted, double dt, WeightParams p) {
  if (lifted.size() < 3) throw UsageError("angle_rate: need at least 3 samples");
  std::vector<double> inc(lifted.size() - 1);
  for (std::size_t n = 0; n + 1 < lifted.size(); ++n) inc[n] = lifted[n + 1] - lifted[n];
  const std::size_t n = inc.size();
  AngleRate r;
  auto checkpoints = decade_checkpoints(n);
  // Ten evenly spaced checkpoints across the last decade feed the spread test.
  std::vector<std::size_t> tail;
  for (int i = 1; i < 10; ++i) {
    const std::size_t c = n / 10 * static_cast<std::size_t>(i);
    if (c >= 2 && (checkpoints.size() < 2 || c > checkpoints[checkpoints.size() - 2])) tail.push_back(c);
  }
  std::vector<std::size_t> all(checkpoints.begin(), checkpoints.end() - 1);
  for (const std::size_t c : tail) {
    if (all.empty() || c > all.back()) all.push_back(c);
  }
  if (all.empty() || n > all.back()) all.push_back(n);
  r.curve = convergence_curve(inc, p, all);
  for (auto& [count, value] : r.curve) value /= dt;
  r.rate = r.curve.back().second;
  double lo = r.rate, hi = r.rate;
  for (const auto& [count, value] : r.curve) {
    if (count * 10 >= n) {
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
  }
  r.spread = hi - lo;
  r.converged = r.spread <= 1e-4;
  return r;
}

Cr3bpRates rates_from_trajectory(std::span<const Cr3bpState> states, const Cr3bpParams& params,
                                 WeightParams p) {
  Cr3bpRates r;
  const auto theta = continuous_angle_series(states, kThetaCenter, AngleCoordinates::q_plane, params);
  const auto phi =
      continuous_angle_series(states, kPhiCenter, AngleCoordinates::r_rprime_plane, params);
  r.theta = angle_rate(theta, params.output_Dt, p);
  r.phi = angle_rate(phi, params.output_Dt, p);
  r.rho_theta = r.theta.rate;
  r.rho_phi = r.phi.rate;
  r.relation_residual = relation_residual(r.rho_theta, r.rho_phi);
  r.sidereal_rho_theta = r.rho_theta + 1.0 / (2.0 * std::numbers::pi);
  r.precession = r.rho_phi - r.sidereal_rho_theta;
  r.converged = r.theta.converged && r.phi.converged;
  r.n_samples = states.size();
  return r;
}

Cr3bpRates cr3bp_rotation_rates(const Cr3bpState& s0, const Cr3bpParams& params, double t_end,
                                WeightParams p) {
  const auto states = integrate_rk8(s0, params, t_end);
  return rates_from_trajectory(states, params, p);
}

Cr3bpState section_state(double q1, double energy, const Cr3bpParams& params) {
  validate(params);
  const auto [dm, dp] = distances(q1, 0.0, params, 0.0);
  const double potential = (1.0 - params.mu) / dp + params.mu / dm;
  // H = p2^2/2 - p2 q1 - U with p1 = q2 = 0; take the root with p2 - q1 > 0.
  const double disc = q1 * q1 + 2.0 * (energy + potential);
  if (disc < 0.0) throw DomainError("section_state: energy not reachable at q1");
  return {q1, 0.0, 0.0, q1 + std::sqrt(disc), 0.0};
}

namespace {

struct Probe {
  double q1;
  double offset;  // wrapped mod1(sign * ratio) - target
  bool ok;
};

}  // namespace

OrbitSearchResult search_orbit(const OrbitSearchParams& search, const Cr3bpParams& params) {
  if (search.scan_points < 2 || !(search.q1_max > search.q1_min)) {
    throw UsageError("search_orbit: need an increasing q1 range and >= 2 scan points");
  }
  Cr3bpParams fast = params;
  fast.step_h = search.search_h;
  fast.output_Dt = std::max(search.search_h, params.output_Dt);
  fast.output_Dt = search.search_h * std::round(fast.output_Dt / search.search_h);

  OrbitSearchResult result;
  std::optional<double> sign;
  auto probe = [&](double q1) -> Probe {
    ++result.evaluations;
    try {
      const auto s0 = section_state(q1, search.energy, fast);
      const auto rates = cr3bp_rotation_rates(s0, fast, search.search_T, WeightParams{2});
      if (!rates.converged) return {q1, 0.0, false};
      const double ratio = rates.rho_phi / rates.rho_theta;
      if (!sign) {
        const double plus = std::abs(wrap_half(mod1(ratio) - kReturnMapRotation));
        const double minus = std::abs(wrap_half(mod1(-ratio) - kReturnMapRotation));
        sign = minus <= plus ? -1.0 : 1.0;
      }
      return {q1, wrap_half(mod1(*sign * ratio) - kReturnMapRotation), true};
    } catch (const std::exception&) {
      return {q1, 0.0, false};
    }
  };

  std::mt19937_64 rng(search.seed);
  const double step = (search.q1_max - search.q1_min) / static_cast<double>(search.scan_points - 1);
  std::uniform_real_distribution<double> jitter(-0.25 * step, 0.25 * step);
  std::vector<Probe> scan;
  for (std::size_t i = 0; i < search.scan_points; ++i) {
    double q1 = search.q1_min + step * static_cast<double>(i);
    if (i != 0 && i + 1 != search.scan_points) q1 += jitter(rng);
    scan.push_back(probe(q1));
  }

  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    Probe a = scan[i];
    Probe b = scan[i + 1];
    if (!a.ok || !b.ok || (a.offset > 0) == (b.offset > 0)) continue;
    // Offsets far from zero on both sides indicate a wrap, not a root.
    if (std::abs(a.offset - b.offset) > 0.25) continue;
    for (int iter = 0; iter < 60 && std::abs(b.q1 - a.q1) > 1e-15; ++iter) {
      const Probe m = probe(0.5 * (a.q1 + b.q1));
      if (!m.ok) break;
      if ((m.offset > 0) == (a.offset > 0)) a = m; else b = m;
      if (std::abs(m.offset) < search.tolerance) break;
    }
    const Probe& best = std::abs(a.offset) < std::abs(b.offset) ? a : b;
    result.state = section_state(best.q1, search.energy, params);
    result.relation_residual = std::abs(best.offset);
    result.found = result.relation_residual < search.tolerance * 10.0;
    return result;
  }
  return result;
}

}  // namespace rotrate
