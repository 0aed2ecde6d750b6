#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotrate/birkhoff.hpp"
#include "rotrate/projections.hpp"

namespace rotrate {

struct Cr3bpParams {
  double mu = 0.1;
  double step_h = 2e-5;
  double output_Dt = 1e-3;
  /// Guard radius around each primary. A fixed step usually jumps over a true
  /// impact at the default, so larger values are useful for detecting close
  /// approaches.
  double collision_distance = 1e-6;
};

/// Rotating-frame state; p are the conjugate momenta.
struct Cr3bpState {
  double q1 = 0.0;
  double q2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double t = 0.0;
};

/// Derivative of (q1, q2, p1, p2).
struct Cr3bpDerivative {
  double dq1 = 0.0;
  double dq2 = 0.0;
  double dp1 = 0.0;
  double dp2 = 0.0;
};

/// Throws UsageError unless 0 < mu < 1, h > 0 and Dt is a multiple of h.
std::size_t steps_per_output(const Cr3bpParams& params);

double hamiltonian(const Cr3bpState& s, const Cr3bpParams& params);
Cr3bpDerivative vector_field(const Cr3bpState& s, const Cr3bpParams& params);

/// Fixed-step integration, returning s0 and then a state every output_Dt up
/// to t_end. Throws CollisionError (with the time) when a step ends closer
/// than collision_distance to a primary.
std::vector<Cr3bpState> integrate_rk8(const Cr3bpState& s0, const Cr3bpParams& params,
                                      double t_end);

/// Advances by n_steps of size h (h may be negative). No output sampling.
Cr3bpState advance(const Cr3bpState& s0, const Cr3bpParams& params, double h,
                   std::size_t n_steps);

enum class AngleCoordinates { q_plane, r_rprime_plane };

/// Unwrapped angle (revolutions) of each state about center. For the r-r'
/// plane, r = |q - (-mu, 0)| and r' = dr/dt. Throws UndersampledError when a
/// step exceeds 0.45 rev.
std::vector<double> continuous_angle_series(std::span<const Cr3bpState> states,
                                            PlanarPoint center, AngleCoordinates coordinates,
                                            const Cr3bpParams& params);

/// Rotation number of the return map, used for the relation check.
inline constexpr double kReturnMapRotation = 0.0639617287574530971640777244014426955;

/// min over sign of |mod1(+-rho_phi / rho_theta) - kReturnMapRotation|.
double relation_residual(double rho_theta, double rho_phi);

/// Rate of an unwrapped angle series sampled every dt: weighted average of
/// the increments divided by dt. `converged` is false when checkpoints in the
/// last decade of N spread by more than 1e-4.
struct AngleRate {
  double rate = 0.0;
  bool converged = false;
  double spread = 0.0;
  std::vector<Checkpoint> curve;
};
AngleRate angle_rate(std::span<const double> lifted, double dt, WeightParams p);

struct Cr3bpRates {
  double rho_theta = 0.0;
  double rho_phi = 0.0;
  double relation_residual = 0.0;
  /// rho_theta + 1/(2 pi)
  double sidereal_rho_theta = 0.0;
  /// rho_phi - sidereal_rho_theta
  double precession = 0.0;
  bool converged = false;
  std::size_t n_samples = 0;
  AngleRate theta;
  AngleRate phi;
};

/// Angle centres: (-0.1, 0) in the q-plane and (0.15, 0) in the r-r' plane.
inline constexpr PlanarPoint kThetaCenter{-0.1, 0.0};
inline constexpr PlanarPoint kPhiCenter{0.15, 0.0};

Cr3bpRates rates_from_trajectory(std::span<const Cr3bpState> states, const Cr3bpParams& params,
                                 WeightParams p);
Cr3bpRates cr3bp_rotation_rates(const Cr3bpState& s0, const Cr3bpParams& params, double t_end,
                                WeightParams p);

/// State on q2 = 0, p1 = 0 with energy H and dq2/dt > 0. Throws DomainError
/// when the energy is not reachable at q1.
Cr3bpState section_state(double q1, double energy, const Cr3bpParams& params);

struct OrbitSearchParams {
  double energy = -2.65;
  double q1_min = -0.40;
  double q1_max = -0.34;
  std::size_t scan_points = 13;
  /// Integration used while searching; cheaper than the production run.
  double search_h = 5e-4;
  double search_T = 200.0;
  double tolerance = 1e-8;
  std::uint64_t seed = 1;
};

struct OrbitSearchResult {
  Cr3bpState state;
  double relation_residual = 0.0;
  std::size_t evaluations = 0;
  bool found = false;
};

/// Scans q1 on the q2 = 0 section at fixed energy (scan points are jittered
/// with the seeded generator), then bisects on mod1(-rho_phi/rho_theta) -
/// kReturnMapRotation between the first bracketing pair of converged orbits.
OrbitSearchResult search_orbit(const OrbitSearchParams& search, const Cr3bpParams& params);

}  // namespace rotrate
