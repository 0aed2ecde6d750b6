#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "oracles.hpp"
#include "rotrate/cr3bp.hpp"
#include "rotrate/errors.hpp"
#include "rotrate/rk8.hpp"

using namespace rotrate;

namespace {

const Cr3bpParams kParams{};

// Orbit frozen in configs/cr3bp.cfg.
Cr3bpState frozen_orbit() { return {-0.38038900845738177, 0.0, 0.0, 0.81147962060855017, 0.0}; }

double max_diff(const Cr3bpState& a, const Cr3bpState& b) {
  return std::max({std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2), std::abs(a.p1 - b.p1),
                   std::abs(a.p2 - b.p2)});
}

std::array<double, 4> as_array(const Cr3bpDerivative& d) { return {d.dq1, d.dq2, d.dp1, d.dp2}; }

double norm(const Cr3bpDerivative& d) {
  return std::hypot(std::hypot(d.dq1, d.dq2), std::hypot(d.dp1, d.dp2));
}

}  // namespace

TEST(Cr3bpHamiltonian, KnownValues) {
  const double expected = -0.9 / std::sqrt(1.01) - 0.1 / std::sqrt(1.81);
  EXPECT_NEAR(hamiltonian({0.0, 1.0, 0.0, 0.0, 0.0}, kParams), expected, 1e-15);
  // The commonly quoted rounding of this value is -0.969839; direct
  // substitution gives -0.9698629, so that figure is only good to ~3e-5.
  EXPECT_NEAR(hamiltonian({0.0, 1.0, 0.0, 0.0, 0.0}, kParams), -0.969839, 3e-5);
  EXPECT_NEAR(hamiltonian({0.0, 1.0, 0.0, 0.0, 0.0}, kParams), -0.9698629, 1e-7);
  EXPECT_NEAR(hamiltonian({0.4, 0.0, 0.0, 0.0, 0.0}, kParams), -2.0, 1e-14);
}

TEST(Cr3bpHamiltonian, MatchesIndependentFormula) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    const Cr3bpState s{u(rng), u(rng), u(rng), u(rng), 0.0};
    EXPECT_NEAR(hamiltonian(s, kParams), oracle::cr3bp_energy(s.q1, s.q2, s.p1, s.p2, 0.1),
                1e-12 * (1.0 + std::abs(hamiltonian(s, kParams))));
  }
}

TEST(Cr3bpHamiltonian, CollisionGuard) {
  EXPECT_THROW(hamiltonian({0.9, 0.0, 0.0, 0.0, 0.0}, kParams), CollisionError);
  EXPECT_THROW(hamiltonian({-0.1, 0.0, 0.0, 0.0, 0.0}, kParams), CollisionError);
  EXPECT_THROW(vector_field({0.9, 0.0, 1.0, 1.0, 0.0}, kParams), CollisionError);
}

TEST(Cr3bpField, ZeroPositionRateWhenMomentumCancels) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int i = 0; i < 50; ++i) {
    const double q2 = u(rng);
    const Cr3bpState s{u(rng), q2, -q2, u(rng), 0.0};
    EXPECT_EQ(vector_field(s, kParams).dq1, 0.0);
  }
}

TEST(Cr3bpField, HamiltonianGradientByFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  int checked = 0;
  while (checked < 100) {
    const Cr3bpState s{u(rng), u(rng), u(rng), u(rng), 0.0};
    // Stay clear of the primaries so the differences are well conditioned.
    if (std::hypot(s.q1 + 0.1, s.q2) < 0.2 || std::hypot(s.q1 - 0.9, s.q2) < 0.2) continue;
    constexpr double e = 2e-4;
    auto h = [&](int k, double sign) {
      Cr3bpState t = s;
      double* c[] = {&t.q1, &t.q2, &t.p1, &t.p2};
      *c[k] += sign * e;
      return hamiltonian(t, kParams);
    };
    std::array<double, 4> grad{};
    // Five-point stencil; truncation is O(e^4).
    for (int k = 0; k < 4; ++k) {
      grad[k] = (8 * (h(k, 1) - h(k, -1)) - (h(k, 2) - h(k, -2))) / (12 * e);
    }
    const auto f = as_array(vector_field(s, kParams));
    EXPECT_NEAR(f[0], grad[2], 1e-8);
    EXPECT_NEAR(f[1], grad[3], 1e-8);
    EXPECT_NEAR(f[2], -grad[0], 1e-8);
    EXPECT_NEAR(f[3], -grad[1], 1e-8);
    ++checked;
  }
}

TEST(Cr3bpField, NewtonLocatedEquilibrium) {
  // Start near the triangular point and polish with a finite-difference Newton.
  Cr3bpState s{0.4, std::sqrt(3.0) / 2, -std::sqrt(3.0) / 2, 0.4, 0.0};
  for (int it = 0; it < 30 && norm(vector_field(s, kParams)) > 1e-14; ++it) {
    const auto f0 = as_array(vector_field(s, kParams));
    double J[4][4];
    for (int k = 0; k < 4; ++k) {
      Cr3bpState a = s, b = s;
      double* ca[] = {&a.q1, &a.q2, &a.p1, &a.p2};
      double* cb[] = {&b.q1, &b.q2, &b.p1, &b.p2};
      *ca[k] += 1e-7;
      *cb[k] -= 1e-7;
      const auto fa = as_array(vector_field(a, kParams));
      const auto fb = as_array(vector_field(b, kParams));
      for (int r = 0; r < 4; ++r) J[r][k] = (fa[r] - fb[r]) / 2e-7;
    }
    // Gaussian elimination with partial pivoting on J dx = -f.
    double A[4][5];
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) A[r][c] = J[r][c];
      A[r][4] = -f0[r];
    }
    for (int c = 0; c < 4; ++c) {
      int piv = c;
      for (int r = c + 1; r < 4; ++r)
        if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
      for (int k = 0; k < 5; ++k) std::swap(A[c][k], A[piv][k]);
      for (int r = c + 1; r < 4; ++r) {
        const double m = A[r][c] / A[c][c];
        for (int k = c; k < 5; ++k) A[r][k] -= m * A[c][k];
      }
    }
    double dx[4];
    for (int r = 3; r >= 0; --r) {
      double v = A[r][4];
      for (int k = r + 1; k < 4; ++k) v -= A[r][k] * dx[k];
      dx[r] = v / A[r][r];
    }
    s.q1 += dx[0];
    s.q2 += dx[1];
    s.p1 += dx[2];
    s.p2 += dx[3];
  }
  EXPECT_LT(norm(vector_field(s, kParams)), 1e-10);
  // Triangular point sits at unit distance from both primaries.
  EXPECT_NEAR(std::hypot(s.q1 + 0.1, s.q2), 1.0, 1e-9);
  EXPECT_NEAR(std::hypot(s.q1 - 0.9, s.q2), 1.0, 1e-9);

  const auto traj = integrate_rk8(s, kParams, 1.0);
  for (const auto& x : traj) EXPECT_LT(max_diff(x, s), 1e-12);
}

TEST(Cr3bpIntegrator, EnergyDriftOverMillionSteps) {
  const Cr3bpState s0 = frozen_orbit();
  const double h0 = hamiltonian(s0, kParams);
  Cr3bpState s = s0;
  double drift = 0.0;
  for (int chunk = 0; chunk < 1000; ++chunk) {
    s = advance(s, kParams, kParams.step_h, 1000);
    drift = std::max(drift, std::abs(hamiltonian(s, kParams) - h0));
  }
  EXPECT_NEAR(s.t, 20.0, 1e-9);
  EXPECT_LT(drift, 1e-10);
}

TEST(Cr3bpIntegrator, StepHalvingAtUnitTime) {
  const Cr3bpState s0 = frozen_orbit();
  const auto a = advance(s0, kParams, 2e-5, 50000);
  const auto b = advance(s0, kParams, 1e-5, 100000);
  EXPECT_LT(max_diff(a, b), 1e-12);
}

TEST(Cr3bpIntegrator, EighthOrderAtCoarseSteps) {
  // Error ratio for h -> h/2 should approach 2^8 while truncation dominates.
  const Cr3bpState s0 = frozen_orbit();
  const auto ref = advance(s0, kParams, 1e-4, 2000);
  const auto c1 = advance(s0, kParams, 5e-3, 40);
  const auto c2 = advance(s0, kParams, 2.5e-3, 80);
  const double ratio = max_diff(c1, ref) / max_diff(c2, ref);
  EXPECT_GT(ratio, 150.0);
  EXPECT_LT(ratio, 400.0);
}

TEST(Cr3bpIntegrator, TimeReversal) {
  const Cr3bpState s0 = frozen_orbit();
  const auto fwd = advance(s0, kParams, kParams.step_h, 250000);
  const auto back = advance(fwd, kParams, -kParams.step_h, 250000);
  EXPECT_LT(max_diff(back, s0), 1e-10);
  EXPECT_NEAR(back.t, 0.0, 1e-9);
}

TEST(Cr3bpIntegrator, OutputSpacingAndAgreementWithAdvance) {
  const Cr3bpState s0 = frozen_orbit();
  const auto traj = integrate_rk8(s0, kParams, 0.1);
  ASSERT_EQ(traj.size(), 101u);
  EXPECT_EQ(max_diff(traj[0], s0), 0.0);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    EXPECT_NEAR(traj[k].t, 0.001 * static_cast<double>(k), 1e-15);
  }
  EXPECT_EQ(max_diff(traj.back(), advance(s0, kParams, kParams.step_h, 5000)), 0.0);
}

TEST(Cr3bpIntegrator, CollisionCarriesTime) {
  // At rest relative to the moon in the inertial frame, so it falls straight
  // in. Free fall from 0.05 to the guard at 0.01 takes about 0.03.
  Cr3bpParams wide = kParams;
  wide.collision_distance = 0.01;
  const Cr3bpState s0{0.95, 0.0, 0.0, 0.9, 2.0};
  try {
    integrate_rk8(s0, wide, 1.0);
    FAIL() << "expected a collision";
  } catch (const CollisionError& e) {
    EXPECT_GT(e.time(), 2.02);
    EXPECT_LT(e.time(), 2.05);
  }
  try {
    integrate_rk8({0.9 + 5e-7, 0.0, 0.0, 0.9, 3.5}, kParams, 1.0);
    FAIL() << "expected a collision";
  } catch (const CollisionError& e) {
    EXPECT_EQ(e.time(), 3.5);
  }
}

TEST(Cr3bpParamsCheck, Validation) {
  EXPECT_EQ(steps_per_output(kParams), 50u);
  EXPECT_THROW(steps_per_output({0.0, 2e-5, 1e-3}), UsageError);
  EXPECT_THROW(steps_per_output({1.0, 2e-5, 1e-3}), UsageError);
  EXPECT_THROW(steps_per_output({0.1, 3e-5, 1e-3}), UsageError);
  EXPECT_THROW(steps_per_output({0.1, 0.0, 1e-3}), UsageError);
  EXPECT_THROW(steps_per_output({0.1, 2e-5, 1e-3, 0.0}), UsageError);
  EXPECT_THROW(integrate_rk8(frozen_orbit(), kParams, 0.0), UsageError);
}

TEST(Cr3bpAngles, CircleIncrementsAndSign) {
  std::vector<Cr3bpState> ccw, cw;
  for (int n = 0; n <= 2000; ++n) {
    const double t = 0.001 * n;
    const double a = 2 * std::numbers::pi * t;
    ccw.push_back({-0.1 + 0.3 * std::cos(a), 0.3 * std::sin(a), 0, 0, t});
    cw.push_back({-0.1 + 0.3 * std::cos(a), -0.3 * std::sin(a), 0, 0, t});
  }
  const auto up = continuous_angle_series(ccw, kThetaCenter, AngleCoordinates::q_plane, kParams);
  const auto down = continuous_angle_series(cw, kThetaCenter, AngleCoordinates::q_plane, kParams);
  for (std::size_t n = 1; n < up.size(); ++n) {
    EXPECT_NEAR(up[n] - up[n - 1], 0.001, 1e-12);
    EXPECT_NEAR(down[n] - down[n - 1], -0.001, 1e-12);
  }
  EXPECT_NEAR(up.back() - up.front(), 2.0, 1e-9);
}

TEST(Cr3bpAngles, UndersampledThrows) {
  std::vector<Cr3bpState> s{{0.2, 0.0, 0, 0, 0}, {-0.4, 0.01, 0, 0, 1}};
  EXPECT_THROW(continuous_angle_series(s, kThetaCenter, AngleCoordinates::q_plane, kParams),
               UndersampledError);
}

TEST(Cr3bpAngles, RadialPlaneUsesFieldDerivative) {
  const Cr3bpState s = frozen_orbit();
  const std::vector<Cr3bpState> one{s};
  const auto a = continuous_angle_series(one, kPhiCenter, AngleCoordinates::r_rprime_plane, kParams);
  const auto d = vector_field(s, kParams);
  const double r = std::hypot(s.q1 + 0.1, s.q2);
  const double rp = ((s.q1 + 0.1) * d.dq1 + s.q2 * d.dq2) / r;
  EXPECT_NEAR(oracle::wrap_half(a[0] - oracle::raw_angle({r, rp}, kPhiCenter)), 0.0, 1e-15);
}

TEST(Cr3bpRates, SyntheticTwoFrequencySignal) {
  // Lifted angles a t + small quasiperiodic wobble; the rates are a and b.
  const double a = -2.4, b = 0.37;
  const double f1 = std::numbers::phi, f2 = std::sqrt(2.0);
  const double dt = 0.01;
  std::vector<double> la, lb;
  for (int n = 0; n <= 100000; ++n) {
    const double t = dt * n;
    la.push_back(a * t + 0.05 * std::sin(2 * std::numbers::pi * f1 * t) +
                 0.02 * std::cos(2 * std::numbers::pi * f2 * t));
    lb.push_back(b * t + 0.03 * std::sin(2 * std::numbers::pi * f2 * t));
  }
  const auto ra = angle_rate(la, dt, {2});
  const auto rb = angle_rate(lb, dt, {2});
  EXPECT_NEAR(ra.rate, a, 1e-10);
  EXPECT_NEAR(rb.rate, b, 1e-10);
  EXPECT_TRUE(ra.converged);
  EXPECT_TRUE(rb.converged);
}

TEST(Cr3bpRates, NonConvergentSignalFlagged) {
  // Random-walk increments do not settle.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> l{0.0};
  for (int n = 0; n < 20000; ++n) l.push_back(l.back() + 0.01 + 0.01 * g(rng));
  EXPECT_FALSE(angle_rate(l, 0.001, {2}).converged);
}

TEST(Cr3bpRates, RelationResidualSignHandling) {
  const double rt = -2.5;
  EXPECT_NEAR(relation_residual(rt, rt * (1.0 - kReturnMapRotation)), 0.0, 1e-14);
  EXPECT_NEAR(relation_residual(rt, rt * (3.0 + kReturnMapRotation)), 0.0, 1e-14);
  EXPECT_NEAR(relation_residual(rt, -rt * (1.0 - kReturnMapRotation)), 0.0, 1e-14);
  EXPECT_GT(relation_residual(rt, rt * 0.5), 0.4);
  EXPECT_THROW(relation_residual(0.0, 1.0), DomainError);
}

TEST(Cr3bpRates, SiderealAndPrecessionOnShortRun) {
  const auto r = cr3bp_rotation_rates(frozen_orbit(), kParams, 20.0, {2});
  EXPECT_DOUBLE_EQ(r.sidereal_rho_theta, r.rho_theta + 1.0 / (2.0 * std::numbers::pi));
  EXPECT_DOUBLE_EQ(r.precession, r.rho_phi - r.sidereal_rho_theta);
  EXPECT_LT(r.rho_theta, 0.0);
  EXPECT_LT(r.rho_phi, 0.0);
  EXPECT_EQ(r.n_samples, 20001u);
}

TEST(Cr3bpSection, StateHasRequestedEnergy) {
  for (const double q1 : {-0.40, -0.38, -0.30}) {
    const auto s = section_state(q1, -2.65, kParams);
    EXPECT_NEAR(hamiltonian(s, kParams), -2.65, 1e-12);
    EXPECT_EQ(s.q2, 0.0);
    EXPECT_EQ(s.p1, 0.0);
    EXPECT_GT(vector_field(s, kParams).dq2, 0.0);
  }
  EXPECT_THROW(section_state(-0.9, -5.0, kParams), DomainError);
}

TEST(Cr3bpSection, FrozenOrbitLiesOnSearchEnergy) {
  EXPECT_NEAR(hamiltonian(frozen_orbit(), kParams), -2.65, 1e-8);
}

TEST(Rk8Tableau, IsRecorded) { EXPECT_FALSE(std::string(kRk8TableauId).empty()); }
