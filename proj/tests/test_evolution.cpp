#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "floqsim/evolution.hpp"
#include "floqsim/protocols.hpp"
#include "oracles.hpp"

using namespace floqsim;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

VOperatorMap constant_spin_map(const SpinSystem& sys, const Vec3& B, const Vec3& Bdot) {
  return make_spin_map(sys, [B, Bdot](double) { return FieldVector{B, Bdot}; });
}

} // namespace

TEST_CASE("propagate_exact: zero field gives the identity; guard trips on coarse steps") {
  const SpinSystem sys(1.0, 1.0);
  const DrivingProfile profile = DrivingProfile::harmonic(1.0, 0.2);
  const VOperatorMap map = constant_spin_map(sys, Vec3::Zero(), Vec3::Zero());

  const PropagatorResult r = propagate_exact(map, profile, 0.0, 10.0, 128);
  CHECK(dist(r.U, OperatorMatrix::identity(3)) <= 1e-12);
  CHECK(r.unitarity_defect <= 1e-8);

  CHECK_THROWS_AS(propagate_exact(map, profile, 0.0, 1.0, 32), numeric_guard_error);
  CHECK_THROWS_AS(propagate_exact(map, profile, 1.0, 0.0, 128), std::invalid_argument);
}

TEST_CASE("propagate_exact: Floquet periodicity over one period at constant field") {
  const SpinSystem sys(1.0, 1.0);
  const DrivingProfile profile = DrivingProfile::harmonic(1.0, 0.3);
  const Vec3 B(0.4, -0.3, 0.8);
  const VOperatorMap map = constant_spin_map(sys, B, Vec3::Zero());

  const PropagatorResult r = propagate_exact(map, profile, 0.0, kTwoPi, 512);
  // e^{-i S(T)} U e^{+i S(0)} = 1; S(T) = S(0) because the primitive is periodic
  const OperatorMatrix s_end = micromotion_s(sys, B, profile, profile.phase(kTwoPi));
  const OperatorMatrix s_begin = micromotion_s(sys, B, profile, profile.phase(0.0));
  const Mat closed = unitary_exp(s_end, 1.0).m * r.U.m * unitary_exp(s_begin, -1.0).m;
  CHECK((closed - Mat::Identity(3, 3)).norm() <= 1e-6);
}

TEST_CASE("propagate_exact: commuting-Hamiltonian quadrature oracle for a fixed z field") {
  const SpinSystem half(0.5, 1.0);
  const DrivingProfile profile = DrivingProfile::harmonic(1.0, 0.3);
  const double B0 = 1.3;
  const VOperatorMap map = constant_spin_map(half, Vec3(0.0, 0.0, B0), Vec3::Zero());

  const double t0 = 0.7, t1 = 13.11;
  const PropagatorResult r = propagate_exact(map, profile, t0, t1, 512);
  const double dF = profile.primitive(profile.phase(t1)) - profile.primitive(profile.phase(t0));
  // diagonal phases exp(-i m g B0 dF / omega), m = +-1/2
  Mat expected(2, 2);
  expected.setZero();
  expected(0, 0) = std::exp(cxd(0.0, -0.5 * B0 * dF));
  expected(1, 1) = std::exp(cxd(0.0, 0.5 * B0 * dF));
  CHECK((r.U.m - expected).norm() <= 1e-5);
}

TEST_CASE("propagate_exact: composition on shared grids and second-order step scaling") {
  const SpinSystem sys(1.0, 1.0);
  const DrivingProfile profile = DrivingProfile::harmonic(1.0);
  const FieldSchedule schedule = build_fig2_schedule(1.5, 1.5, 0.1, 1.0, 5);
  const VOperatorMap map = schedule_map(sys, schedule);

  const double T = kTwoPi;
  const PropagatorResult u10 = propagate_exact(map, profile, 0.0, 10.0 * T, 512);
  const PropagatorResult u21 = propagate_exact(map, profile, 10.0 * T, 18.0 * T, 512);
  const PropagatorResult u20 = propagate_exact(map, profile, 0.0, 18.0 * T, 512);
  CHECK((u21.U.m * u10.U.m - u20.U.m).norm() <= 1e-8);

  const PropagatorResult a = propagate_exact(map, profile, 0.0, schedule.t_end(), 256);
  const PropagatorResult b = propagate_exact(map, profile, 0.0, schedule.t_end(), 512);
  const PropagatorResult c = propagate_exact(map, profile, 0.0, schedule.t_end(), 1024);
  const double d1 = dist(a.U, b.U);
  const double d2 = dist(b.U, c.U);
  CHECK(d1 / d2 > 2.5); // second order: ratio ~ 4
  CHECK(d1 / d2 < 5.5);
  CHECK(b.unitarity_defect <= 1e-8);
}

TEST_CASE("propagate_state follows propagate_exact and preserves the norm") {
  const SpinSystem sys(1.0, 1.0);
  const DrivingProfile profile = DrivingProfile::harmonic(1.0);
  const FieldSchedule schedule = build_fig2_schedule(2.0, 2.0, 0.2, 1.0, 5);
  const VOperatorMap map = schedule_map(sys, schedule);

  Vec psi0 = Vec::Zero(3);
  psi0[0] = 1.0;
  long calls = 0;
  const Vec psi = propagate_state(map, profile, schedule.t_begin(), schedule.t_end(), 128, psi0,
                                  [&](long, double, const Vec& v) {
                                    ++calls;
                                    CHECK(std::abs(v.norm() - 1.0) <= 1e-10);
                                  });
  const PropagatorResult u =
      propagate_exact(map, profile, schedule.t_begin(), schedule.t_end(), 128);
  CHECK((psi - u.U.m * psi0).norm() <= 1e-12);
  CHECK(calls == u.steps_used + 1);
}

TEST_CASE("propagate_effective: zero generator, constant generator, and the loop holonomy") {
  const SpinSystem sys(1.0, 1.0);

  const auto zero = [](double) { return OperatorMatrix::zero(3); };
  CHECK(dist(propagate_effective(zero, 0.0, 5.0, 128).U, OperatorMatrix::identity(3)) <= 1e-12);

  // constant W0 = Omega_spin F.n over tau
  const Vec3 n = Vec3(1.0, 2.0, -0.5).normalized();
  const double omega_rot = 0.23, tau = 7.0;
  const auto constant = [&](double) {
    return OperatorMatrix(Mat(omega_rot * sys.f_dot(n).m), true);
  };
  const PropagatorResult r = propagate_effective(constant, 0.0, tau, 256);
  CHECK(dist(r.U, unitary_exp(sys.f_dot(n), omega_rot * tau)) <= 1e-10);

  CHECK_THROWS_AS(propagate_effective(zero, 0.0, 1.0, 32), numeric_guard_error);

  // full rotation cycle of B about e_y equals the closed-form holonomy
  const DrivingProfile profile = DrivingProfile::harmonic(1.0);
  const double a = 1.8;
  FieldSchedule loop(0.0);
  loop.ramp_up(kTwoPi, Vec3(0.0, 0.0, a)).rotate_loop(Vec3::UnitY(), 0.05, 1.0);
  const VOperatorMap map = schedule_map(sys, loop);
  const PropagatorResult eff = propagate_effective(
      w0_provider(map, profile, 256), loop.segments()[1].t_begin, loop.t_end(), 4096);
  CHECK(dist(eff.U, holonomy_loop(sys, Vec3::UnitY(), a).U) <= 1e-6);
}

TEST_CASE("micromotion_s: zeros and the defining relation to the frame operator") {
  const SpinSystem sys(1.0, 1.0);
  const DrivingProfile profile = DrivingProfile::harmonic(1.0);

  CHECK(micromotion_s(sys, Vec3::Zero(), profile, 1.2).m.norm() == 0.0);
  CHECK(micromotion_s(sys, Vec3(0.3, 0.1, 2.0), profile, 0.0).m.norm() == 0.0); // F(0) = 0

  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 B = oracles::random_vec3(rng, 2.0);
    const double phase = oracles::uniform(rng, 0.0, kTwoPi);
    const OperatorMatrix s = micromotion_s(sys, B, profile, phase);
    const OperatorMatrix r = r_operator(profile, zeeman_v(sys, B), phase);
    CHECK(dist(unitary_exp(s, 1.0), r) <= 1e-12);
  }
}

TEST_CASE("full_solution: identity cases and Floquet recurrence at constant field") {
  const SpinSystem sys(1.0, 1.0);
  const DrivingProfile profile = DrivingProfile::harmonic(1.0, 1.1);

  const VOperatorMap empty = constant_spin_map(sys, Vec3::Zero(), Vec3::Zero());
  CHECK(dist(full_solution(empty, profile, 0.0, 9.0, 128, false).U,
             OperatorMatrix::identity(3)) <= 1e-12);

  // constant field: full solution recurs after one period, either body route
  const VOperatorMap constant = constant_spin_map(sys, Vec3(0.5, 0.1, 1.5), Vec3::Zero());
  for (bool use_effective : {false, true}) {
    CAPTURE(use_effective);
    const PropagatorResult r =
        full_solution(constant, profile, 0.4, 0.4 + kTwoPi, use_effective ? 64 : 128,
                      use_effective);
    CHECK(dist(r.U, OperatorMatrix::identity(3)) <= 1e-8);
  }
}

TEST_CASE("full_solution: endpoint micromotion factors vanish on a measurement schedule") {
  const SpinSystem sys(1.0, 1.0);
  const DrivingProfile profile = DrivingProfile::harmonic(1.0);
  const FieldSchedule schedule = build_fig2_schedule(1.5, 1.5, 0.1, 1.0, 5);
  CHECK(schedule.is_measurement());

  const OperatorMatrix s_end =
      micromotion_s(sys, schedule.B(schedule.t_end()), profile, profile.phase(schedule.t_end()));
  CHECK(s_end.m.norm() <= 1e-12);

  // with S = 0 at both ends the full solution equals its transformed body,
  // which in turn matches the original-frame propagator
  const VOperatorMap map = schedule_map(sys, schedule);
  const PropagatorResult full =
      full_solution(map, profile, schedule.t_begin(), schedule.t_end(), 512, false);
  const PropagatorResult exact =
      propagate_exact(map, profile, schedule.t_begin(), schedule.t_end(), 512);
  CHECK(dist(full.U, exact.U) <= 1e-4);
}

TEST_CASE("holonomy_loop: anchors at a = 0 and the first Bessel zero") {
  const SpinSystem spin1(1.0, 1.0);
  const SpinSystem half(0.5, 1.0);

  const HolonomyOperator h0 = holonomy_loop(spin1, Vec3::UnitX(), 0.0);
  CHECK(h0.gamma == 0.0);
  CHECK(dist(h0.U, OperatorMatrix::identity(3)) <= 1e-12);

  const double a = 2.405;
  CHECK(dist(holonomy_loop(spin1, Vec3::UnitY(), a).U, OperatorMatrix::identity(3)) <= 5e-3);
  CHECK(dist(holonomy_loop(half, Vec3::UnitY(), a).U,
             OperatorMatrix(Mat(-Mat::Identity(2, 2)))) <= 5e-3);

  CHECK_THROWS_AS(holonomy_loop(spin1, Vec3(1.0, 1.0, 0.0), 1.0), std::invalid_argument);
}

TEST_CASE("holonomy unitaries have unit determinant (traceless generator)") {
  std::mt19937_64 rng(71);
  for (double f_F : {0.5, 1.0, 1.5}) {
    const SpinSystem sys(f_F, 1.0);
    const HolonomyOperator h =
        holonomy_loop(sys, oracles::random_unit3(rng), oracles::uniform(rng, 0.0, 5.0));
    CHECK(std::abs(h.U.m.determinant() - cxd(1.0, 0.0)) <= 1e-12);
  }
}

TEST_CASE("holonomy loops about different axes do not commute") {
  const SpinSystem half(0.5, 1.0);
  const HolonomyOperator uy = holonomy_loop(half, Vec3::UnitY(), 2.0);
  const HolonomyOperator ux = holonomy_loop(half, Vec3::UnitX(), 2.0);
  CHECK((uy.U.m * ux.U.m - ux.U.m * uy.U.m).norm() > 0.1);
}

TEST_CASE("omega_spin anchors") {
  CHECK(omega_spin(0.7, 0.0) == 0.0);
  CHECK(omega_spin(0.7, 2.405) == doctest::Approx(0.7).epsilon(5e-4));
  CHECK(omega_spin(1.0, 0.2) == doctest::Approx(0.01).epsilon(0.01)); // ~ a^2/4
}

TEST_CASE("principal_eigenphases of a loop unitary recover +-gamma m") {
  const SpinSystem half(0.5, 1.0);
  const HolonomyOperator h = holonomy_loop(half, Vec3::UnitZ(), 1.0);
  const Eigen::VectorXd phases = principal_eigenphases(h.U);
  CHECK(phases[0] == doctest::Approx(-0.5 * h.gamma).epsilon(1e-12));
  CHECK(phases[1] == doctest::Approx(0.5 * h.gamma).epsilon(1e-12));
  CHECK_THROWS_AS(principal_eigenphases(OperatorMatrix(Mat(2.0 * Mat::Identity(2, 2)))),
                  std::invalid_argument);
}
