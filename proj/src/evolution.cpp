#include "floqsim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace floqsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_window(double t0, double t1, const char* who) {
  if (!(t1 >= t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
    std::ostringstream os;
    os << who << ": invalid time window [" << t0 << ", " << t1 << "]";
    throw std::invalid_argument(os.str());
  }
}

long step_count(double t0, double t1, double dt_target) {
  if (t1 == t0) return 0;
  return std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) / dt_target - 1e-12)));
}

void check_steps_per_period(int steps_per_period, double omega, const char* who) {
  if (steps_per_period < kMinPropagationSteps) {
    std::ostringstream os;
    os << who << ": steps_per_period " << steps_per_period << " gives omega*dt = "
       << kTwoPi / steps_per_period << "; need >= " << kMinPropagationSteps
       << " steps (omega*dt < 0.2) at omega = " << omega;
    throw numeric_guard_error(os.str());
  }
}

} // namespace

PropagatorResult propagate_exact(const VOperatorMap& map, const DrivingProfile& profile,
                                 double t0, double t1, int steps_per_period) {
  require_window(t0, t1, "propagate_exact");
  check_steps_per_period(steps_per_period, profile.omega(), "propagate_exact");

  const double period = kTwoPi / profile.omega();
  const long n = step_count(t0, t1, period / steps_per_period);
  const double dt = n > 0 ? (t1 - t0) / static_cast<double>(n) : 0.0;

  Mat u = Mat::Identity(map.dim, map.dim);
  for (long k = 0; k < n; ++k) {
    const double tm = t0 + (static_cast<double>(k) + 0.5) * dt;
    const OperatorMatrix v = map.v(map.lambda(tm));
    u = unitary_exp(v, dt * profile.f(profile.phase(tm))).m * u;
  }

  PropagatorResult res;
  res.U = OperatorMatrix(std::move(u), /*herm=*/false, /*unit=*/true);
  res.t0 = t0;
  res.t1 = t1;
  res.steps_used = n;
  res.unitarity_defect = unitarity_defect(res.U.m);
  return res;
}

Vec propagate_state(const VOperatorMap& map, const DrivingProfile& profile, double t0, double t1,
                    int steps_per_period, Vec psi0,
                    const std::function<void(long, double, const Vec&)>& on_step) {
  require_window(t0, t1, "propagate_state");
  check_steps_per_period(steps_per_period, profile.omega(), "propagate_state");

  const double period = kTwoPi / profile.omega();
  const long n = step_count(t0, t1, period / steps_per_period);
  const double dt = n > 0 ? (t1 - t0) / static_cast<double>(n) : 0.0;

  Vec psi = std::move(psi0);
  if (on_step) on_step(0, t0, psi);
  for (long k = 0; k < n; ++k) {
    const double tm = t0 + (static_cast<double>(k) + 0.5) * dt;
    const OperatorMatrix v = map.v(map.lambda(tm));
    psi = unitary_exp(v, dt * profile.f(profile.phase(tm))).m * psi;
    if (on_step) on_step(k + 1, t0 + static_cast<double>(k + 1) * dt, psi);
  }
  return psi;
}

PropagatorResult propagate_effective(const std::function<OperatorMatrix(double)>& w0, double t0,
                                     double t1, int steps) {
  require_window(t0, t1, "propagate_effective");
  if (steps < kMinPropagationSteps) {
    std::ostringstream os;
    os << "propagate_effective: need at least " << kMinPropagationSteps << " steps, got " << steps;
    throw numeric_guard_error(os.str());
  }

  const long n = (t1 == t0) ? 0 : steps;
  const double dt = n > 0 ? (t1 - t0) / static_cast<double>(n) : 0.0;
  Eigen::Index d = 0;
  Mat u;
  for (long k = 0; k < n; ++k) {
    const double tm = t0 + (static_cast<double>(k) + 0.5) * dt;
    const OperatorMatrix wk = w0(tm);
    if (k == 0) {
      d = wk.dim();
      u = Mat::Identity(d, d);
    }
    u = unitary_exp(wk, dt).m * u;
  }
  if (n == 0) {
    // Zero-length window: identity of the generator's dimension.
    d = w0(t0).dim();
    u = Mat::Identity(d, d);
  }

  PropagatorResult res;
  res.U = OperatorMatrix(std::move(u), /*herm=*/false, /*unit=*/true);
  res.t0 = t0;
  res.t1 = t1;
  res.steps_used = n;
  res.unitarity_defect = unitarity_defect(res.U.m);
  return res;
}

std::function<OperatorMatrix(double)> w0_provider(const VOperatorMap& map,
                                                  const DrivingProfile& profile, int grid) {
  return [map, profile, grid](double t) {
    return w_fourier(0, [&](double phase) { return w_of(map, profile, phase, t); }, grid);
  };
}

OperatorMatrix micromotion_s(const OperatorMatrix& V, const DrivingProfile& profile,
                             double phase) {
  Mat s = (profile.primitive(phase) / profile.omega()) * V.m;
  return OperatorMatrix(std::move(s), /*herm=*/true, /*unit=*/false);
}

OperatorMatrix micromotion_s(const SpinSystem& sys, const Vec3& B, const DrivingProfile& profile,
                             double phase) {
  return micromotion_s(zeeman_v(sys, B), profile, phase);
}

PropagatorResult full_solution(const VOperatorMap& map, const DrivingProfile& profile, double t0,
                               double t1, int steps, bool use_effective, int phase_grid) {
  require_window(t0, t1, "full_solution");

  PropagatorResult body;
  if (use_effective) {
    body = propagate_effective(w0_provider(map, profile, phase_grid), t0, t1, steps);
  } else {
    // Exact transformed-frame propagation: midpoint stepping of W(phase, t)
    // at the running phase, resolved like the original-frame propagator.
    check_steps_per_period(steps, profile.omega(), "full_solution");
    const double period = kTwoPi / profile.omega();
    const long n = step_count(t0, t1, period / steps);
    const double dt = n > 0 ? (t1 - t0) / static_cast<double>(n) : 0.0;
    Mat u = Mat::Identity(map.dim, map.dim);
    for (long k = 0; k < n; ++k) {
      const double tm = t0 + (static_cast<double>(k) + 0.5) * dt;
      u = unitary_exp(w_of(map, profile, profile.phase(tm), tm), dt).m * u;
    }
    body.U = OperatorMatrix(std::move(u), /*herm=*/false, /*unit=*/true);
    body.t0 = t0;
    body.t1 = t1;
    body.steps_used = n;
  }

  const OperatorMatrix s1 = micromotion_s(map.v(map.lambda(t1)), profile, profile.phase(t1));
  const OperatorMatrix s0 = micromotion_s(map.v(map.lambda(t0)), profile, profile.phase(t0));
  Mat u = unitary_exp(s1, 1.0).m * body.U.m * unitary_exp(s0, -1.0).m;

  PropagatorResult res;
  res.U = OperatorMatrix(std::move(u), /*herm=*/false, /*unit=*/true);
  res.t0 = t0;
  res.t1 = t1;
  res.steps_used = body.steps_used;
  res.unitarity_defect = unitarity_defect(res.U.m);
  return res;
}

HolonomyOperator holonomy_loop(const SpinSystem& sys, const Vec3& axis, double a) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "holonomy_loop: axis must be a unit vector, |axis| = " << axis.norm();
    throw std::invalid_argument(os.str());
  }
  HolonomyOperator h;
  h.axis = axis;
  h.gamma = kTwoPi * (1.0 - bessel_j0(a));
  h.U = unitary_exp(sys.f_dot(axis), h.gamma);
  return h;
}

double omega_spin(double Omega, double a) { return Omega * (1.0 - bessel_j0(a)); }

Eigen::VectorXd principal_eigenphases(const OperatorMatrix& u) {
  if (unitarity_defect(u.m) > tol::unitary_abs * 10.0) {
    throw std::invalid_argument("principal_eigenphases: input is not unitary");
  }
  Eigen::ComplexEigenSolver<Mat> solver(u.m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("principal_eigenphases: eigensolver failed");
  }
  Eigen::VectorXd phases(u.dim());
  for (Eigen::Index k = 0; k < u.dim(); ++k) {
    double ph = std::arg(solver.eigenvalues()[k]); // in (-pi, pi]
    if (ph <= -std::numbers::pi) ph = std::numbers::pi;
    phases[k] = ph;
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

} // namespace floqsim
