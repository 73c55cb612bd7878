#pragma once

#include <functional>
#include <limits>

#include "floqsim/transform.hpp"

namespace floqsim {

/// Unitary propagator over [t0, t1] with diagnostics. adiabaticity_max stays
/// NaN unless the caller fills it from adiabaticity_check.
struct PropagatorResult {
  OperatorMatrix U;
  double t0 = 0.0;
  double t1 = 0.0;
  long steps_used = 0;
  double unitarity_defect = 0.0;
  double adiabaticity_max = std::numeric_limits<double>::quiet_NaN();
};

/// Holonomy of one closed field loop about a fixed unit axis,
/// U = exp(-i gamma F.axis) with the geometric angle gamma.
struct HolonomyOperator {
  Vec3 axis = Vec3::UnitZ();
  double gamma = 0.0;
  OperatorMatrix U;
};

inline constexpr int kDefaultStepsPerPeriod = 512;
inline constexpr int kDefaultSlowStepsPerSegment = 256;
inline constexpr int kMinPropagationSteps = 64;

/// Time-ordered propagator of the driven equation of motion with
/// H(t) = V(lambda(t)) f(omega t + theta): product of midpoint-step
/// exponentials, each exactly unitary, second-order accurate in the step.
/// Guard: steps_per_period >= 64 keeps omega*dt = 2pi/steps below 0.2 rad.
PropagatorResult propagate_exact(const VOperatorMap& map, const DrivingProfile& profile,
                                 double t0, double t1,
                                 int steps_per_period = kDefaultStepsPerPeriod);

/// Same stepping applied to a state; on_step (when set) observes every
/// accepted step, including the initial point at step 0.
Vec propagate_state(const VOperatorMap& map, const DrivingProfile& profile, double t0, double t1,
                    int steps_per_period, Vec psi0,
                    const std::function<void(long step, double t, const Vec&)>& on_step = {});

/// Time-ordered exponential of a slow generator w0(t) over `steps` uniform
/// midpoint steps (steps >= 64). Used with the zero-mode Hamiltonian W^(0).
PropagatorResult propagate_effective(const std::function<OperatorMatrix(double)>& w0, double t0,
                                     double t1, int steps);

/// Zero-mode provider t -> W^(0)(t) built from the map's W by phase-grid
/// quadrature.
std::function<OperatorMatrix(double)> w0_provider(const VOperatorMap& map,
                                                  const DrivingProfile& profile,
                                                  int grid = kDefaultPhaseGrid);

/// Micromotion generator S = (F(phase)/omega) V; R = exp(-i S).
OperatorMatrix micromotion_s(const OperatorMatrix& V, const DrivingProfile& profile,
                             double phase);
OperatorMatrix micromotion_s(const SpinSystem& sys, const Vec3& B, const DrivingProfile& profile,
                             double phase);

/// Original-frame propagator assembled from the transformed frame:
/// exp(-i S(t1)) U_body exp(+i S(t0)). U_body is the effective propagator
/// when use_effective is set (steps = total slow steps), otherwise the exact
/// transformed-frame propagator (steps = steps per drive period).
PropagatorResult full_solution(const VOperatorMap& map, const DrivingProfile& profile, double t0,
                               double t1, int steps, bool use_effective,
                               int phase_grid = kDefaultPhaseGrid);

/// Closed-form loop holonomy: gamma = 2pi [1 - J0(a)], U = exp(-i gamma F.axis).
HolonomyOperator holonomy_loop(const SpinSystem& sys, const Vec3& axis, double a);

/// Spin rotation frequency Omega_spin = Omega [1 - J0(a)] for a field
/// rotating at Omega.
double omega_spin(double Omega, double a);

/// Eigenphases of a unitary on the principal branch (-pi, pi], ascending.
/// The geometric-phase exponent of a loop propagator is recovered this way;
/// winding beyond the branch is left to the caller.
Eigen::VectorXd principal_eigenphases(const OperatorMatrix& u);

} // namespace floqsim
