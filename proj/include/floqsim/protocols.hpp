#pragma once

#include <array>
#include <vector>

#include "floqsim/evolution.hpp"

namespace floqsim {

/// Piecewise slow field path B(t) with an analytic derivative. Segments are
/// contiguous in time and join with both B and Bdot continuous: ramps move
/// the amplitude along a fixed direction with a cubic smoothstep (zero end
/// slopes), and rotation loops advance their rotation angle with the same
/// smoothstep so the angular speed also vanishes at the joins. |B| is
/// constant during a rotation loop.
class FieldSchedule {
public:
  enum class Kind { ramp_up, rotate_loop, ramp_down };

  struct Segment {
    Kind kind = Kind::ramp_up;
    double t_begin = 0.0;
    double t_end = 0.0;
    Vec3 direction = Vec3::UnitZ(); // ramps: fixed field direction
    double amp_from = 0.0;          // ramps: amplitude endpoints
    double amp_to = 0.0;
    Vec3 axis = Vec3::UnitZ();      // loop: rotation axis
    Vec3 entry = Vec3::Zero();      // loop: field at segment start
    double total_angle = 0.0;       // loop: 2 pi * cycles
    double omega_rot = 0.0;         // loop: nominal angular frequency
  };

  explicit FieldSchedule(double t_start = 0.0) : t0_(t_start) {}

  FieldSchedule& ramp_up(double duration, const Vec3& target);
  FieldSchedule& rotate_loop(const Vec3& axis, double omega_rot, double cycles);
  FieldSchedule& ramp_down(double duration);

  double t_begin() const { return t0_; }
  double t_end() const { return segments_.empty() ? t0_ : segments_.back().t_end; }

  Vec3 B(double t) const;
  Vec3 Bdot(double t) const;
  FieldVector sample(double t) const { return FieldVector{B(t), Bdot(t)}; }

  /// Zero field at both ends, so micromotion cannot contribute to a
  /// measurement built on this schedule.
  bool is_measurement() const;

  const std::vector<Segment>& segments() const { return segments_; }

private:
  Vec3 field_at_end() const;
  double t0_ = 0.0;
  std::vector<Segment> segments_;
};

/// Adiabaticity ratio rho = Omega g_F B0 / omega^2 controlling the validity
/// of the band-decoupled description.
double rho(double Omega, double g_F, double B0, double omega);

/// Measurement sequence: smoothstep ramp up along e_z over ramp_periods
/// drive periods, a single rotation cycle about `loop_axis` at the nominal
/// frequency Omega = rho * omega / a, and a ramp down along the final
/// direction. a <= 0 degenerates to the zero-field schedule. Throws a guard
/// error when the ramp is fast enough to break the adiabatic condition
/// g_F f_F |Bdot| / omega < 0.2 omega.
FieldSchedule build_fig2_schedule(double B0, double a, double rho_ratio, double omega,
                                  int ramp_periods, const Vec3& loop_axis = Vec3::UnitY(),
                                  double f_F = 1.0);

/// VOperatorMap for a spin following the schedule.
VOperatorMap schedule_map(const SpinSystem& sys, const FieldSchedule& schedule);

struct LoopComparisonRow {
  double a = 0.0;
  double gamma = 0.0;
  std::array<double, 3> p_exact{};    // m_F = +1, 0, -1
  std::array<double, 3> p_analytic{}; // cos^4(g/2), sin^2(g)/2, sin^4(g/2)
  double max_dev = 0.0;
};

/// Single y-loop measurement sweep for a spin-1 system starting in m_F = +1
/// along z: exact propagation through the full schedule against the
/// closed-form loop probabilities.
std::vector<LoopComparisonRow> run_fig2(const SpinSystem& sys, const DrivingProfile& profile,
                                        const std::vector<double>& a_grid, double rho_ratio,
                                        int steps_per_period = kDefaultStepsPerPeriod,
                                        int ramp_periods = 5);

/// Exact propagation of ramp-up, loop about axis1, loop about axis2,
/// ramp-down. The closed-form counterpart is the right-to-left product
/// holonomy(axis2) * holonomy(axis1). Axes must be unit vectors orthogonal
/// to e_z (the ramped direction).
PropagatorResult run_double_loop(const SpinSystem& sys, const DrivingProfile& profile, double a,
                                 double rho_ratio, const Vec3& axis1, const Vec3& axis2,
                                 int steps_per_period = kDefaultStepsPerPeriod,
                                 int ramp_periods = 5);

} // namespace floqsim
