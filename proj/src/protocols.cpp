#include "floqsim/protocols.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace floqsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }
double smoothstep_deriv(double u) { return 6.0 * u * (1.0 - u); }
constexpr double kSmoothstepPeakSlope = 1.5;

// Rodrigues rotation of v about unit axis n by angle phi.
Vec3 rotate(const Vec3& n, double phi, const Vec3& v) {
  return v * std::cos(phi) + n.cross(v) * std::sin(phi) + n * (n.dot(v)) * (1.0 - std::cos(phi));
}

[[noreturn]] void segment_error(size_t index, const std::string& what) {
  std::ostringstream os;
  os << "segment " << index << ": " << what;
  throw config_error(os.str());
}

} // namespace

Vec3 FieldSchedule::field_at_end() const {
  if (segments_.empty()) return Vec3::Zero();
  const Segment& s = segments_.back();
  switch (s.kind) {
    case Kind::ramp_up:
    case Kind::ramp_down:
      return s.direction * s.amp_to;
    case Kind::rotate_loop:
      return rotate(s.axis, s.total_angle, s.entry);
  }
  return Vec3::Zero();
}

FieldSchedule& FieldSchedule::ramp_up(double duration, const Vec3& target) {
  const size_t index = segments_.size();
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    segment_error(index, "ramp_up duration must be positive");
  }
  if (!target.allFinite()) segment_error(index, "ramp_up target must be finite");
  const Vec3 from = field_at_end();
  const double amp = target.norm();
  Vec3 dir;
  if (amp > 0.0) {
    dir = target / amp;
    if (from.norm() > 1e-12 && (from - from.norm() * dir).norm() > 1e-9 * std::max(1.0, amp)) {
      segment_error(index, "ramp_up target direction differs from the current field direction");
    }
  } else {
    dir = from.norm() > 0.0 ? Vec3(from.normalized()) : Vec3::UnitZ();
  }
  Segment s;
  s.kind = Kind::ramp_up;
  s.t_begin = t_end();
  s.t_end = s.t_begin + duration;
  s.direction = dir;
  s.amp_from = from.norm();
  s.amp_to = amp;
  segments_.push_back(s);
  return *this;
}

FieldSchedule& FieldSchedule::rotate_loop(const Vec3& axis, double omega_rot, double cycles) {
  const size_t index = segments_.size();
  if (!(omega_rot > 0.0) || !std::isfinite(omega_rot)) {
    segment_error(index, "rotate_loop angular frequency must be positive");
  }
  if (!(cycles > 0.0) || !std::isfinite(cycles)) {
    segment_error(index, "rotate_loop cycles must be positive");
  }
  const double axis_norm = axis.norm();
  if (!(axis_norm > 0.0) || !axis.allFinite()) {
    segment_error(index, "rotate_loop axis must be a nonzero vector");
  }
  Segment s;
  s.kind = Kind::rotate_loop;
  s.t_begin = t_end();
  s.t_end = s.t_begin + cycles * kTwoPi / omega_rot;
  s.axis = axis / axis_norm;
  s.entry = field_at_end();
  s.total_angle = cycles * kTwoPi;
  s.omega_rot = omega_rot;
  segments_.push_back(s);
  return *this;
}

FieldSchedule& FieldSchedule::ramp_down(double duration) {
  const size_t index = segments_.size();
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    segment_error(index, "ramp_down duration must be positive");
  }
  const Vec3 from = field_at_end();
  Segment s;
  s.kind = Kind::ramp_down;
  s.t_begin = t_end();
  s.t_end = s.t_begin + duration;
  s.direction = from.norm() > 0.0 ? Vec3(from.normalized()) : Vec3::UnitZ();
  s.amp_from = from.norm();
  s.amp_to = 0.0;
  segments_.push_back(s);
  return *this;
}

Vec3 FieldSchedule::B(double t) const {
  if (segments_.empty()) return Vec3::Zero();
  if (t <= segments_.front().t_begin) {
    const Segment& s = segments_.front();
    return s.kind == Kind::rotate_loop ? s.entry : s.direction * s.amp_from;
  }
  for (const Segment& s : segments_) {
    if (t > s.t_end) continue;
    const double u = (t - s.t_begin) / (s.t_end - s.t_begin);
    if (s.kind == Kind::rotate_loop) {
      return rotate(s.axis, s.total_angle * smoothstep(u), s.entry);
    }
    return s.direction * (s.amp_from + (s.amp_to - s.amp_from) * smoothstep(u));
  }
  return field_at_end();
}

Vec3 FieldSchedule::Bdot(double t) const {
  for (const Segment& s : segments_) {
    if (t < s.t_begin || t > s.t_end) continue;
    const double tau = s.t_end - s.t_begin;
    const double u = (t - s.t_begin) / tau;
    if (s.kind == Kind::rotate_loop) {
      const double rate = s.total_angle * smoothstep_deriv(u) / tau;
      return rate * s.axis.cross(rotate(s.axis, s.total_angle * smoothstep(u), s.entry));
    }
    return s.direction * ((s.amp_to - s.amp_from) * smoothstep_deriv(u) / tau);
  }
  return Vec3::Zero();
}

bool FieldSchedule::is_measurement() const {
  return B(t_begin()).norm() <= 1e-12 && B(t_end()).norm() <= 1e-12;
}

double rho(double Omega, double g_F, double B0, double omega) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("rho: omega must be positive");
  }
  return Omega * g_F * B0 / (omega * omega);
}

FieldSchedule build_fig2_schedule(double B0, double a, double rho_ratio, double omega,
                                  int ramp_periods, const Vec3& loop_axis, double f_F) {
  if (!(omega > 0.0) || !(rho_ratio > 0.0) || ramp_periods < 1) {
    throw std::invalid_argument("build_fig2_schedule: need omega > 0, rho > 0, ramp_periods >= 1");
  }
  const double period = kTwoPi / omega;
  const double ramp_time = ramp_periods * period;

  // Peak ramp speed against the strong-field adiabatic condition
  // g_F f_F |Bdot| / omega << omega; with g_F B0 = a omega the peak reduces
  // to 1.5 a f_F / ramp_time.
  if (a > 0.0) {
    const double peak = kSmoothstepPeakSlope * a * f_F / ramp_time;
    if (peak >= 0.2 * omega) {
      std::ostringstream os;
      os << "build_fig2_schedule: ramp of " << ramp_periods
         << " periods violates the adiabatic ramp condition (g_F f_F |Bdot| / omega = " << peak
         << " >= " << 0.2 * omega << "); lengthen the ramp";
      throw numeric_guard_error(os.str());
    }
  }

  const double loop_omega = a > 0.0 ? rho_ratio * omega / a : rho_ratio * omega;
  FieldSchedule schedule(0.0);
  schedule.ramp_up(ramp_time, Vec3(0.0, 0.0, B0));
  schedule.rotate_loop(loop_axis, loop_omega, 1.0);
  schedule.ramp_down(ramp_time);
  return schedule;
}

VOperatorMap schedule_map(const SpinSystem& sys, const FieldSchedule& schedule) {
  return make_spin_map(sys, [schedule](double t) { return schedule.sample(t); });
}

std::vector<LoopComparisonRow> run_fig2(const SpinSystem& sys, const DrivingProfile& profile,
                                        const std::vector<double>& a_grid, double rho_ratio,
                                        int steps_per_period, int ramp_periods) {
  if (std::abs(sys.f - 1.0) > 1e-12) {
    throw std::invalid_argument("run_fig2: the closed-form probabilities are for f_F = 1");
  }
  if (!(sys.g > 0.0)) {
    throw std::invalid_argument("run_fig2: need a positive gyromagnetic factor");
  }

  std::vector<LoopComparisonRow> rows;
  rows.reserve(a_grid.size());
  for (double a : a_grid) {
    if (a < 0.0) throw std::invalid_argument("run_fig2: a must be nonnegative");
    const double B0 = a * profile.omega() / sys.g;
    const FieldSchedule schedule =
        build_fig2_schedule(B0, a, rho_ratio, profile.omega(), ramp_periods);
    const VOperatorMap map = schedule_map(sys, schedule);
    const PropagatorResult exact =
        propagate_exact(map, profile, schedule.t_begin(), schedule.t_end(), steps_per_period);

    LoopComparisonRow row;
    row.a = a;
    row.gamma = kTwoPi * (1.0 - bessel_j0(a));
    const double half = 0.5 * row.gamma;
    row.p_analytic = {std::pow(std::cos(half), 4), 0.5 * std::pow(std::sin(row.gamma), 2),
                      std::pow(std::sin(half), 4)};
    for (int k = 0; k < 3; ++k) {
      row.p_exact[static_cast<size_t>(k)] = std::norm(exact.U.m(k, 0)); // initial m_F = +1
      row.max_dev = std::max(row.max_dev, std::abs(row.p_exact[static_cast<size_t>(k)] -
                                                   row.p_analytic[static_cast<size_t>(k)]));
    }
    rows.push_back(row);
  }
  return rows;
}

PropagatorResult run_double_loop(const SpinSystem& sys, const DrivingProfile& profile, double a,
                                 double rho_ratio, const Vec3& axis1, const Vec3& axis2,
                                 int steps_per_period, int ramp_periods) {
  if (!(a > 0.0) || !(sys.g > 0.0)) {
    throw std::invalid_argument("run_double_loop: need a > 0 and a positive g_F");
  }
  for (const Vec3* axis : {&axis1, &axis2}) {
    if (std::abs(axis->norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("run_double_loop: axes must be unit vectors");
    }
    if (std::abs(axis->z()) > 1e-9) {
      throw std::invalid_argument(
          "run_double_loop: axes must be orthogonal to the ramped (z) direction");
    }
  }

  const double omega = profile.omega();
  const double B0 = a * omega / sys.g;
  const double ramp_time = ramp_periods * kTwoPi / omega;
  const double loop_omega = rho_ratio * omega / a;

  const double peak = kSmoothstepPeakSlope * a * sys.f / ramp_time;
  if (peak >= 0.2 * omega) {
    throw numeric_guard_error("run_double_loop: ramp violates the adiabatic ramp condition");
  }

  FieldSchedule schedule(0.0);
  schedule.ramp_up(ramp_time, Vec3(0.0, 0.0, B0));
  schedule.rotate_loop(axis1, loop_omega, 1.0);
  schedule.rotate_loop(axis2, loop_omega, 1.0);
  schedule.ramp_down(ramp_time);

  const VOperatorMap map = schedule_map(sys, schedule);
  PropagatorResult result =
      propagate_exact(map, profile, schedule.t_begin(), schedule.t_end(), steps_per_period);

  // interband-coupling diagnostic at the loop midpoints, where |Bdot| peaks
  double worst = 0.0;
  for (int seg : {1, 2}) {
    const auto& loop = schedule.segments()[static_cast<size_t>(seg)];
    const double tm = 0.5 * (loop.t_begin + loop.t_end);
    worst = std::max(worst, adiabaticity_check(
                                [&](int n) {
                                  return w_fourier(
                                      n, [&](double phase) { return w_of(map, profile, phase, tm); },
                                      kDefaultPhaseGrid);
                                },
                                profile.omega(), 3));
  }
  result.adiabaticity_max = worst;
  return result;
}

} // namespace floqsim
