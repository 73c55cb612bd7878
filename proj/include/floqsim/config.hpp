#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "floqsim/common.hpp"
#include "floqsim/driving.hpp"
#include "floqsim/protocols.hpp"
#include "floqsim/spin.hpp"

namespace floqsim {

/// One schedule segment block from a config file.
struct SegmentConfig {
  std::string kind; // ramp_up | rotate_loop | ramp_down
  int line = 0;
  double periods = 0.0; // ramps: duration in drive periods
  Vec3 target = Vec3::Zero();
  Vec3 axis = Vec3::Zero();
  double cycles = 1.0;
  std::optional<double> omega_rot; // exactly one of omega_rot / rho per loop
  std::optional<double> rho;
};

struct Fig2Config {
  bool present = false;
  double rho = 0.0;
  double a_start = 0.0;
  double a_stop = 0.0;
  double a_step = 0.0;
  int ramp_periods = 5;
};

struct HolonomyConfig {
  bool present = false;
  double a = 0.0;
  std::vector<Vec3> axes;
};

struct WcheckConfig {
  bool present = false;
  int draws = 100;
  double a_max = 1.0;
};

/// Flat key-value experiment description; see README for the format.
struct ExperimentConfig {
  double spin = 0.0;
  double g_factor = 0.0;
  double omega = 0.0;
  double theta = 0.0;
  std::string drive = "harmonic"; // "harmonic" or a drive-table path
  int steps_per_period = kDefaultStepsPerPeriod;
  int phase_grid = kDefaultPhaseGrid;
  int output_stride = 1;
  std::optional<double> initial_m; // defaults to m_F = +f_F
  std::string out;

  std::vector<SegmentConfig> segments;
  Fig2Config fig2;
  HolonomyConfig holonomy;
  WcheckConfig wcheck;
};

/// Parses and validates; throws config_error with a line anchor.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path); // io failures -> std::ios_base::failure

/// Canonical re-emission: fixed key order and 17-significant-digit numbers.
/// parse(normalize(parse(text))) describes the same experiment.
std::string normalized_config(const ExperimentConfig& cfg);

SpinSystem make_system(const ExperimentConfig& cfg);
DrivingProfile make_profile(const ExperimentConfig& cfg);
/// Builds the schedule, resolving per-loop rho into an angular frequency via
/// Omega = rho * omega^2 / (g_F * |B|) at loop entry.
FieldSchedule make_schedule(const ExperimentConfig& cfg);

} // namespace floqsim
