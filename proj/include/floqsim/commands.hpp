#pragma once

#include <cstdint>
#include <iosfwd>

#include "floqsim/config.hpp"

namespace floqsim {

/// Experiment commands behind the CLI. Each writes one CSV document to `out`
/// (identical config gives byte-identical output) and throws on failure:
/// config_error for semantic problems, numeric_guard_error for tripped
/// numerical guards, std::ios_base::failure for I/O.

/// Time series of the driven state over the configured schedule:
/// t, amplitudes (Re/Im per basis index), probabilities, |B|, adiabaticity.
void cmd_evolve(const ExperimentConfig& cfg, std::ostream& out);

/// Single-loop measurement sweep over the configured a grid; one row per a
/// with exact and closed-form probabilities and their largest deviation.
void cmd_fig2(const ExperimentConfig& cfg, std::ostream& out);

/// Loop holonomies for the configured axes plus pairwise commutator norms.
/// Non-unit axes are normalized with a warning on `log`.
void cmd_holonomy(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log);

/// Cross-checks the three independent W computations on seeded random draws;
/// per-draw distances go to the CSV, the summary line to `log`.
void cmd_wcheck(const ExperimentConfig& cfg, std::uint64_t seed, std::ostream& out,
                std::ostream& log);

/// Re-emits the normalized config.
void cmd_echo(const ExperimentConfig& cfg, std::ostream& out);

/// 17-significant-digit formatting used for every CSV number.
std::string csv_num(double v);

} // namespace floqsim
