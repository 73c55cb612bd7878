#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "floqsim/commands.hpp"
#include "floqsim/config.hpp"

using namespace floqsim;

namespace {

const char* kFig2Config = R"(# measurement sweep
spin = 1
g_factor = 1
omega = 1
theta = 0
drive = harmonic
steps_per_period = 256

[fig2]
rho = 0.1
a_start = 0
a_stop = 1
a_step = 0.5
ramp_periods = 5
)";

const char* kEvolveConfig = R"(spin = 1
g_factor = 1
omega = 1
steps_per_period = 256
output_stride = 64

[ramp_up]
periods = 5
target = 0 0 1

[rotate_loop]
axis = 0 1 0
cycles = 1
rho = 0.1

[ramp_down]
periods = 5
)";

ExperimentConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

} // namespace

TEST_CASE("config parsing: values, defaults, and line-anchored errors") {
  const ExperimentConfig cfg = parse_text(kFig2Config);
  CHECK(cfg.spin == 1.0);
  CHECK(cfg.omega == 1.0);
  CHECK(cfg.steps_per_period == 256);
  CHECK(cfg.phase_grid == 256); // default
  CHECK(cfg.fig2.present);
  CHECK(cfg.fig2.rho == 0.1);
  CHECK(cfg.fig2.ramp_periods == 5);

  CHECK_THROWS_WITH_AS(parse_text("spin = 1\nbogus_key = 3\n"), doctest::Contains("line 2"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_text("spin = 1\ng_factor = 1\n"), doctest::Contains("omega"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_text("spin = 0.3\ng_factor = 1\nomega = 1\n"),
                       doctest::Contains("half-integer"), config_error);
  CHECK_THROWS_WITH_AS(
      parse_text("spin = 1\ng_factor = 1\nomega = 1\n[rotate_loop]\naxis = 0 1 0\n"),
      doctest::Contains("omega_rot"), config_error);
}

TEST_CASE("config normalization round-trips to an equivalent experiment") {
  for (const char* text : {kFig2Config, kEvolveConfig}) {
    const ExperimentConfig cfg = parse_text(text);
    const std::string normalized = normalized_config(cfg);
    const ExperimentConfig cfg2 = parse_text(normalized);
    CHECK(normalized_config(cfg2) == normalized);
  }
}

TEST_CASE("schedule construction from config validates segments by index") {
  // a rho-driven loop with no field ramped up first is rejected
  const ExperimentConfig cfg = parse_text(
      "spin = 1\ng_factor = 1\nomega = 1\n[rotate_loop]\naxis = 0 1 0\nrho = 0.1\n");
  CHECK_THROWS_WITH_AS(make_schedule(cfg), doctest::Contains("segment 0"), config_error);

  const ExperimentConfig ok = parse_text(kEvolveConfig);
  const FieldSchedule schedule = make_schedule(ok);
  CHECK(schedule.segments().size() == 3);
  CHECK(schedule.is_measurement());
  // rho = 0.1 at |B| = 1, g = 1, omega = 1 -> loop omega 0.1 -> 10 periods
  const auto& loop = schedule.segments()[1];
  CHECK((loop.t_end - loop.t_begin) ==
        doctest::Approx(10.0 * 2.0 * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("cmd_fig2: pinned header, trivial row, and byte determinism") {
  const ExperimentConfig cfg = parse_text(kFig2Config);
  std::ostringstream out1, out2;
  cmd_fig2(cfg, out1);
  cmd_fig2(cfg, out2);
  CHECK(out1.str() == out2.str());

  std::istringstream lines(out1.str());
  std::string header, row0;
  std::getline(lines, header);
  CHECK(header ==
        "a,gamma,p1_exact,p0_exact,pm1_exact,p1_analytic,p0_analytic,pm1_analytic,max_dev");
  std::getline(lines, row0);
  CHECK(row0.substr(0, 4) == "0,0,"); // a = 0 row: gamma = 0
  CHECK(row0.find(",1,") != std::string::npos);

  int rows = 1;
  std::string line;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 3); // a = 0, 0.5, 1
}

TEST_CASE("cmd_fig2 requires its section") {
  ExperimentConfig cfg = parse_text(kEvolveConfig);
  std::ostringstream out;
  CHECK_THROWS_AS(cmd_fig2(cfg, out), config_error);
}

TEST_CASE("cmd_evolve: trivial zero-field run keeps probabilities constant") {
  const ExperimentConfig cfg = parse_text(
      "spin = 1\ng_factor = 1\nomega = 1\nsteps_per_period = 128\noutput_stride = 32\n"
      "[ramp_up]\nperiods = 2\ntarget = 0 0 0\n");
  std::ostringstream out;
  cmd_evolve(cfg, out);

  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,re_c0,im_c0,re_c1,im_c1,re_c2,im_c2,p0,p1,p2,Bmag,adiab");
  std::string row;
  int rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    // p0 stays 1, |B| stays 0
    CHECK(row.find(",1,0,0,0,") != std::string::npos);
  }
  CHECK(rows >= 2);
}

TEST_CASE("cmd_evolve final probabilities agree with the sweep harness") {
  const ExperimentConfig cfg = parse_text(kEvolveConfig);
  std::ostringstream out;
  cmd_evolve(cfg, out);

  // last CSV row
  const std::string text = out.str();
  const auto last_newline = text.find_last_of('\n', text.size() - 2);
  std::istringstream row(text.substr(last_newline + 1));
  std::string cell;
  std::vector<double> cells;
  while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
  // columns: t, 6 amplitude cells, p0, p1, p2, Bmag, adiab
  const double p0 = cells[7], p1 = cells[8], p2 = cells[9];

  const SpinSystem sys = make_system(cfg);
  const DrivingProfile profile = make_profile(cfg);
  const auto rows = run_fig2(sys, profile, {1.0}, 0.1, cfg.steps_per_period, 5);
  CHECK(p0 == doctest::Approx(rows[0].p_exact[0]).epsilon(1e-9));
  CHECK(p1 == doctest::Approx(rows[0].p_exact[1]).epsilon(1e-9));
  CHECK(p2 == doctest::Approx(rows[0].p_exact[2]).epsilon(1e-9));
}

TEST_CASE("cmd_holonomy: gamma column, loop and commutator rows") {
  const ExperimentConfig cfg = parse_text(
      "spin = 0.5\ng_factor = 1\nomega = 1\n[holonomy]\na = 2\naxis = 1 0 0\naxis = 0 2 0\n");
  std::ostringstream out, log;
  cmd_holonomy(cfg, out, log);
  CHECK(log.str().find("normalizing axis 1") != std::string::npos);

  std::istringstream lines(out.str());
  std::string header, loop0, loop1, comm;
  std::getline(lines, header);
  const std::string prefix = "item,first,second,ax,ay,az,bx,by,bz,gamma,fnorm";
  CHECK(header.substr(0, prefix.size()) == prefix);
  std::getline(lines, loop0);
  std::getline(lines, loop1);
  std::getline(lines, comm);
  CHECK(loop0.substr(0, 5) == "loop,");
  CHECK(comm.substr(0, 5) == "comm,");

  // gamma = 2 pi (1 - J0(2)) in the loop rows
  const double gamma_expected = 2.0 * std::numbers::pi * (1.0 - bessel_j0(2.0));
  std::istringstream cellstream(loop0);
  std::string cell;
  for (int k = 0; k <= 9; ++k) std::getline(cellstream, cell, ',');
  CHECK(std::stod(cell) == doctest::Approx(gamma_expected).epsilon(1e-12));

  // nonzero commutator norm for orthogonal axes at a = 2 (column 10)
  std::istringstream commstream(comm);
  for (int k = 0; k <= 10; ++k) std::getline(commstream, cell, ',');
  CHECK(std::stod(cell) > 0.1);
}

TEST_CASE("cmd_holonomy: single axis at a = 0 emits an identity loop") {
  const ExperimentConfig cfg = parse_text(
      "spin = 0.5\ng_factor = 1\nomega = 1\n[holonomy]\na = 0\naxis = 0 0 1\n");
  std::ostringstream out, log;
  cmd_holonomy(cfg, out, log);
  CHECK(log.str().empty());

  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::vector<std::string> cells;
  std::istringstream cellstream(row);
  std::string cell;
  while (std::getline(cellstream, cell, ',')) cells.push_back(cell);
  // gamma = 0 and U = I: entries m00, m01, m10, m11 follow fnorm at index 10
  CHECK(std::stod(cells[9]) == 0.0);
  CHECK(std::stod(cells[11]) == doctest::Approx(1.0).epsilon(1e-12)); // m00_re
  CHECK(std::stod(cells[13]) == doctest::Approx(0.0).epsilon(1e-12)); // m01_re
  CHECK(std::stod(cells[17]) == doctest::Approx(1.0).epsilon(1e-12)); // m11_re
  CHECK(!std::getline(lines, row)); // no pair rows with one axis
}

TEST_CASE("cmd_wcheck: deterministic per seed, distances within the oracle tolerance") {
  const ExperimentConfig cfg = parse_text(
      "spin = 1\ng_factor = 1\nomega = 1\n[wcheck]\ndraws = 30\na_max = 1\n");
  std::ostringstream out1, out2, out3, log;
  cmd_wcheck(cfg, 7, out1, log);
  cmd_wcheck(cfg, 7, out2, log);
  cmd_wcheck(cfg, 8, out3, log);
  CHECK(out1.str() == out2.str());
  CHECK(out1.str() != out3.str());
  CHECK(log.str().find("max pairwise distance") != std::string::npos);

  std::istringstream lines(out1.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "draw,f_F,a,phase,d_numeric_series,d_numeric_closed,d_series_closed");
  int rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    std::istringstream cells(row);
    std::string cell;
    for (int k = 0; k <= 6; ++k) {
      std::getline(cells, cell, ',');
      if (k >= 4) CHECK(std::stod(cell) <= 1e-6);
    }
  }
  CHECK(rows == 30);
}

TEST_CASE("tabulated drive files plug into the config") {
  const std::string path = "cli_test_drive_table.txt";
  {
    std::ofstream table(path);
    table << std::setprecision(17);
    const int n = 128;
    for (int j = 0; j < n; ++j) {
      const double x = 2.0 * std::numbers::pi * j / n;
      table << x << " " << std::cos(x) + 0.2 * std::cos(2.0 * x) << "\n";
    }
  }
  const ExperimentConfig cfg =
      parse_text("spin = 0.5\ng_factor = 1\nomega = 2\ndrive = " + path + "\n");
  const DrivingProfile profile = make_profile(cfg);
  CHECK(std::abs(profile.fourier(1) - cxd(0.5, 0.0)) <= 1e-6);
  CHECK(std::abs(profile.fourier(2) - cxd(0.1, 0.0)) <= 1e-6);
  CHECK(profile.omega() == 2.0);
  std::remove(path.c_str());

  ExperimentConfig missing = cfg;
  missing.drive = "does_not_exist.txt";
  CHECK_THROWS_AS(make_profile(missing), std::ios_base::failure);
}

TEST_CASE("csv numbers carry 17 significant digits") {
  CHECK(csv_num(1.0) == "1");
  CHECK(csv_num(0.1) == "0.10000000000000001");
  CHECK(csv_num(-2.5e-17) == "-2.4999999999999999e-17");
  CHECK(std::stod(csv_num(std::numbers::pi)) == std::numbers::pi); // round-trips exactly
}
