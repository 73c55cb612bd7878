#include "floqsim/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <vector>

namespace floqsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform double in [0, 1) from the raw engine; keeps draws independent of
// the standard library's distribution implementations.
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec3 random_unit3(std::mt19937_64& rng) {
  while (true) {
    const Vec3 v(2.0 * canonical(rng) - 1.0, 2.0 * canonical(rng) - 1.0,
                 2.0 * canonical(rng) - 1.0);
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

double adiabaticity_measure(const VOperatorMap& map, const DrivingProfile& profile, double t,
                            int n_range, int grid) {
  // One phase sweep shared by all requested harmonics.
  std::vector<Mat> samples(static_cast<size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
    samples[static_cast<size_t>(j)] = w_of(map, profile, x, t).m;
  }
  double worst = 0.0;
  for (int n = 1; n <= n_range; ++n) {
    Mat acc = Mat::Zero(samples[0].rows(), samples[0].cols());
    for (int j = 0; j < grid; ++j) {
      const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
      acc += samples[static_cast<size_t>(j)] * std::exp(cxd(0.0, -n * x));
    }
    acc /= static_cast<double>(grid);
    worst = std::max(worst, acc.cwiseAbs().maxCoeff());
  }
  return worst / profile.omega();
}

Eigen::Index initial_index(const ExperimentConfig& cfg) {
  const double m = cfg.initial_m.value_or(cfg.spin);
  return static_cast<Eigen::Index>(std::llround(cfg.spin - m));
}

void emit_matrix(std::ostream& out, const Mat& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << ',' << csv_num(m(r, c).real()) << ',' << csv_num(m(r, c).imag());
    }
  }
}

} // namespace

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void cmd_evolve(const ExperimentConfig& cfg, std::ostream& out) {
  const SpinSystem sys = make_system(cfg);
  const DrivingProfile profile = make_profile(cfg);
  const FieldSchedule schedule = make_schedule(cfg);
  const VOperatorMap map = schedule_map(sys, schedule);
  const Eigen::Index d = sys.dim();

  out << "t";
  for (Eigen::Index k = 0; k < d; ++k) out << ",re_c" << k << ",im_c" << k;
  for (Eigen::Index k = 0; k < d; ++k) out << ",p" << k;
  out << ",Bmag,adiab\n";

  Vec psi0 = Vec::Zero(d);
  psi0[initial_index(cfg)] = 1.0;

  const auto emit_row = [&](double t, const Vec& psi) {
    out << csv_num(t);
    for (Eigen::Index k = 0; k < d; ++k) {
      out << ',' << csv_num(psi[k].real()) << ',' << csv_num(psi[k].imag());
    }
    for (Eigen::Index k = 0; k < d; ++k) out << ',' << csv_num(std::norm(psi[k]));
    out << ',' << csv_num(schedule.B(t).norm());
    out << ',' << csv_num(adiabaticity_measure(map, profile, t, 3, cfg.phase_grid));
    out << '\n';
  };

  long last_emitted = -1;
  long final_step = -1;
  Vec final_psi;
  double final_t = schedule.t_begin();
  propagate_state(map, profile, schedule.t_begin(), schedule.t_end(), cfg.steps_per_period, psi0,
                  [&](long step, double t, const Vec& psi) {
                    final_step = step;
                    final_t = t;
                    final_psi = psi;
                    if (step % cfg.output_stride == 0) {
                      emit_row(t, psi);
                      last_emitted = step;
                    }
                  });
  if (last_emitted != final_step && final_step >= 0) {
    // The endpoint row is always included.
    emit_row(final_t, final_psi);
  }
}

void cmd_fig2(const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.fig2.present) {
    throw config_error("fig2 command needs a [fig2] section");
  }
  if (!(cfg.fig2.a_step > 0.0) || cfg.fig2.a_stop < cfg.fig2.a_start) {
    throw config_error("[fig2]: need a_step > 0 and a_stop >= a_start");
  }
  if (!(cfg.fig2.rho > 0.0)) {
    throw config_error("[fig2]: rho must be positive");
  }

  std::vector<double> a_grid;
  const long n =
      static_cast<long>(std::floor((cfg.fig2.a_stop - cfg.fig2.a_start) / cfg.fig2.a_step + 1e-9));
  for (long k = 0; k <= n; ++k) {
    a_grid.push_back(cfg.fig2.a_start + static_cast<double>(k) * cfg.fig2.a_step);
  }

  const SpinSystem sys = make_system(cfg);
  const DrivingProfile profile = make_profile(cfg);
  const auto rows = run_fig2(sys, profile, a_grid, cfg.fig2.rho, cfg.steps_per_period,
                             cfg.fig2.ramp_periods);

  out << "a,gamma,p1_exact,p0_exact,pm1_exact,p1_analytic,p0_analytic,pm1_analytic,max_dev\n";
  for (const LoopComparisonRow& row : rows) {
    out << csv_num(row.a) << ',' << csv_num(row.gamma);
    for (double p : row.p_exact) out << ',' << csv_num(p);
    for (double p : row.p_analytic) out << ',' << csv_num(p);
    out << ',' << csv_num(row.max_dev) << '\n';
  }
}

void cmd_holonomy(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log) {
  if (!cfg.holonomy.present || cfg.holonomy.axes.empty()) {
    throw config_error("holonomy command needs a [holonomy] section with at least one axis");
  }
  const SpinSystem sys = make_system(cfg);
  const Eigen::Index d = sys.dim();

  std::vector<HolonomyOperator> loops;
  for (size_t i = 0; i < cfg.holonomy.axes.size(); ++i) {
    Vec3 axis = cfg.holonomy.axes[i];
    const double n = axis.norm();
    if (!(n > 0.0)) {
      throw config_error("[holonomy]: axis " + std::to_string(i) + " is zero");
    }
    if (std::abs(n - 1.0) > 1e-12) {
      log << "holonomy: normalizing axis " << i << " (|axis| = " << n << ")\n";
      axis /= n;
    }
    loops.push_back(holonomy_loop(sys, axis, cfg.holonomy.a));
  }

  out << "item,first,second,ax,ay,az,bx,by,bz,gamma,fnorm";
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      out << ",m" << r << c << "_re,m" << r << c << "_im";
    }
  }
  out << '\n';

  for (size_t i = 0; i < loops.size(); ++i) {
    const HolonomyOperator& h = loops[i];
    out << "loop," << i << ",-1," << csv_num(h.axis.x()) << ',' << csv_num(h.axis.y()) << ','
        << csv_num(h.axis.z()) << ",0,0,0," << csv_num(h.gamma) << ','
        << csv_num(h.U.m.norm());
    emit_matrix(out, h.U.m);
    out << '\n';
  }
  for (size_t i = 0; i < loops.size(); ++i) {
    for (size_t j = i + 1; j < loops.size(); ++j) {
      const Mat comm = loops[i].U.m * loops[j].U.m - loops[j].U.m * loops[i].U.m;
      out << "comm," << i << ',' << j << ',' << csv_num(loops[i].axis.x()) << ','
          << csv_num(loops[i].axis.y()) << ',' << csv_num(loops[i].axis.z()) << ','
          << csv_num(loops[j].axis.x()) << ',' << csv_num(loops[j].axis.y()) << ','
          << csv_num(loops[j].axis.z()) << ",0," << csv_num(comm.norm());
      emit_matrix(out, comm);
      out << '\n';
    }
  }
}

void cmd_wcheck(const ExperimentConfig& cfg, std::uint64_t seed, std::ostream& out,
                std::ostream& log) {
  const int draws = cfg.wcheck.present ? cfg.wcheck.draws : 100;
  const double a_max = cfg.wcheck.present ? cfg.wcheck.a_max : 1.0;
  if (draws < 1) throw config_error("[wcheck]: draws must be positive");
  if (!(a_max > 0.0)) throw config_error("[wcheck]: a_max must be positive");
  if (!(cfg.g_factor != 0.0)) throw config_error("wcheck needs a nonzero g_factor");

  const DrivingProfile profile = make_profile(cfg);
  const double omega = cfg.omega;
  std::mt19937_64 rng(seed);

  out << "draw,f_F,a,phase,d_numeric_series,d_numeric_closed,d_series_closed\n";
  double worst_ns = 0.0, worst_nc = 0.0, worst_sc = 0.0;
  const double f_values[3] = {0.5, 1.0, 1.5};
  for (int k = 0; k < draws; ++k) {
    const double f_F = f_values[k % 3];
    const SpinSystem sys(f_F, cfg.g_factor);
    const double a = a_max * canonical(rng);
    const double phase = kTwoPi * canonical(rng);
    const Vec3 B = (a * omega / std::abs(cfg.g_factor)) * random_unit3(rng);
    const Vec3 Bdot = (omega * omega / std::abs(cfg.g_factor)) *
                      Vec3(2.0 * canonical(rng) - 1.0, 2.0 * canonical(rng) - 1.0,
                           2.0 * canonical(rng) - 1.0);

    const VOperatorMap map =
        make_spin_map(sys, [B, Bdot](double) { return FieldVector{B, Bdot}; });
    const OperatorMatrix w_num = w_numeric(map, profile, phase, 0.0);
    const OperatorMatrix w_ser = w_series(profile.primitive(phase) / omega, zeeman_v(sys, B),
                                          zeeman_v(sys, Bdot), 12);
    const OperatorMatrix w_cls = w_spin_closed(sys, {B, Bdot}, profile, phase);

    const double dns = dist(w_num, w_ser);
    const double dnc = dist(w_num, w_cls);
    const double dsc = dist(w_ser, w_cls);
    worst_ns = std::max(worst_ns, dns);
    worst_nc = std::max(worst_nc, dnc);
    worst_sc = std::max(worst_sc, dsc);

    out << k << ',' << csv_num(f_F) << ',' << csv_num(a) << ',' << csv_num(phase) << ','
        << csv_num(dns) << ',' << csv_num(dnc) << ',' << csv_num(dsc) << '\n';
  }
  log << "wcheck: " << draws << " draws, a <= " << a_max << ", max pairwise distance "
      << std::max({worst_ns, worst_nc, worst_sc}) << " (numeric/series " << worst_ns
      << ", numeric/closed " << worst_nc << ", series/closed " << worst_sc << ")\n";
}

void cmd_echo(const ExperimentConfig& cfg, std::ostream& out) { out << normalized_config(cfg); }

} // namespace floqsim
