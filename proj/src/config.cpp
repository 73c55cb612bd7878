#include "floqsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace floqsim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  std::istringstream is(v);
  double x = 0.0;
  if (!(is >> x) || !(is >> std::ws).eof() || !std::isfinite(x)) {
    throw config_error("key '" + key + "' expects one finite number, got '" + v + "'", line);
  }
  return x;
}

int parse_int(const std::string& v, int line, const std::string& key) {
  std::istringstream is(v);
  long x = 0;
  if (!(is >> x) || !(is >> std::ws).eof()) {
    throw config_error("key '" + key + "' expects an integer, got '" + v + "'", line);
  }
  return static_cast<int>(x);
}

Vec3 parse_vec3(const std::string& v, int line, const std::string& key) {
  std::istringstream is(v);
  double x = 0.0, y = 0.0, z = 0.0;
  if (!(is >> x >> y >> z) || !(is >> std::ws).eof()) {
    throw config_error("key '" + key + "' expects three numbers, got '" + v + "'", line);
  }
  Vec3 r(x, y, z);
  if (!r.allFinite()) {
    throw config_error("key '" + key + "' has non-finite components", line);
  }
  return r;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string vec3_str(const Vec3& v) {
  return g17(v.x()) + " " + g17(v.y()) + " " + g17(v.z());
}

} // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  bool seen_spin = false, seen_g = false, seen_omega = false;

  std::string section; // empty = root
  SegmentConfig* segment = nullptr;
  std::string line_text;
  int line = 0;

  while (std::getline(in, line_text)) {
    ++line;
    std::string s = trim(line_text);
    if (s.empty() || s[0] == '#') continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw config_error("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      segment = nullptr;
      if (section == "ramp_up" || section == "rotate_loop" || section == "ramp_down") {
        SegmentConfig seg;
        seg.kind = section;
        seg.line = line;
        cfg.segments.push_back(seg);
        segment = &cfg.segments.back();
      } else if (section == "fig2") {
        cfg.fig2.present = true;
      } else if (section == "holonomy") {
        cfg.holonomy.present = true;
      } else if (section == "wcheck") {
        cfg.wcheck.present = true;
      } else {
        throw config_error("unknown section '" + section + "'", line);
      }
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw config_error("expected 'key = value', got '" + s + "'", line);
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw config_error("empty key or value", line);
    }

    if (section.empty()) {
      if (key == "spin") {
        cfg.spin = parse_double(value, line, key);
        seen_spin = true;
      } else if (key == "g_factor") {
        cfg.g_factor = parse_double(value, line, key);
        seen_g = true;
      } else if (key == "omega") {
        cfg.omega = parse_double(value, line, key);
        seen_omega = true;
      } else if (key == "theta") {
        cfg.theta = parse_double(value, line, key);
      } else if (key == "drive") {
        cfg.drive = value;
      } else if (key == "steps_per_period") {
        cfg.steps_per_period = parse_int(value, line, key);
      } else if (key == "phase_grid") {
        cfg.phase_grid = parse_int(value, line, key);
      } else if (key == "output_stride") {
        cfg.output_stride = parse_int(value, line, key);
      } else if (key == "initial_m") {
        cfg.initial_m = parse_double(value, line, key);
      } else if (key == "out") {
        cfg.out = value;
      } else {
        throw config_error("unknown key '" + key + "'", line);
      }
    } else if (segment != nullptr) {
      if (key == "periods") {
        segment->periods = parse_double(value, line, key);
      } else if (key == "target" && segment->kind == "ramp_up") {
        segment->target = parse_vec3(value, line, key);
      } else if (key == "axis" && segment->kind == "rotate_loop") {
        segment->axis = parse_vec3(value, line, key);
      } else if (key == "cycles" && segment->kind == "rotate_loop") {
        segment->cycles = parse_double(value, line, key);
      } else if (key == "omega_rot" && segment->kind == "rotate_loop") {
        segment->omega_rot = parse_double(value, line, key);
      } else if (key == "rho" && segment->kind == "rotate_loop") {
        segment->rho = parse_double(value, line, key);
      } else {
        throw config_error("unknown key '" + key + "' in [" + segment->kind + "]", line);
      }
    } else if (section == "fig2") {
      if (key == "rho") {
        cfg.fig2.rho = parse_double(value, line, key);
      } else if (key == "a_start") {
        cfg.fig2.a_start = parse_double(value, line, key);
      } else if (key == "a_stop") {
        cfg.fig2.a_stop = parse_double(value, line, key);
      } else if (key == "a_step") {
        cfg.fig2.a_step = parse_double(value, line, key);
      } else if (key == "ramp_periods") {
        cfg.fig2.ramp_periods = parse_int(value, line, key);
      } else {
        throw config_error("unknown key '" + key + "' in [fig2]", line);
      }
    } else if (section == "holonomy") {
      if (key == "a") {
        cfg.holonomy.a = parse_double(value, line, key);
      } else if (key == "axis") {
        cfg.holonomy.axes.push_back(parse_vec3(value, line, key));
      } else {
        throw config_error("unknown key '" + key + "' in [holonomy]", line);
      }
    } else if (section == "wcheck") {
      if (key == "draws") {
        cfg.wcheck.draws = parse_int(value, line, key);
      } else if (key == "a_max") {
        cfg.wcheck.a_max = parse_double(value, line, key);
      } else {
        throw config_error("unknown key '" + key + "' in [wcheck]", line);
      }
    }
  }

  if (!seen_spin) throw config_error("missing required key 'spin'");
  if (!seen_g) throw config_error("missing required key 'g_factor'");
  if (!seen_omega) throw config_error("missing required key 'omega'");
  if (!(cfg.omega > 0.0)) throw config_error("'omega' must be positive");
  if (cfg.steps_per_period < 1) throw config_error("'steps_per_period' must be positive");
  if (cfg.phase_grid < 4) throw config_error("'phase_grid' must be at least 4");
  if (cfg.output_stride < 1) throw config_error("'output_stride' must be positive");

  const double two_f = 2.0 * cfg.spin;
  if (cfg.spin <= 0.0 || std::abs(two_f - std::round(two_f)) > 1e-12) {
    throw config_error("'spin' must be a positive half-integer");
  }
  if (cfg.initial_m) {
    const double offset = cfg.spin - *cfg.initial_m;
    if (std::abs(offset - std::round(offset)) > 1e-12 || std::abs(*cfg.initial_m) > cfg.spin) {
      throw config_error("'initial_m' must be one of f_F, f_F-1, ..., -f_F");
    }
  }

  for (size_t i = 0; i < cfg.segments.size(); ++i) {
    const SegmentConfig& seg = cfg.segments[i];
    const std::string where = "segment " + std::to_string(i) + " [" + seg.kind + "]";
    if (seg.kind == "rotate_loop") {
      if (seg.omega_rot.has_value() == seg.rho.has_value()) {
        throw config_error(where + ": give exactly one of 'omega_rot' or 'rho'", seg.line);
      }
      if (!(seg.cycles > 0.0)) {
        throw config_error(where + ": 'cycles' must be positive", seg.line);
      }
      if (!(seg.axis.norm() > 0.0)) {
        throw config_error(where + ": 'axis' must be a nonzero vector", seg.line);
      }
    } else {
      if (!(seg.periods > 0.0)) {
        throw config_error(where + ": 'periods' must be positive", seg.line);
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open config file '" + path + "'");
  }
  return parse_config(in);
}

std::string normalized_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "spin = " << g17(cfg.spin) << "\n";
  os << "g_factor = " << g17(cfg.g_factor) << "\n";
  os << "omega = " << g17(cfg.omega) << "\n";
  os << "theta = " << g17(cfg.theta) << "\n";
  os << "drive = " << cfg.drive << "\n";
  os << "steps_per_period = " << cfg.steps_per_period << "\n";
  os << "phase_grid = " << cfg.phase_grid << "\n";
  os << "output_stride = " << cfg.output_stride << "\n";
  if (cfg.initial_m) os << "initial_m = " << g17(*cfg.initial_m) << "\n";
  if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";

  for (const SegmentConfig& seg : cfg.segments) {
    os << "\n[" << seg.kind << "]\n";
    if (seg.kind == "rotate_loop") {
      os << "axis = " << vec3_str(seg.axis) << "\n";
      os << "cycles = " << g17(seg.cycles) << "\n";
      if (seg.omega_rot) os << "omega_rot = " << g17(*seg.omega_rot) << "\n";
      if (seg.rho) os << "rho = " << g17(*seg.rho) << "\n";
    } else {
      os << "periods = " << g17(seg.periods) << "\n";
      if (seg.kind == "ramp_up") os << "target = " << vec3_str(seg.target) << "\n";
    }
  }
  if (cfg.fig2.present) {
    os << "\n[fig2]\n";
    os << "rho = " << g17(cfg.fig2.rho) << "\n";
    os << "a_start = " << g17(cfg.fig2.a_start) << "\n";
    os << "a_stop = " << g17(cfg.fig2.a_stop) << "\n";
    os << "a_step = " << g17(cfg.fig2.a_step) << "\n";
    os << "ramp_periods = " << cfg.fig2.ramp_periods << "\n";
  }
  if (cfg.holonomy.present) {
    os << "\n[holonomy]\n";
    os << "a = " << g17(cfg.holonomy.a) << "\n";
    for (const Vec3& axis : cfg.holonomy.axes) {
      os << "axis = " << vec3_str(axis) << "\n";
    }
  }
  if (cfg.wcheck.present) {
    os << "\n[wcheck]\n";
    os << "draws = " << cfg.wcheck.draws << "\n";
    os << "a_max = " << g17(cfg.wcheck.a_max) << "\n";
  }
  return os.str();
}

SpinSystem make_system(const ExperimentConfig& cfg) { return SpinSystem(cfg.spin, cfg.g_factor); }

DrivingProfile make_profile(const ExperimentConfig& cfg) {
  if (cfg.drive == "harmonic") {
    return DrivingProfile::harmonic(cfg.omega, cfg.theta);
  }
  std::ifstream in(cfg.drive);
  if (!in) {
    throw std::ios_base::failure("cannot open drive table '" + cfg.drive + "'");
  }
  return DrivingProfile::from_table(in, cfg.omega, cfg.theta);
}

FieldSchedule make_schedule(const ExperimentConfig& cfg) {
  if (cfg.segments.empty()) {
    throw config_error("the command needs at least one schedule segment block");
  }
  const double period = 2.0 * std::numbers::pi / cfg.omega;
  FieldSchedule schedule(0.0);
  for (size_t i = 0; i < cfg.segments.size(); ++i) {
    const SegmentConfig& seg = cfg.segments[i];
    try {
      if (seg.kind == "ramp_up") {
        schedule.ramp_up(seg.periods * period, seg.target);
      } else if (seg.kind == "ramp_down") {
        schedule.ramp_down(seg.periods * period);
      } else {
        double omega_rot = 0.0;
        if (seg.omega_rot) {
          omega_rot = *seg.omega_rot;
        } else {
          const double b_entry = schedule.B(schedule.t_end()).norm();
          if (!(b_entry > 0.0)) {
            throw config_error("segment " + std::to_string(i) +
                               ": 'rho' needs a nonzero field at loop entry");
          }
          omega_rot = *seg.rho * cfg.omega * cfg.omega / (cfg.g_factor * b_entry);
        }
        schedule.rotate_loop(seg.axis, omega_rot, seg.cycles);
      }
    } catch (const config_error& e) {
      // Re-anchor schedule-construction failures to the config block.
      throw config_error(std::string(e.what()), seg.line);
    }
  }
  return schedule;
}

} // namespace floqsim
