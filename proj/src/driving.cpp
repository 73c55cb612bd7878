#include "floqsim/driving.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace floqsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// DFT coefficient of uniform samples: (1/M) sum_j g_j e^{-i m theta_j},
// theta_j = 2 pi j / M. Equals the trapezoid rule for periodic data.
cxd dft_coeff(const std::vector<double>& g, int m) {
  const int n = static_cast<int>(g.size());
  cxd acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    acc += g[static_cast<size_t>(j)] * std::exp(cxd(0.0, -m * x));
  }
  return acc / static_cast<double>(n);
}

} // namespace

cxd fourier_coeff(const std::function<double(double)>& g, int m, int grid) {
  if (grid < 4 * std::abs(m) || grid < 4) {
    std::ostringstream os;
    os << "fourier_coeff: grid " << grid << " undersamples harmonic m = " << m;
    throw numeric_guard_error(os.str());
  }
  cxd acc = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
    acc += g(x) * std::exp(cxd(0.0, -m * x));
  }
  return acc / static_cast<double>(grid);
}

std::vector<double> primitive(const std::vector<double>& f_samples) {
  const int n = static_cast<int>(f_samples.size());
  if (n < 4) {
    throw std::invalid_argument("primitive: need at least 4 samples");
  }
  const double mean = sample_mean(f_samples);
  if (std::abs(mean) > tol::zero_mean) {
    std::ostringstream os;
    os << "primitive: drive mean " << mean << " violates the zero-average requirement";
    throw std::invalid_argument(os.str());
  }
  // Spectral integration: divide the Fourier coefficients by im. The Nyquist
  // mode of an even-length grid has no well-defined phase and is dropped.
  const int mmax = (n - 1) / 2;
  std::vector<cxd> c(static_cast<size_t>(mmax) + 1);
  for (int m = 1; m <= mmax; ++m) {
    c[static_cast<size_t>(m)] = dft_coeff(f_samples, m) / cxd(0.0, m);
  }
  std::vector<double> out(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    double s = 0.0;
    for (int m = 1; m <= mmax; ++m) {
      s += 2.0 * std::real(c[static_cast<size_t>(m)] * std::exp(cxd(0.0, m * x)));
    }
    out[static_cast<size_t>(j)] = s;
  }
  const double pm = sample_mean(out);
  for (double& v : out) v -= pm;
  return out;
}

double p_factor(const std::vector<double>& primitive_samples) {
  double acc = 0.0;
  for (double v : primitive_samples) acc += v * v;
  return acc / static_cast<double>(primitive_samples.size());
}

double p_factor(const std::function<double(double)>& primitive_fn, int grid) {
  double acc = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
    const double v = primitive_fn(x);
    acc += v * v;
  }
  return acc / static_cast<double>(grid);
}

DrivingProfile DrivingProfile::harmonic(double omega, double theta) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("DrivingProfile::harmonic: omega must be positive");
  }
  DrivingProfile p;
  p.omega_ = omega;
  p.theta_ = theta;
  p.harmonic_ = true;
  p.coeff_ = {cxd(0.5, 0.0)}; // f^(1); f^(-1) by conjugate symmetry
  p.p_ = p_factor([](double x) { return std::sin(x); }, kDefaultPhaseGrid);
  return p;
}

DrivingProfile DrivingProfile::from_samples(double omega, double theta,
                                            std::vector<double> samples) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("DrivingProfile::from_samples: omega must be positive");
  }
  const int n = static_cast<int>(samples.size());
  if (n < 64) {
    std::ostringstream os;
    os << "DrivingProfile::from_samples: need at least 64 samples per period, got " << n;
    throw std::invalid_argument(os.str());
  }
  DrivingProfile p;
  p.omega_ = omega;
  p.theta_ = theta;
  p.grid_ = n;
  p.mean_correction_ = sample_mean(samples);
  for (double& v : samples) v -= p.mean_correction_;

  const int mmax = (n - 1) / 2;
  p.coeff_.resize(static_cast<size_t>(mmax));
  for (int m = 1; m <= mmax; ++m) {
    p.coeff_[static_cast<size_t>(m - 1)] = dft_coeff(samples, m);
  }
  p.p_ = p_factor([&p](double x) { return p.primitive(x); }, n);
  return p;
}

DrivingProfile DrivingProfile::from_function(double omega, double theta,
                                             const std::function<double(double)>& f,
                                             int grid) {
  std::vector<double> samples(static_cast<size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    samples[static_cast<size_t>(j)] = f(kTwoPi * static_cast<double>(j) / static_cast<double>(grid));
  }
  return from_samples(omega, theta, std::move(samples));
}

DrivingProfile DrivingProfile::from_table(std::istream& in, double omega, double theta) {
  std::vector<double> xs, fs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double x = 0.0, v = 0.0;
    if (!(row >> x >> v)) {
      throw config_error("drive table: expected two numeric columns", lineno);
    }
    xs.push_back(x);
    fs.push_back(v);
  }
  const int n = static_cast<int>(xs.size());
  if (n < 64) {
    throw config_error("drive table: need at least 64 rows, got " + std::to_string(n));
  }
  const double h = kTwoPi / static_cast<double>(n);
  for (int j = 0; j < n; ++j) {
    if (std::abs(xs[static_cast<size_t>(j)] - h * j) > 1e-9 * kTwoPi) {
      throw config_error("drive table: row " + std::to_string(j) +
                         " is off the uniform grid 2*pi*j/M starting at 0");
    }
  }
  return from_samples(omega, theta, std::move(fs));
}

double DrivingProfile::f(double x) const {
  if (harmonic_) return std::cos(x);
  double s = 0.0;
  const cxd z = std::exp(cxd(0.0, x));
  cxd zm = 1.0;
  for (size_t k = 0; k < coeff_.size(); ++k) {
    zm *= z;
    s += 2.0 * std::real(coeff_[k] * zm);
  }
  return s;
}

double DrivingProfile::primitive(double x) const {
  if (harmonic_) return std::sin(x);
  double s = 0.0;
  const cxd z = std::exp(cxd(0.0, x));
  cxd zm = 1.0;
  for (size_t k = 0; k < coeff_.size(); ++k) {
    zm *= z;
    const int m = static_cast<int>(k) + 1;
    s += 2.0 * std::real(coeff_[k] / cxd(0.0, m) * zm);
  }
  return s;
}

cxd DrivingProfile::fourier(int m) const {
  if (m == 0) return 0.0;
  const size_t k = static_cast<size_t>(std::abs(m)) - 1;
  if (k >= coeff_.size()) return 0.0;
  return m > 0 ? coeff_[k] : std::conj(coeff_[k]);
}

} // namespace floqsim
