#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "floqsim/common.hpp"

namespace floqsim {

/// Default number of phase samples per period. Uniform trapezoid quadrature
/// on this grid is exact for trigonometric polynomials below Nyquist, which
/// covers every drive the library works with.
inline constexpr int kDefaultPhaseGrid = 256;

/// Fourier coefficient g^(m) = (1/2pi) int_0^{2pi} g(x) e^{-imx} dx by
/// uniform trapezoid on `grid` points. Throws on undersampled m (grid < 4|m|).
cxd fourier_coeff(const std::function<double(double)>& g, int m, int grid = kDefaultPhaseGrid);

/// Spectral antiderivative of zero-mean samples on a uniform period grid:
/// Fourier coefficients divided by im, constant fixed so the mean vanishes.
/// Throws if the sample mean exceeds the zero-mean tolerance.
std::vector<double> primitive(const std::vector<double>& f_samples);

/// Period average of F^2 for a primitive given as samples or a callable.
double p_factor(const std::vector<double>& primitive_samples);
double p_factor(const std::function<double(double)>& primitive_fn, int grid = kDefaultPhaseGrid);

/// 2pi-periodic zero-average drive f, its zero-average primitive, Fourier
/// coefficients and the p-factor, together with the fast frequency omega and
/// phase offset theta. Values are queried by phase x = omega t + theta.
class DrivingProfile {
public:
  /// f = cos, primitive sin; the drive used throughout the spin analysis.
  static DrivingProfile harmonic(double omega, double theta = 0.0);

  /// Tabulated drive on a uniform grid over [0, 2pi), at least 64 samples.
  /// A nonzero sample mean is subtracted and recorded (the formalism needs a
  /// strictly zero-average drive; user tables rarely satisfy that exactly).
  static DrivingProfile from_samples(double omega, double theta, std::vector<double> samples);

  static DrivingProfile from_function(double omega, double theta,
                                      const std::function<double(double)>& f,
                                      int grid = kDefaultPhaseGrid);

  /// Two-column text (theta_i, f_i) on a uniform grid starting at 0.
  static DrivingProfile from_table(std::istream& in, double omega, double theta);

  double omega() const { return omega_; }
  double theta() const { return theta_; }
  double phase(double t) const { return omega_ * t + theta_; }

  double f(double x) const;          // drive value at phase x
  double primitive(double x) const;  // F(x), dF/dx = f, zero period average
  cxd fourier(int m) const;          // f^(m)
  double p() const { return p_; }    // period average of F^2
  double mean_correction() const { return mean_correction_; }
  bool is_harmonic() const { return harmonic_; }
  int grid() const { return grid_; }

private:
  DrivingProfile() = default;

  double omega_ = 0.0;
  double theta_ = 0.0;
  bool harmonic_ = false;
  int grid_ = kDefaultPhaseGrid;
  std::vector<cxd> coeff_; // f^(m), m = 1..mmax (m <= 0 from conjugate symmetry / zero mean)
  double p_ = 0.0;
  double mean_correction_ = 0.0;
};

} // namespace floqsim
