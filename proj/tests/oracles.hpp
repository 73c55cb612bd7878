#pragma once

// Test-side oracles, written independently of the library's computation
// paths: a truncated-power-series matrix exponential, the Bessel power
// series, a cumulative-trapezoid antiderivative, and closed-form spin-1
// rotation probabilities. Plus seeded random generators for property tests.

#include <complex>
#include <random>
#include <vector>

#include "floqsim/common.hpp"

namespace oracles {

using floqsim::cxd;
using floqsim::Mat;
using floqsim::Vec3;

// exp(-i s H) by scaling and squaring with a Taylor series summed to machine
// convergence; no eigendecomposition anywhere.
inline Mat taylor_unitary_exp(const Mat& h, double s) {
  Mat a = cxd(0.0, -s) * h;
  int squarings = 0;
  while (a.norm() > 0.5) {
    a *= 0.5;
    ++squarings;
  }
  Mat result = Mat::Identity(a.rows(), a.cols());
  Mat term = Mat::Identity(a.rows(), a.cols());
  for (int k = 1; k < 80; ++k) {
    term = (term * a) / static_cast<double>(k);
    result += term;
    if (term.norm() < 1e-18 * result.norm()) break;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

// J0(a) = sum_k (-1)^k (a/2)^{2k} / (k!)^2.
inline double j0_series(double a) {
  const double q = 0.25 * a * a;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

// Periodic cumulative-trapezoid antiderivative on the sample grid, shifted
// to zero mean.
inline std::vector<double> cumtrapz_primitive(const std::vector<double>& f) {
  const size_t n = f.size();
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  std::vector<double> out(n, 0.0);
  for (size_t j = 1; j < n; ++j) {
    out[j] = out[j - 1] + 0.5 * h * (f[j - 1] + f[j]);
  }
  double mean = 0.0;
  for (double v : out) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : out) v -= mean;
  return out;
}

// Probabilities |<m'| exp(-i gamma F_y) |m=+1>|^2 for spin 1, m' = +1, 0, -1.
inline std::array<double, 3> spin1_y_rotation_probs(double gamma) {
  const double c = std::cos(0.5 * gamma);
  const double s = std::sin(0.5 * gamma);
  return {std::pow(c, 4), 0.5 * std::pow(std::sin(gamma), 2), std::pow(s, 4)};
}

// --- seeded draws (explicit transforms; independent of std distributions) ---

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline Vec3 random_unit3(std::mt19937_64& rng) {
  while (true) {
    const Vec3 v(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

inline Vec3 random_vec3(std::mt19937_64& rng, double scale) {
  return scale * Vec3(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
}

inline Mat random_hermitian(std::mt19937_64& rng, int dim, double scale = 1.0) {
  Mat a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      a(r, c) = cxd(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    }
  }
  return scale * 0.5 * (a + Mat(a.adjoint()));
}

} // namespace oracles
