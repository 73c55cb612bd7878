#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace floqsim {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr cxd kI{0.0, 1.0};

// Numerical tolerances used across the library. Everything that checks a
// structural property (Hermiticity, unitarity, zero mean, ...) reads its
// threshold from here so there is a single point of calibration.
namespace tol {
inline constexpr double hermitian_rel = 1e-12;    // ||A - A^dag||_F <= rel * ||A||_F
inline constexpr double unitary_abs = 1e-10;      // ||A^dag A - I||_F
inline constexpr double eig_residual_rel = 1e-12; // ||A - Q L Q^dag||_F <= rel * ||A||_F
inline constexpr double zero_mean = 1e-10;        // period average of f and of its primitive
inline constexpr double state_norm = 1e-10;       // state normalization after a step
inline constexpr double propagator_unitarity = 1e-8;
inline constexpr double k_matrix_hermitian = 1e-10;
inline constexpr double series_convergence = 1e-12; // ||term|| <= tol * ||sum||
} // namespace tol

// Guard tripped by a numerical precondition (step size, undersampling, ...).
// The CLI maps this to its own exit code, distinct from config errors.
class numeric_guard_error : public std::runtime_error {
public:
  explicit numeric_guard_error(const std::string& what) : std::runtime_error(what) {}
};

// Configuration/validation failure; carries an optional line anchor.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_ = 0;
};

} // namespace floqsim
