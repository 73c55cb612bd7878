#pragma once

#include <Eigen/Dense>

#include "floqsim/common.hpp"

namespace floqsim {

/// Dense complex square matrix with role flags. All operators of the library
/// (Hamiltonians, propagators, spin components, vector potentials) are values
/// of this type; hbar = 1 throughout, so Hermitian generators carry angular
/// frequency units. Immutable by convention: operations return new values.
struct OperatorMatrix {
  Mat m;
  bool hermitian = false;
  bool unitary = false;

  OperatorMatrix() = default;
  explicit OperatorMatrix(Mat mat, bool herm = false, bool unit = false)
      : m(std::move(mat)), hermitian(herm), unitary(unit) {}

  Eigen::Index dim() const { return m.rows(); }

  static OperatorMatrix zero(Eigen::Index d) {
    return OperatorMatrix(Mat::Zero(d, d), /*herm=*/true, /*unit=*/false);
  }
  static OperatorMatrix identity(Eigen::Index d) {
    return OperatorMatrix(Mat::Identity(d, d), /*herm=*/true, /*unit=*/true);
  }
};

double hermiticity_defect(const Mat& a);          // ||A - A^dag||_F
double unitarity_defect(const Mat& a);            // ||A^dag A - I||_F

/// Flags a matrix Hermitian after checking the defect against the relative
/// tolerance; throws std::invalid_argument with the defect magnitude.
OperatorMatrix as_hermitian(Mat a);
/// Same for the unitary flag (absolute tolerance).
OperatorMatrix as_unitary(Mat a);

struct HermEig {
  Eigen::VectorXd eigenvalues; // ascending
  Mat eigenvectors;            // unitary, columns are eigenvectors
};

/// Eigendecomposition of a Hermitian operator, A = Q diag(l) Q^dag.
/// Rejects input whose Hermitian defect exceeds tol::hermitian_rel * ||A||_F.
HermEig herm_eig(const OperatorMatrix& a);

/// exp(-i s H) for Hermitian H, evaluated spectrally so the result is unitary
/// by construction (each eigenvalue maps to a unit-modulus phase).
OperatorMatrix unitary_exp(const OperatorMatrix& h, double s);

/// AB - BA.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Frobenius distance ||A - B||_F. The equivalence metric used by every
/// oracle comparison in the test suites.
double dist(const OperatorMatrix& a, const OperatorMatrix& b);

} // namespace floqsim
