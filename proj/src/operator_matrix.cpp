#include "floqsim/operator_matrix.hpp"

#include <sstream>

namespace floqsim {

namespace {

void require_square(const Mat& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream os;
    os << who << ": matrix must be square and nonempty, got " << a.rows() << "x" << a.cols();
    throw std::invalid_argument(os.str());
  }
}

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b, const char* who) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << who << ": dimension mismatch, " << a.dim() << " vs " << b.dim();
    throw std::invalid_argument(os.str());
  }
}

} // namespace

double hermiticity_defect(const Mat& a) { return (a - a.adjoint()).norm(); }

double unitarity_defect(const Mat& a) {
  return (a.adjoint() * a - Mat::Identity(a.rows(), a.cols())).norm();
}

OperatorMatrix as_hermitian(Mat a) {
  require_square(a, "as_hermitian");
  const double defect = hermiticity_defect(a);
  const double scale = a.norm();
  if (defect > tol::hermitian_rel * std::max(scale, 1.0)) {
    std::ostringstream os;
    os << "as_hermitian: defect " << defect << " exceeds " << tol::hermitian_rel * std::max(scale, 1.0);
    throw std::invalid_argument(os.str());
  }
  return OperatorMatrix(std::move(a), /*herm=*/true, /*unit=*/false);
}

OperatorMatrix as_unitary(Mat a) {
  require_square(a, "as_unitary");
  const double defect = unitarity_defect(a);
  if (defect > tol::unitary_abs) {
    std::ostringstream os;
    os << "as_unitary: defect " << defect << " exceeds " << tol::unitary_abs;
    throw std::invalid_argument(os.str());
  }
  return OperatorMatrix(std::move(a), /*herm=*/false, /*unit=*/true);
}

HermEig herm_eig(const OperatorMatrix& a) {
  require_square(a.m, "herm_eig");
  const double defect = hermiticity_defect(a.m);
  const double scale = std::max(a.m.norm(), 1.0);
  if (defect > tol::hermitian_rel * scale) {
    std::ostringstream os;
    os << "herm_eig: non-Hermitian input, defect " << defect << " (allowed "
       << tol::hermitian_rel * scale << ")";
    throw std::invalid_argument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(a.m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver failed to converge");
  }
  return HermEig{solver.eigenvalues(), solver.eigenvectors()};
}

OperatorMatrix unitary_exp(const OperatorMatrix& h, double s) {
  const HermEig eig = herm_eig(h);
  const Eigen::Index d = h.dim();
  Vec phases(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    phases[k] = std::exp(cxd(0.0, -s * eig.eigenvalues[k]));
  }
  Mat u = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
  return OperatorMatrix(std::move(u), /*herm=*/false, /*unit=*/true);
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_dim(a, b, "commutator");
  return OperatorMatrix(a.m * b.m - b.m * a.m);
}

double dist(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_dim(a, b, "dist");
  return (a.m - b.m).norm();
}

} // namespace floqsim
