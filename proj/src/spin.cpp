#include "floqsim/spin.hpp"

#include <cmath>
#include <sstream>

namespace floqsim {

std::array<OperatorMatrix, 3> spin_matrices(double f_F) {
  const double two_f = 2.0 * f_F;
  const double rounded = std::round(two_f);
  if (f_F < 0.0 || std::abs(two_f - rounded) > 1e-12 || rounded < 1.0) {
    std::ostringstream os;
    os << "spin_matrices: f_F must be a positive half-integer, got " << f_F;
    throw std::invalid_argument(os.str());
  }
  const Eigen::Index d = static_cast<Eigen::Index>(rounded) + 1;

  Mat fz = Mat::Zero(d, d);
  Mat fplus = Mat::Zero(d, d); // F_x + i F_y
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = f_F - static_cast<double>(k); // basis index 0 <-> m = +f_F
    fz(k, k) = m;
    if (k > 0) {
      // <m+1| F_+ |m> = sqrt(f(f+1) - m(m+1))
      fplus(k - 1, k) = std::sqrt(f_F * (f_F + 1.0) - m * (m + 1.0));
    }
  }
  Mat fx = 0.5 * (fplus + fplus.adjoint());
  Mat fy = cxd(0.0, -0.5) * (fplus - Mat(fplus.adjoint()));
  return {as_hermitian(std::move(fx)), as_hermitian(std::move(fy)), as_hermitian(std::move(fz))};
}

SpinSystem::SpinSystem(double f_F, double g_F) : f(f_F), g(g_F) {
  auto mats = spin_matrices(f_F);
  fx = std::move(mats[0]);
  fy = std::move(mats[1]);
  fz = std::move(mats[2]);
}

OperatorMatrix SpinSystem::f_dot(const Vec3& n) const {
  Mat m = n.x() * fx.m + n.y() * fy.m + n.z() * fz.m;
  return OperatorMatrix(std::move(m), /*herm=*/true, /*unit=*/false);
}

OperatorMatrix zeeman_v(const SpinSystem& sys, const Vec3& B) {
  if (!B.allFinite()) {
    throw std::invalid_argument("zeeman_v: field components must be finite");
  }
  OperatorMatrix v = sys.f_dot(B);
  v.m *= sys.g;
  return v;
}

} // namespace floqsim
