#include "floqsim/transform.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace floqsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Entire scalar coefficients of the closed-form spin W, with fourth-order
// Taylor fallback where direct evaluation would cancel:
//   sinc(x) = sin(x)/x, cosc(x) = (cos(x) - 1)/x^2, sincc(x) = (1 - sinc(x))/x^2
constexpr double kScalarTaylorSwitch = 1e-2;

double sinc(double x) {
  if (std::abs(x) <= kScalarTaylorSwitch) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double cosc(double x) {
  if (std::abs(x) <= kScalarTaylorSwitch) {
    const double x2 = x * x;
    return -0.5 + x2 / 24.0 - x2 * x2 / 720.0;
  }
  return (std::cos(x) - 1.0) / (x * x);
}

double sincc(double x) {
  if (std::abs(x) <= kScalarTaylorSwitch) {
    const double x2 = x * x;
    return 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0;
  }
  return (1.0 - std::sin(x) / x) / (x * x);
}

// (1 - J0(a)) / a^2, smooth through a = 0 where it tends to 1/4.
double one_minus_j0_over_a2(double a) {
  if (std::abs(a) <= kScalarTaylorSwitch) {
    const double a2 = a * a;
    return 0.25 - a2 / 64.0 + a2 * a2 / 2304.0;
  }
  return (1.0 - bessel_j0(a)) / (a * a);
}

OperatorMatrix symmetrized_hermitian(Mat w) {
  Mat h = 0.5 * (w + w.adjoint());
  return OperatorMatrix(std::move(h), /*herm=*/true, /*unit=*/false);
}

} // namespace

VOperatorMap make_spin_map(const SpinSystem& sys, std::function<FieldVector(double)> field) {
  VOperatorMap map;
  map.dim = sys.dim();
  map.v = [sys](const Eigen::VectorXd& lambda) {
    return zeeman_v(sys, Vec3(lambda[0], lambda[1], lambda[2]));
  };
  map.lambda = [field](double t) { return Eigen::VectorXd(field(t).B); };
  map.lambda_dot = [field](double t) { return Eigen::VectorXd(field(t).Bdot); };
  map.w_closed = [sys, field](const DrivingProfile& profile, double phase, double t) {
    return w_spin_closed(sys, field(t), profile, phase);
  };
  return map;
}

OperatorMatrix r_operator(const DrivingProfile& profile, const OperatorMatrix& V, double phase) {
  return unitary_exp(V, profile.primitive(phase) / profile.omega());
}

OperatorMatrix w_numeric(const VOperatorMap& map, const DrivingProfile& profile, double phase,
                         double t) {
  const Eigen::VectorXd lambda = map.lambda(t);
  const Eigen::VectorXd lambda_dot = map.lambda_dot(t);
  if (!lambda.allFinite() || !lambda_dot.allFinite()) {
    throw numeric_guard_error("w_numeric: non-finite slow parameters at t = " + std::to_string(t));
  }

  const Mat r0 = r_operator(profile, map.v(lambda), phase).m;
  Mat w = Mat::Zero(r0.rows(), r0.cols());
  for (Eigen::Index mu = 0; mu < lambda.size(); ++mu) {
    if (lambda_dot[mu] == 0.0) continue;
    const double h = 1e-5 * std::max(1.0, std::abs(lambda[mu]));
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw numeric_guard_error("w_numeric: degenerate finite-difference step");
    }
    Eigen::VectorXd lp = lambda, lm = lambda;
    lp[mu] += h;
    lm[mu] -= h;
    const Mat dr =
        (r_operator(profile, map.v(lp), phase).m - r_operator(profile, map.v(lm), phase).m) /
        (2.0 * h);
    w += lambda_dot[mu] * (-kI) * (r0.adjoint() * dr);
  }
  return symmetrized_hermitian(std::move(w));
}

OperatorMatrix w_series(double c, const OperatorMatrix& V, const OperatorMatrix& Vdot,
                        int order) {
  if (order < 1) {
    throw std::invalid_argument("w_series: order must be >= 1");
  }
  order = std::min(order, kSeriesOrderCap);
  const cxd ic(0.0, c);

  Mat nested = Vdot.m; // k-fold nested commutator [V, [V, ... [V, Vdot]]]
  cxd factor = kI;     // i (ic)^k / k!
  Mat sum = Mat::Zero(V.dim(), V.dim());
  for (int k = 1; k <= order; ++k) {
    factor *= ic / static_cast<double>(k);
    const Mat term = factor * nested;
    sum += term;
    if (term.norm() <= tol::series_convergence * sum.norm()) break;
    if (k < order) nested = V.m * nested - nested * V.m;
  }
  return symmetrized_hermitian(std::move(sum));
}

OperatorMatrix w_spin_closed(const SpinSystem& sys, const FieldVector& field,
                             const DrivingProfile& profile, double phase) {
  const Vec3& B = field.B;
  const Vec3& Bdot = field.Bdot;
  const double kappa = sys.g * profile.primitive(phase) / profile.omega();
  const double x = kappa * B.norm();

  // W = -kappa sinc(x) F.Bdot - kappa^3 sincc(x) (B.Bdot) F.B
  //     - kappa^2 cosc(x) F.(B x Bdot)
  // algebraically equal to the three-term solution of the W equation for the
  // spin, but free of the 1/B^2 and 1/B^3 divisions.
  Vec3 xvec = -kappa * sinc(x) * Bdot;
  xvec -= kappa * kappa * kappa * sincc(x) * B.dot(Bdot) * B;
  xvec -= kappa * kappa * cosc(x) * B.cross(Bdot);
  return sys.f_dot(xvec);
}

OperatorMatrix w_of(const VOperatorMap& map, const DrivingProfile& profile, double phase,
                    double t) {
  if (map.w_closed) return map.w_closed(profile, phase, t);
  return w_numeric(map, profile, phase, t);
}

OperatorMatrix w_fourier(int n, const std::function<OperatorMatrix(double)>& w_of_phase,
                         int grid) {
  if (grid < 4 * std::abs(n) || grid < 4) {
    std::ostringstream os;
    os << "w_fourier: grid " << grid << " undersamples harmonic n = " << n;
    throw numeric_guard_error(os.str());
  }
  Mat acc;
  for (int j = 0; j < grid; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
    const Mat term = w_of_phase(x).m * std::exp(cxd(0.0, -n * x));
    if (j == 0) {
      acc = term;
    } else {
      acc += term;
    }
  }
  acc /= static_cast<double>(grid);
  if (n == 0) return symmetrized_hermitian(std::move(acc));
  return OperatorMatrix(std::move(acc));
}

double bessel_j0(double a) {
  const int grid = kDefaultPhaseGrid;
  double acc = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
    acc += std::cos(a * std::sin(x));
  }
  return acc / static_cast<double>(grid);
}

OperatorMatrix w0_spin_harmonic(const SpinSystem& sys, const FieldVector& field, double omega) {
  const double a = sys.g * field.B.norm() / omega;
  const double coeff = (sys.g / omega) * (sys.g / omega) * one_minus_j0_over_a2(a);
  return sys.f_dot(coeff * field.B.cross(field.Bdot));
}

OperatorMatrix weak_driving_w0(const OperatorMatrix& V, const OperatorMatrix& Vdot, double p,
                               double omega) {
  Mat w = (-kI * p / (2.0 * omega * omega)) * (V.m * Vdot.m - Vdot.m * V.m);
  return symmetrized_hermitian(std::move(w));
}

Mat KMatrixBlock::block(int n, int m) const {
  const Eigen::Index row = static_cast<Eigen::Index>(n + n_max) * block_dim;
  const Eigen::Index col = static_cast<Eigen::Index>(m + n_max) * block_dim;
  return full.m.block(row, col, block_dim, block_dim);
}

KMatrixBlock k_matrix(int n_max, const std::function<OperatorMatrix(int)>& w_fourier_provider,
                      double omega) {
  if (n_max < 1) {
    throw std::invalid_argument("k_matrix: n_max must be >= 1");
  }
  // Cache W^(k) for k = -2 n_max .. 2 n_max; block (n, m) uses k = n - m.
  std::vector<Mat> wk(static_cast<size_t>(4 * n_max + 1));
  Eigen::Index d = 0;
  for (int k = -2 * n_max; k <= 2 * n_max; ++k) {
    wk[static_cast<size_t>(k + 2 * n_max)] = w_fourier_provider(k).m;
    d = wk[static_cast<size_t>(k + 2 * n_max)].rows();
  }

  const int bands = 2 * n_max + 1;
  Mat full = Mat::Zero(bands * d, bands * d);
  for (int n = -n_max; n <= n_max; ++n) {
    for (int m = -n_max; m <= n_max; ++m) {
      Mat blockval = wk[static_cast<size_t>((n - m) + 2 * n_max)];
      if (n == m) blockval += (n * omega) * Mat::Identity(d, d);
      full.block(static_cast<Eigen::Index>(n + n_max) * d,
                 static_cast<Eigen::Index>(m + n_max) * d, d, d) = blockval;
    }
  }
  const double defect = hermiticity_defect(full);
  if (defect > tol::k_matrix_hermitian * std::max(1.0, full.norm())) {
    std::ostringstream os;
    os << "k_matrix: assembled matrix is not Hermitian, defect " << defect;
    throw numeric_guard_error(os.str());
  }
  KMatrixBlock out;
  out.n_max = n_max;
  out.block_dim = d;
  out.full = symmetrized_hermitian(std::move(full));
  return out;
}

double adiabaticity_check(const std::function<OperatorMatrix(int)>& w_fourier_provider,
                          double omega, int n_range) {
  if (n_range < 1) {
    throw std::invalid_argument("adiabaticity_check: n_range must be >= 1");
  }
  double worst = 0.0;
  for (int n = 1; n <= n_range; ++n) {
    worst = std::max(worst, w_fourier_provider(n).m.cwiseAbs().maxCoeff());
    worst = std::max(worst, w_fourier_provider(-n).m.cwiseAbs().maxCoeff());
  }
  return worst / omega;
}

} // namespace floqsim
