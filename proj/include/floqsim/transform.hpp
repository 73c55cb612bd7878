#pragma once

#include <functional>

#include "floqsim/driving.hpp"
#include "floqsim/operator_matrix.hpp"
#include "floqsim/spin.hpp"

namespace floqsim {

/// Slowly varying operator family V(lambda) together with the parameter path
/// lambda(t) and its derivative. The optional w_closed hook supplies an exact
/// transformed Hamiltonian W(phase, t) when one is known (the spin map
/// installs the closed form); every consumer falls back to w_numeric.
struct VOperatorMap {
  Eigen::Index dim = 0;
  std::function<OperatorMatrix(const Eigen::VectorXd&)> v;
  std::function<Eigen::VectorXd(double)> lambda;
  std::function<Eigen::VectorXd(double)> lambda_dot;
  std::function<OperatorMatrix(const DrivingProfile&, double, double)> w_closed;
};

/// Spin specialization: lambda(t) = B(t), V = g_F F.B, with the closed-form
/// W installed. `field` samples the slow path and its derivative.
VOperatorMap make_spin_map(const SpinSystem& sys, std::function<FieldVector(double)> field);

/// Frame transformation R = exp(-i (F(phase)/omega) V).
OperatorMatrix r_operator(const DrivingProfile& profile, const OperatorMatrix& V, double phase);

/// Transformed Hamiltonian W(phase, t) = lambda_dot_mu A_mu from the defining
/// vector potential A_mu = -i R^dag dR/dlambda_mu, with the lambda derivative
/// taken by central finite difference at fixed phase. Symmetrized to remove
/// the O(h^2) Hermiticity defect of the differencing.
OperatorMatrix w_numeric(const VOperatorMap& map, const DrivingProfile& profile, double phase,
                         double t);

/// Power-series solution of dW/dc = -Vdot + i [V, W], W(0) = 0, in the
/// variable c = F(phase)/omega:
///   W = i { (ic) Vdot / 1! + (ic)^2 [V, Vdot] / 2! + (ic)^3 [V,[V,Vdot]] / 3! + ... }
/// truncated after `order` nested commutators (capped at 30), with early exit
/// once a term falls below the convergence tolerance.
OperatorMatrix w_series(double c, const OperatorMatrix& V, const OperatorMatrix& Vdot,
                        int order = 12);
inline constexpr int kSeriesOrderCap = 30;

/// Closed-form W for the spin map, valid for arbitrary drive strength.
/// Evaluated in a regularized form that is smooth through B -> 0 and
/// F(phase) -> 0 (entire scalar coefficient functions with Taylor fallback
/// near zero argument), so no limit needs special casing by the caller.
OperatorMatrix w_spin_closed(const SpinSystem& sys, const FieldVector& field,
                             const DrivingProfile& profile, double phase);

/// W(phase, t) through the best route the map provides.
OperatorMatrix w_of(const VOperatorMap& map, const DrivingProfile& profile, double phase,
                    double t);

/// Fourier component W^(n) = (1/2pi) int W(phase) e^{-in phase} dphase by
/// uniform trapezoid on `grid` phase points. Hermitian-flagged for n = 0.
OperatorMatrix w_fourier(int n, const std::function<OperatorMatrix(double)>& w_of_phase,
                         int grid = kDefaultPhaseGrid);

/// Zero-order Bessel function as the period average of exp(i a sin(theta)),
/// by trapezoid quadrature (spectrally accurate; exact to double precision
/// for |a| well below the grid size).
double bessel_j0(double a);

/// Effective Hamiltonian of the harmonically driven spin,
/// W^(0) = [1 - J0(g|B|/omega)] F.(B x Bdot) / B^2, in a regularized form
/// whose B -> 0 limit is the weak-driving expression (g^2/4 omega^2) F.(B x Bdot).
OperatorMatrix w0_spin_harmonic(const SpinSystem& sys, const FieldVector& field, double omega);

/// Weak-driving effective Hamiltonian -i p / (2 omega^2) [V, Vdot].
OperatorMatrix weak_driving_w0(const OperatorMatrix& V, const OperatorMatrix& Vdot, double p,
                               double omega);

/// Extended-space Floquet matrix restricted to bands |n| <= n_max:
/// K_{nm} = n omega delta_{nm} + W^(n-m). Diagnostic only; dynamics never
/// propagates in extended space.
struct KMatrixBlock {
  int n_max = 0;
  Eigen::Index block_dim = 0;
  OperatorMatrix full; // (2 n_max + 1) * block_dim square, Hermitian

  /// Block K_{nm} for band indices in [-n_max, n_max].
  Mat block(int n, int m) const;
};

KMatrixBlock k_matrix(int n_max, const std::function<OperatorMatrix(int)>& w_fourier_provider,
                      double omega);

/// Adiabaticity measure max_{0 < |n| <= n_range} max_{ab} |W^(n)_ab| / omega.
/// Values well below 1 justify dropping the interband coupling.
double adiabaticity_check(const std::function<OperatorMatrix(int)>& w_fourier_provider,
                          double omega, int n_range);

} // namespace floqsim
