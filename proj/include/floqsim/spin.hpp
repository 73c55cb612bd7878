#pragma once

#include <array>

#include "floqsim/operator_matrix.hpp"

namespace floqsim {

/// Slow magnetic field sample: the field vector and, when available, its time
/// derivative. Units: B in field units, Bdot in field units per time.
struct FieldVector {
  Vec3 B = Vec3::Zero();
  Vec3 Bdot = Vec3::Zero();
};

/// F_x, F_y, F_z for spin quantum number f_F via the standard ladder
/// construction. F_z is diagonal with entries f_F, f_F-1, ..., -f_F, so basis
/// index 0 is the m_F = +f_F projection.
std::array<OperatorMatrix, 3> spin_matrices(double f_F);

/// Spin of quantum number f_F with gyromagnetic factor g_F (frequency per
/// field unit, so g_F * |B| is an angular frequency with hbar = 1). The spin
/// component matrices are built once at construction.
struct SpinSystem {
  double f = 0.0;
  double g = 0.0;
  OperatorMatrix fx, fy, fz;

  SpinSystem(double f_F, double g_F);

  Eigen::Index dim() const { return fz.dim(); }

  /// F . n for an arbitrary real 3-vector n; Hermitian.
  OperatorMatrix f_dot(const Vec3& n) const;
};

/// Zeeman operator V(B) = g_F (F_x B_x + F_y B_y + F_z B_z); Hermitian with
/// eigenvalues g_F |B| m_F.
OperatorMatrix zeeman_v(const SpinSystem& sys, const Vec3& B);

} // namespace floqsim
