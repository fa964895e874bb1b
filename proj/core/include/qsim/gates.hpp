#pragma once

#include <complex>
#include <cstdint>

namespace qsim {

using cdouble = std::complex<double>;

/// 2x2 gate matrix (row-major u00 u01 / u10 u11). The default constructors
/// reject matrices that are not unitary to 1e-12; non_unitary() builds the
/// flagged variant used by systematic-error experiments.
struct Gate1Q {
  cdouble u00{1, 0}, u01{0, 0}, u10{0, 0}, u11{1, 0};
  bool unitary = true;

  Gate1Q() = default;  // identity
  Gate1Q(cdouble a, cdouble b, cdouble c, cdouble d);
  static Gate1Q non_unitary(cdouble a, cdouble b, cdouble c, cdouble d);

  static Gate1Q identity();
  static Gate1Q x();
  static Gate1Q y();
  static Gate1Q z();
  static Gate1Q h();
  /// exp(-i lambda X / 2)
  static Gate1Q rx(double lambda);
  /// diag(e^{-i lambda/2}, e^{+i lambda/2})
  static Gate1Q rz(double lambda);
  /// diag(1, e^{i theta})
  static Gate1Q phase(double theta);
  /// Basis change used for Y letters: rx(pi/2).
  static Gate1Q y_basis();
  static Gate1Q y_basis_dag();
  /// exp(-i theta (n . sigma) / 2) about the unit axis (nx, ny, nz).
  static Gate1Q axis_rotation(double nx, double ny, double nz, double theta);

  Gate1Q dagger() const;
  /// Matrix product: (*this) applied after rhs.
  Gate1Q operator*(const Gate1Q& rhs) const;

  double unitarity_defect() const;
  bool is_diagonal(double tol = 0.0) const;
  bool approx_equal(const Gate1Q& o, double tol) const;
};

}  // namespace qsim
