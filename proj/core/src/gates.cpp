#include "qsim/gates.hpp"

#include <cmath>

#include "qsim/errors.hpp"

namespace qsim {

namespace {
constexpr double kUnitaryTol = 1e-12;
const cdouble kI{0.0, 1.0};
}  // namespace

Gate1Q::Gate1Q(cdouble a, cdouble b, cdouble c, cdouble d)
    : u00(a), u01(b), u10(c), u11(d) {
  if (unitarity_defect() > kUnitaryTol)
    throw invalid_gate_error("gate matrix is not unitary; use Gate1Q::non_unitary "
                             "for deliberate error gates");
}

Gate1Q Gate1Q::non_unitary(cdouble a, cdouble b, cdouble c, cdouble d) {
  Gate1Q g = identity();
  g.u00 = a;
  g.u01 = b;
  g.u10 = c;
  g.u11 = d;
  g.unitary = g.unitarity_defect() <= kUnitaryTol;
  return g;
}

double Gate1Q::unitarity_defect() const {
  // max-abs entry of U U^dagger - I
  cdouble a = u00 * std::conj(u00) + u01 * std::conj(u01) - 1.0;
  cdouble b = u00 * std::conj(u10) + u01 * std::conj(u11);
  cdouble c = u10 * std::conj(u00) + u11 * std::conj(u01);
  cdouble d = u10 * std::conj(u10) + u11 * std::conj(u11) - 1.0;
  return std::max(std::max(std::abs(a), std::abs(b)),
                  std::max(std::abs(c), std::abs(d)));
}

Gate1Q Gate1Q::identity() { return {1, 0, 0, 1}; }
Gate1Q Gate1Q::x() { return {0, 1, 1, 0}; }
Gate1Q Gate1Q::y() { return {0, -kI, kI, 0}; }
Gate1Q Gate1Q::z() { return {1, 0, 0, -1}; }

Gate1Q Gate1Q::h() {
  double s = 1.0 / std::sqrt(2.0);
  return {s, s, s, -s};
}

Gate1Q Gate1Q::rx(double lambda) {
  double c = std::cos(lambda / 2), s = std::sin(lambda / 2);
  return {c, -kI * s, -kI * s, c};
}

Gate1Q Gate1Q::rz(double lambda) {
  return {std::exp(-kI * (lambda / 2)), 0, 0, std::exp(kI * (lambda / 2))};
}

Gate1Q Gate1Q::phase(double theta) { return {1, 0, 0, std::exp(kI * theta)}; }

Gate1Q Gate1Q::y_basis() { return rx(M_PI / 2); }
Gate1Q Gate1Q::y_basis_dag() { return rx(-M_PI / 2); }

Gate1Q Gate1Q::axis_rotation(double nx, double ny, double nz, double theta) {
  double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (norm == 0.0) return identity();
  nx /= norm;
  ny /= norm;
  nz /= norm;
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  // cos(t/2) I - i sin(t/2) (nx X + ny Y + nz Z)
  return {cdouble(c, -s * nz), cdouble(-s * ny, -s * nx),
          cdouble(s * ny, -s * nx), cdouble(c, s * nz)};
}

Gate1Q Gate1Q::dagger() const {
  Gate1Q g = non_unitary(std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11));
  g.unitary = unitary;
  return g;
}

Gate1Q Gate1Q::operator*(const Gate1Q& r) const {
  Gate1Q g = non_unitary(u00 * r.u00 + u01 * r.u10, u00 * r.u01 + u01 * r.u11,
                         u10 * r.u00 + u11 * r.u10, u10 * r.u01 + u11 * r.u11);
  g.unitary = unitary && r.unitary;
  return g;
}

bool Gate1Q::is_diagonal(double tol) const {
  return std::abs(u01) <= tol && std::abs(u10) <= tol;
}

bool Gate1Q::approx_equal(const Gate1Q& o, double tol) const {
  return std::abs(u00 - o.u00) <= tol && std::abs(u01 - o.u01) <= tol &&
         std::abs(u10 - o.u10) <= tol && std::abs(u11 - o.u11) <= tol;
}

}  // namespace qsim
