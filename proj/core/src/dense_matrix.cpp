#include "qsim/dense_matrix.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <bit>

#include "qsim/errors.hpp"

namespace qsim {

void check_dense_size(uint32_t num_qubits) {
  if (num_qubits > kDenseOracleMaxQubits)
    throw std::invalid_argument("dense reference path is capped at " +
                                std::to_string(kDenseOracleMaxQubits) + " qubits");
}

CMatrix dense_matrix(const Gate1Q& g) {
  CMatrix m(2, 2);
  m << g.u00, g.u01, g.u10, g.u11;
  return m;
}

CMatrix dense_matrix(const Gate1Q& g, uint32_t target, uint32_t num_qubits) {
  check_dense_size(num_qubits);
  const uint64_t dim = uint64_t{1} << num_qubits;
  const uint64_t tbit = uint64_t{1} << target;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (uint64_t col = 0; col < dim; ++col) {
    const bool t = col & tbit;
    m(col & ~tbit, col) = t ? g.u01 : g.u00;
    m(col | tbit, col) = t ? g.u11 : g.u10;
  }
  return m;
}

CMatrix dense_controlled_matrix(const Gate1Q& g, uint32_t control, uint32_t target,
                                uint32_t num_qubits) {
  check_dense_size(num_qubits);
  const uint64_t dim = uint64_t{1} << num_qubits;
  const uint64_t tbit = uint64_t{1} << target;
  const uint64_t cbit = uint64_t{1} << control;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (uint64_t col = 0; col < dim; ++col) {
    if (!(col & cbit)) {
      m(col, col) = 1.0;
      continue;
    }
    const bool t = col & tbit;
    m(col & ~tbit, col) = t ? g.u01 : g.u00;
    m(col | tbit, col) = t ? g.u11 : g.u10;
  }
  return m;
}

CMatrix dense_matrix(const PauliString& p) {
  check_dense_size(p.num_qubits());
  const uint64_t dim = uint64_t{1} << p.num_qubits();
  const uint64_t x = p.x_mask(), z = p.z_mask();
  static const cdouble kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cdouble phase = kIPow[std::popcount(x & z) & 3];
  CMatrix m = CMatrix::Zero(dim, dim);
  for (uint64_t col = 0; col < dim; ++col) {
    const double sign = std::popcount(col & z) & 1 ? -1.0 : 1.0;
    m(col ^ x, col) = phase * sign;
  }
  return m;
}

CMatrix dense_matrix(const PauliSum& sum) {
  check_dense_size(sum.num_qubits());
  const uint64_t dim = uint64_t{1} << sum.num_qubits();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& t : sum.terms()) m += t.coeff * dense_matrix(t.string);
  return m;
}

CMatrix dense_matrix(const Circuit& circuit) {
  check_dense_size(circuit.num_qubits());
  const uint64_t dim = uint64_t{1} << circuit.num_qubits();
  CMatrix m = CMatrix::Identity(dim, dim);
  for (const auto& op : circuit.ops()) {
    CMatrix g = op.is_controlled()
                    ? dense_controlled_matrix(op.gate, op.control, op.target,
                                              circuit.num_qubits())
                    : dense_matrix(op.gate, op.target, circuit.num_qubits());
    m = g * m;
  }
  if (circuit.global_phase() != 0.0)
    m *= std::exp(cdouble(0, circuit.global_phase()));
  return m;
}

CMatrix dense_exponential(const CMatrix& a) { return a.exp(); }

CVector to_dense(const StateVector& s) {
  CVector v(s.size());
  for (uint64_t i = 0; i < s.size(); ++i) v(i) = s[i];
  return v;
}

StateVector to_state(const CVector& v) {
  uint32_t n = 0;
  while ((uint64_t{1} << n) < static_cast<uint64_t>(v.size())) ++n;
  if ((uint64_t{1} << n) != static_cast<uint64_t>(v.size()))
    throw std::invalid_argument("vector length is not a power of two");
  StateVector s(n);
  for (uint64_t i = 0; i < s.size(); ++i) s[i] = v(i);
  return s;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  return out;
}

double operator_norm_diff(const CMatrix& a, const CMatrix& b) {
  Eigen::JacobiSVD<CMatrix> svd(a - b);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double unitary_distance_up_to_phase(const CMatrix& a, const CMatrix& b) {
  Eigen::Index r = 0, c = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > best) {
        best = std::abs(a(i, j));
        r = i;
        c = j;
      }
  if (best <= 0.0 || std::abs(b(r, c)) == 0.0)
    return (a - b).cwiseAbs().maxCoeff();
  cdouble phase = (a(r, c) / std::abs(a(r, c))) / (b(r, c) / std::abs(b(r, c)));
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace qsim
