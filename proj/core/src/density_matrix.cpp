#include "qsim/density_matrix.hpp"

#include "qsim/errors.hpp"

namespace qsim {

DensityMatrix::DensityMatrix(uint32_t num_qubits) : n_(num_qubits) {
  check_dense_size(num_qubits);
  const uint64_t dim = uint64_t{1} << num_qubits;
  rho_ = CMatrix::Zero(dim, dim);
  rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  DensityMatrix dm(psi.num_qubits());
  CVector v = to_dense(psi);
  dm.rho_ = v * v.adjoint();
  return dm;
}

DensityMatrix DensityMatrix::basis(uint32_t num_qubits, uint64_t index) {
  DensityMatrix dm(num_qubits);
  dm.rho_(0, 0) = 0.0;
  dm.rho_(index, index) = 1.0;
  return dm;
}

void DensityMatrix::apply_gate(const Gate1Q& g, uint32_t target) {
  CMatrix u = dense_matrix(g, target, n_);
  rho_ = u * rho_ * u.adjoint();
}

void DensityMatrix::apply_controlled(const Gate1Q& g, uint32_t control, uint32_t target) {
  CMatrix u = dense_controlled_matrix(g, control, target, n_);
  rho_ = u * rho_ * u.adjoint();
}

void DensityMatrix::apply_op(const GateOp& op) {
  if (op.is_controlled())
    apply_controlled(op.gate, op.control, op.target);
  else
    apply_gate(op.gate, op.target);
}

void DensityMatrix::apply_pauli_channel(uint32_t qubit, const PauliChannel& p) {
  if (p.px < 0 || p.py < 0 || p.pz < 0 || p.px + p.py + p.pz >= 1.0)
    throw std::invalid_argument("channel probabilities must be in [0,1) and sum < 1");
  if (qubit >= n_) throw index_error("channel qubit out of range");
  CMatrix x = dense_matrix(Gate1Q::x(), qubit, n_);
  CMatrix y = dense_matrix(Gate1Q::y(), qubit, n_);
  CMatrix z = dense_matrix(Gate1Q::z(), qubit, n_);
  rho_ = (1.0 - p.px - p.py - p.pz) * rho_ + p.px * (x * rho_ * x) +
         p.py * (y * rho_ * y) + p.pz * (z * rho_ * z);
}

void DensityMatrix::apply_pauli_channel_all(const PauliChannel& p) {
  for (uint32_t q = 0; q < n_; ++q) apply_pauli_channel(q, p);
}

double DensityMatrix::expectation(const PauliString& s) const {
  cdouble tr = (rho_ * dense_matrix(s)).trace();
  return tr.real();
}

double DensityMatrix::expectation(const PauliSum& obs) const {
  if (obs.num_qubits() != n_) throw std::invalid_argument("observable size mismatch");
  cdouble tr = (rho_ * dense_matrix(obs)).trace();
  if (std::abs(tr.imag()) > 1e-12 * std::max(1.0, std::abs(tr.real())))
    throw std::runtime_error("Tr(rho H) has non-negligible imaginary part");
  return tr.real();
}

double DensityMatrix::trace_real() const { return rho_.trace().real(); }

double DensityMatrix::hermiticity_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  auto eigs = hermitian_eigenvalues(rho_);
  return eigs.empty() ? 0.0 : eigs.front();
}

}  // namespace qsim
