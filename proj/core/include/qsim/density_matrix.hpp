#pragma once

#include <cstdint>

#include "qsim/dense_matrix.hpp"
#include "qsim/gates.hpp"
#include "qsim/pauli.hpp"
#include "qsim/state_vector.hpp"

namespace qsim {

struct PauliChannel {
  double px = 0.0, py = 0.0, pz = 0.0;
};

/// Small-register density-matrix reference used as the correctness oracle
/// for the trajectory unraveling (rho -> sum_i E_i rho E_i^dagger).
class DensityMatrix {
 public:
  explicit DensityMatrix(uint32_t num_qubits);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix basis(uint32_t num_qubits, uint64_t index);

  uint32_t num_qubits() const { return n_; }
  const CMatrix& matrix() const { return rho_; }

  void apply_gate(const Gate1Q& g, uint32_t target);
  void apply_controlled(const Gate1Q& g, uint32_t control, uint32_t target);
  void apply_op(const GateOp& op);

  /// Asymmetric depolarizing channel on one qubit:
  /// rho -> (1-px-py-pz) rho + px X rho X + py Y rho Y + pz Z rho Z.
  void apply_pauli_channel(uint32_t qubit, const PauliChannel& p);
  /// The same channel applied independently to every qubit.
  void apply_pauli_channel_all(const PauliChannel& p);

  double expectation(const PauliSum& obs) const;
  double expectation(const PauliString& s) const;

  double trace_real() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;

 private:
  uint32_t n_;
  CMatrix rho_;
};

}  // namespace qsim
