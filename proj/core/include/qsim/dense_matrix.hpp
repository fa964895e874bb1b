#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qsim/circuit.hpp"
#include "qsim/gates.hpp"
#include "qsim/pauli.hpp"
#include "qsim/state_vector.hpp"

namespace qsim {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Dense reference path for small registers. Everything here is the slow,
/// obviously-correct construction the fast kernels are tested against.
/// Hard cap: 12 qubits (4096 x 4096).
constexpr uint32_t kDenseOracleMaxQubits = 12;

void check_dense_size(uint32_t num_qubits);

CMatrix dense_matrix(const Gate1Q& g);
/// Embedding of a single-qubit gate: index bit k of the register is qubit k.
CMatrix dense_matrix(const Gate1Q& g, uint32_t target, uint32_t num_qubits);
CMatrix dense_controlled_matrix(const Gate1Q& g, uint32_t control, uint32_t target,
                                uint32_t num_qubits);
CMatrix dense_matrix(const PauliString& p);
CMatrix dense_matrix(const PauliSum& sum);
/// Product of the circuit's gate matrices (rightmost op acts first); includes
/// the circuit's recorded global phase.
CMatrix dense_matrix(const Circuit& circuit);

/// exp(A), accurate to ~1e-12 for ||A|| <= 10.
CMatrix dense_exponential(const CMatrix& a);

CVector to_dense(const StateVector& s);
StateVector to_state(const CVector& v);

/// Ascending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

double operator_norm_diff(const CMatrix& a, const CMatrix& b);
/// Largest per-entry deviation, ignoring any global phase, between two
/// unitaries (the phase is fixed on the largest-magnitude entry).
double unitary_distance_up_to_phase(const CMatrix& a, const CMatrix& b);

}  // namespace qsim
