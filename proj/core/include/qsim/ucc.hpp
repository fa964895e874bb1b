#pragma once

#include <cstdint>
#include <vector>

#include "qsim/circuit.hpp"
#include "qsim/fermion.hpp"
#include "qsim/mappings.hpp"
#include "qsim/pauli.hpp"

namespace qsim {

struct SingleExcitation {
  uint32_t occupied, virt;
  double amplitude;
};

struct DoubleExcitation {
  uint32_t occupied1, occupied2, virt1, virt2;
  double amplitude;
};

/// Cluster amplitudes over n spin-orbitals with the lowest n_electrons modes
/// occupied in the reference. Spin convention: even modes alpha, odd beta;
/// validate() warns (returns messages) on spin-parity mismatches but only
/// rejects index-range violations.
struct ClusterAmplitudes {
  uint32_t n_modes = 0;
  uint32_t n_electrons = 0;
  std::vector<SingleExcitation> singles;
  std::vector<DoubleExcitation> doubles;

  std::vector<std::string> validate() const;  // throws on range errors
};

/// Anti-Hermitian cluster operator T1 + T2; amplitudes below the cutoff are
/// dropped (default 1e-5, the truncation used for ingested CCSD amplitudes).
FermionSum build_cluster_operator(const ClusterAmplitudes& amps, double cutoff = 1e-5);

/// Reference-determinant bitmask: lowest n_electrons bits under JW, their
/// parity-tree encoding under BK.
uint64_t hartree_fock_reference(uint32_t n_electrons, uint32_t n_modes, Mapping mapping);

struct TrotterPlan {
  uint32_t repetitions = 1;  // eta
};

/// One product factor exp(i angle P).
struct ExponentTerm {
  double angle;
  PauliString string;
};

/// Splits an anti-Hermitian generator (coefficients i*c) into eta repetitions
/// of its term sequence with angles c/eta, in the deterministic term order.
std::vector<ExponentTerm> trotterize(const PauliSum& generator, const TrotterPlan& plan);

/// Appends gates implementing exp(i angle P): basis changes (H for X, YB for
/// Y), ascending CNOT ladder onto the highest active qubit, RZ(-2 angle)
/// there, then the inverse ladder and basis changes. Identity strings only
/// advance the circuit's global phase.
void synthesize_exponential(Circuit& circuit, double angle, const PauliString& p);

struct UccCircuit {
  Circuit circuit;
  uint64_t reference = 0;
  Mapping mapping = Mapping::JordanWigner;
  uint32_t n_electrons = 0;
};

UccCircuit build_ucc_circuit(const ClusterAmplitudes& amps, Mapping mapping,
                             uint32_t trotter_repetitions = 1,
                             double amplitude_cutoff = 1e-5);

/// Textbook QFT: per qubit an H plus controlled phases diag(1, e^{2 pi i/2^k}),
/// then the qubit-reversal swap network with each swap as three CNOTs.
Circuit qft_circuit(uint32_t n);

}  // namespace qsim
