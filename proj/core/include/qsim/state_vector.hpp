#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qsim/circuit.hpp"
#include "qsim/gates.hpp"
#include "qsim/pauli.hpp"

namespace qsim {

/// Dense 2^n-amplitude register. Bit k of an amplitude's index is the
/// computational-basis value of qubit k, so a gate on qubit k pairs
/// amplitudes at stride 2^k.
class StateVector {
 public:
  explicit StateVector(uint32_t num_qubits);
  static StateVector basis_state(uint32_t num_qubits, uint64_t occupied);

  uint32_t num_qubits() const { return n_; }
  uint64_t size() const { return amps_.size(); }
  std::span<cdouble> amplitudes() { return amps_; }
  std::span<const cdouble> amplitudes() const { return amps_; }
  cdouble& operator[](uint64_t i) { return amps_[i]; }
  const cdouble& operator[](uint64_t i) const { return amps_[i]; }

  void set_basis_state(uint64_t occupied);

  void apply(const Gate1Q& g, uint32_t target);
  void apply_controlled(const Gate1Q& g, uint32_t control, uint32_t target);
  void apply_op(const GateOp& op);
  void run(const Circuit& circuit);

  double norm_sq() const;
  cdouble inner_product(const StateVector& other) const;

  /// Memory guard used by tests and the CLI; 0 means "whatever the
  /// allocator grants". A register of n qubits needs 2^(n+4) bytes.
  static void set_capacity_limit_bytes(uint64_t bytes);
  static uint64_t capacity_limit_bytes();

 private:
  uint32_t n_;
  std::vector<cdouble> amps_;
};

/// <psi|P|psi> without materializing P: X-part index flip, Z-part parity
/// sign, letter phase i^{x.z}. The imaginary part is asserted small and
/// discarded (strings are Hermitian).
double expectation(const StateVector& state, const PauliString& p);
double expectation(const StateVector& state, const PauliSum& sum);

/// Same contraction on a raw amplitude block (used by the distributed
/// engine); index_offset is the global index of block[0].
cdouble pauli_block_sum(std::span<const cdouble> block, uint64_t index_offset,
                        uint64_t x_mask, uint64_t z_mask,
                        std::span<const cdouble> flipped_block);

/// Gate kernels on a raw power-of-two amplitude block, target/control
/// addressed by local bit position. Shared by StateVector and the
/// distributed engine so both paths round identically.
void apply_gate_block(std::span<cdouble> block, const Gate1Q& g, uint32_t target);
void apply_controlled_block(std::span<cdouble> block, const Gate1Q& g,
                            uint32_t control, uint32_t target);

/// Execution schedule produced by cache-block fusion: runs of gates acting
/// below the block boundary are applied block-by-block while the block stays
/// cache resident. Gate order and time_step labels are preserved.
struct ExecGroup {
  bool fused;
  std::vector<GateOp> ops;
};
struct Schedule {
  uint32_t num_qubits;
  uint32_t block_qubits;
  std::vector<ExecGroup> groups;
  uint64_t num_groups() const { return groups.size(); }
};

/// Default block: 2^21 amplitudes (32 MiB), the scale of a last-level cache.
constexpr uint32_t kDefaultBlockQubits = 21;

Schedule fuse_cache_blocks(const Circuit& circuit,
                           uint32_t block_qubits = kDefaultBlockQubits);
void run(StateVector& state, const Schedule& schedule);

}  // namespace qsim
