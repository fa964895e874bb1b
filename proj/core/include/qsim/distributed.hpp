#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qsim/circuit.hpp"
#include "qsim/noise.hpp"
#include "qsim/pauli.hpp"
#include "qsim/state_vector.hpp"
#include "qsim/transport.hpp"

namespace qsim::dist {

constexpr uint64_t kDefaultChunkAmplitudes = uint64_t{1} << 18;  // 4 MiB

/// One rank's slice of a 2^n-amplitude register spread over 2^p ranks:
/// global index = (rank << m) | local index, m = n - p. Gates on qubits
/// k < m run locally; higher qubits run the pairwise half-exchange protocol
/// in chunks of at most chunk_size amplitudes (the scratch buffer's size).
class DistEngine {
 public:
  DistEngine(Transport& transport, uint32_t total_qubits,
             uint64_t chunk_amplitudes = kDefaultChunkAmplitudes);

  uint32_t total_qubits() const { return n_; }
  uint32_t rank_bits() const { return p_; }
  uint32_t local_qubits() const { return m_; }
  uint32_t rank() const { return transport_.rank(); }
  uint64_t chunk_size() const { return chunk_; }
  uint64_t gate_seq() const { return gate_seq_; }
  Transport& transport() { return transport_; }

  std::span<qsim::cdouble> local() { return local_; }
  std::span<const qsim::cdouble> local() const { return local_; }

  void set_basis_state(uint64_t occupied);
  /// Installs this rank's slice of a full amplitude vector (tests).
  void set_local_slice(std::span<const qsim::cdouble> amplitudes);

  void apply(const Gate1Q& g, uint32_t target);
  void apply_controlled(const Gate1Q& g, uint32_t control, uint32_t target);
  void apply_op(const GateOp& op);
  void run(const Circuit& circuit);

  /// Identical on every rank (local partial sums + ordered allreduce).
  /// Z-strings reduce locally with no amplitude exchange; X/Y letters are
  /// rotated to Z with distributed basis-change gates, summed, and undone.
  double expectation(const PauliSum& observable);
  double norm_sq();

  /// Rank 0 receives the assembled vector; other ranks get nullopt.
  std::optional<StateVector> gather(uint32_t max_qubits = 28);

 private:
  static uint32_t rank_bits_for(uint32_t world_size);
  uint64_t partner_bit(uint32_t k) const { return uint64_t{1} << (k - m_); }
  void exchange_apply(const Gate1Q& g, uint32_t k, int32_t local_control);

  Transport& transport_;
  uint32_t n_, p_, m_;
  uint64_t chunk_;
  uint64_t gate_seq_ = 0;
  std::vector<qsim::cdouble> local_;
  std::vector<qsim::cdouble> scratch_;
};

/// Partner rank for a gate on qubit k >= m: flip bit (k - m) of the rank id.
uint32_t partner_rank(uint32_t rank, uint32_t k, uint32_t m);

/// Distributed mirror of run_trajectories: every rank walks the same
/// trajectory RNG streams, so the sampled noise gates (and therefore the
/// records) match the single-node runner's for equal seeds.
TrajectoryResult dist_run_trajectories(DistEngine& engine, const Circuit& circuit,
                                       uint64_t reference, const NoiseModel& model,
                                       const std::vector<NamedObservable>& observables,
                                       const TrajectoryConfig& cfg);

}  // namespace qsim::dist
