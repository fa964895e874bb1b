#include "qsim/distributed.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "qsim/errors.hpp"
#include "qsim/parallel.hpp"

namespace qsim::dist {

using qsim::cdouble;

uint32_t partner_rank(uint32_t rank, uint32_t k, uint32_t m) {
  if (k < m)
    throw std::invalid_argument("qubit " + std::to_string(k) +
                                " is node-local (below " + std::to_string(m) + ")");
  return rank ^ (uint32_t{1} << (k - m));
}

uint32_t DistEngine::rank_bits_for(uint32_t world_size) {
  if (world_size == 0 || (world_size & (world_size - 1)) != 0)
    throw std::invalid_argument("world size must be a power of two");
  return static_cast<uint32_t>(std::countr_zero(world_size));
}

DistEngine::DistEngine(Transport& transport, uint32_t total_qubits,
                       uint64_t chunk_amplitudes)
    : transport_(transport), n_(total_qubits), p_(rank_bits_for(transport.world_size())) {
  if (total_qubits <= p_)
    throw std::invalid_argument("need at least one local qubit per rank");
  m_ = n_ - p_;
  const uint64_t half = uint64_t{1} << (m_ - 1);
  chunk_ = std::min(chunk_amplitudes == 0 ? half : chunk_amplitudes, half);
  local_.assign(uint64_t{1} << m_, cdouble{0, 0});
  scratch_.assign(chunk_, cdouble{0, 0});
  if (transport_.rank() == 0) local_[0] = 1.0;
}

void DistEngine::set_basis_state(uint64_t occupied) {
  if (occupied >> n_)
    throw index_error("basis index out of range");
  std::fill(local_.begin(), local_.end(), cdouble{0, 0});
  if ((occupied >> m_) == transport_.rank())
    local_[occupied & ((uint64_t{1} << m_) - 1)] = 1.0;
}

void DistEngine::set_local_slice(std::span<const cdouble> amplitudes) {
  if (amplitudes.size() != local_.size())
    throw std::invalid_argument("slice must hold 2^m amplitudes");
  std::copy(amplitudes.begin(), amplitudes.end(), local_.begin());
}

void DistEngine::apply(const Gate1Q& g, uint32_t target) {
  if (target >= n_) throw index_error("gate qubit out of range");
  ++gate_seq_;
  if (target < m_) {
    apply_gate_block(local_, g, target);
    return;
  }
  exchange_apply(g, target, -1);
}

void DistEngine::apply_controlled(const Gate1Q& g, uint32_t control, uint32_t target) {
  if (target >= n_ || control >= n_) throw index_error("gate qubit out of range");
  if (control == target)
    throw invalid_gate_error("controlled gate requires control != target");
  ++gate_seq_;
  if (control < m_ && target < m_) {
    apply_controlled_block(local_, g, control, target);
    return;
  }
  if (control >= m_) {
    // Ranks whose id has the control bit clear hold only control-0
    // amplitudes; they sit the gate out entirely.
    const bool active = (transport_.rank() >> (control - m_)) & 1;
    if (!active) return;
    if (target < m_) {
      apply_gate_block(local_, g, target);
      return;
    }
    exchange_apply(g, target, -1);
    return;
  }
  // Local control, distributed target.
  exchange_apply(g, target, static_cast<int32_t>(control));
}

void DistEngine::apply_op(const GateOp& op) {
  if (op.is_controlled())
    apply_controlled(op.gate, op.control, op.target);
  else
    apply(op.gate, op.target);
}

void DistEngine::run(const Circuit& circuit) {
  if (circuit.num_qubits() != n_)
    throw std::invalid_argument("circuit width does not match partition");
  for (const auto& op : circuit.ops()) apply_op(op);
}

void DistEngine::exchange_apply(const Gate1Q& g, uint32_t k, int32_t local_control) {
  const uint32_t partner = partner_rank(transport_.rank(), k, m_);
  const bool high = (transport_.rank() >> (k - m_)) & 1;
  const uint64_t half = local_.size() / 2;
  // The low rank keeps and updates the first half of the pair index range,
  // the high rank the second half; each streams the other half to its
  // partner's scratch and gets the updated values back.
  const uint64_t compute_off = high ? half : 0;
  const uint64_t send_off = high ? 0 : half;
  const cdouble u00 = g.u00, u01 = g.u01, u10 = g.u10, u11 = g.u11;

  for (uint64_t begin = 0, chunk_index = 0; begin < half;
       begin += chunk_, ++chunk_index) {
    const uint64_t count = std::min(chunk_, half - begin);
    ChunkHeader fwd;
    fwd.gate_seq = gate_seq_;
    fwd.chunk_index = static_cast<uint32_t>(chunk_index);
    fwd.count = static_cast<uint32_t>(count);
    fwd.phase = MsgPhase::ForwardExchange;
    transport_.send(partner, fwd, {local_.data() + send_off + begin, count});

    Message in = transport_.receive(partner);
    if (in.header.phase != MsgPhase::ForwardExchange ||
        in.header.gate_seq != gate_seq_ || in.header.chunk_index != chunk_index ||
        in.header.count != count)
      throw transport_error("rank " + std::to_string(transport_.rank()) +
                            " gate " + std::to_string(gate_seq_) +
                            ": unexpected forward chunk");
    std::memcpy(scratch_.data(), in.payload.data(), count * sizeof(cdouble));

    for (uint64_t j = 0; j < count; ++j) {
      const uint64_t li = compute_off + begin + j;
      if (local_control >= 0 && !((li >> local_control) & 1)) continue;
      if (!high) {
        const cdouble lo = local_[li], hi = scratch_[j];
        local_[li] = u00 * lo + u01 * hi;
        scratch_[j] = u10 * lo + u11 * hi;
      } else {
        const cdouble hi = local_[li], lo = scratch_[j];
        local_[li] = u10 * lo + u11 * hi;
        scratch_[j] = u00 * lo + u01 * hi;
      }
    }

    ChunkHeader ret = fwd;
    ret.phase = MsgPhase::ReturnExchange;
    transport_.send(partner, ret, {scratch_.data(), count});

    Message back = transport_.receive(partner);
    if (back.header.phase != MsgPhase::ReturnExchange ||
        back.header.gate_seq != gate_seq_ || back.header.chunk_index != chunk_index ||
        back.header.count != count)
      throw transport_error("rank " + std::to_string(transport_.rank()) +
                            " gate " + std::to_string(gate_seq_) +
                            ": unexpected return chunk");
    std::memcpy(local_.data() + send_off + begin, back.payload.data(),
                count * sizeof(cdouble));
  }
}

double DistEngine::expectation(const PauliSum& observable) {
  if (observable.num_qubits() != n_)
    throw std::invalid_argument("observable width does not match partition");
  const uint64_t rank_offset = static_cast<uint64_t>(transport_.rank()) << m_;
  std::vector<double> partials(2 * observable.size(), 0.0);

  for (size_t g = 0; g < observable.size(); ++g) {
    const PauliString& s = observable.terms()[g].string;
    // Rotate X/Y letters onto Z so the contraction is index-local.
    for (uint32_t q = 0; q < n_; ++q) {
      if (s.letter(q) == Pauli::X) apply(Gate1Q::h(), q);
      if (s.letter(q) == Pauli::Y) apply(Gate1Q::y_basis(), q);
    }
    const uint64_t support = s.x_mask() | s.z_mask();
    cdouble partial =
        pauli_block_sum(local_, rank_offset, 0, support, local_);
    partials[2 * g] = partial.real();
    partials[2 * g + 1] = partial.imag();
    for (uint32_t q = n_; q-- > 0;) {
      if (s.letter(q) == Pauli::X) apply(Gate1Q::h(), q);
      if (s.letter(q) == Pauli::Y) apply(Gate1Q::y_basis_dag(), q);
    }
  }

  transport_.allreduce_sum(partials);
  double total = 0.0;
  for (size_t g = 0; g < observable.size(); ++g) {
    const cdouble value(partials[2 * g], partials[2 * g + 1]);
    if (std::abs(value.imag()) > 1e-12 * std::max(1.0, std::abs(value.real())))
      throw std::runtime_error("Pauli expectation has non-negligible imaginary part");
    total += observable.terms()[g].coeff.real() * value.real();
  }
  return total;
}

double DistEngine::norm_sq() {
  const cdouble* a = local_.data();
  double partial = parallel_pairwise_sum<double>(0, local_.size(), [a](uint64_t i) {
    return a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  });
  std::vector<double> v{partial};
  transport_.allreduce_sum(v);
  return v[0];
}

std::optional<StateVector> DistEngine::gather(uint32_t max_qubits) {
  if (n_ > max_qubits)
    throw capacity_error("gather bound exceeded", uint64_t{16} << n_);
  const uint32_t size = transport_.world_size();
  ChunkHeader h;
  h.phase = MsgPhase::Gather;
  h.gate_seq = gate_seq_;
  if (transport_.rank() != 0) {
    for (uint64_t begin = 0, idx = 0; begin < local_.size(); begin += chunk_, ++idx) {
      const uint64_t count = std::min(chunk_, local_.size() - begin);
      h.chunk_index = static_cast<uint32_t>(idx);
      h.count = static_cast<uint32_t>(count);
      transport_.send(0, h, {local_.data() + begin, count});
    }
    return std::nullopt;
  }
  StateVector full(n_);
  std::copy(local_.begin(), local_.end(), full.amplitudes().begin());
  for (uint32_t r = 1; r < size; ++r) {
    const uint64_t base = static_cast<uint64_t>(r) << m_;
    for (uint64_t begin = 0; begin < local_.size(); begin += chunk_) {
      Message msg = transport_.receive(r);
      if (msg.header.phase != MsgPhase::Gather)
        throw transport_error("expected a gather chunk");
      std::copy(msg.payload.begin(), msg.payload.end(),
                full.amplitudes().begin() + base + begin);
    }
  }
  return full;
}

TrajectoryResult dist_run_trajectories(DistEngine& engine, const Circuit& circuit,
                                       uint64_t reference, const NoiseModel& model,
                                       const std::vector<NamedObservable>& observables,
                                       const TrajectoryConfig& cfg) {
  if (cfg.num_trajectories < 1)
    throw std::invalid_argument("need at least one trajectory");
  if (model.fuse_idle)
    throw std::invalid_argument("idle-noise fusion is not available distributed");
  for (const auto& obs : observables)
    if (obs.op.num_qubits() != circuit.num_qubits())
      throw std::invalid_argument("observable does not match the circuit width");

  const uint64_t steps = circuit.num_time_steps();
  std::vector<size_t> first_op(steps + 1, circuit.ops().size());
  {
    size_t op = 0;
    for (uint64_t t = 0; t < steps; ++t) {
      first_op[t] = op;
      while (op < circuit.ops().size() && circuit.ops()[op].time_step == t) ++op;
    }
  }

  TrajectoryResult result;
  for (const auto& obs : observables) result.names.push_back(obs.name);
  result.num_trajectories = cfg.num_trajectories;
  result.gate_count = circuit.size();
  result.step_count = steps;

  const bool renormalize = circuit.contains_non_unitary();
  const uint64_t stored = model.enabled() ? cfg.num_trajectories : 1;
  result.per_trajectory.assign(stored, {});

  for (uint64_t j = 0; j < stored; ++j) {
    Rng rng = Rng::trajectory_stream(cfg.master_seed, j);
    engine.set_basis_state(reference);
    for (uint64_t t = 0; t < steps; ++t) {
      for (size_t i = first_op[t]; i < first_op[t + 1]; ++i)
        engine.apply_op(circuit.ops()[i]);
      if (model.enabled()) {
        for (uint32_t q = 0; q < circuit.num_qubits(); ++q)
          engine.apply(sample_noise_gate(rng, model.widths(), model.sampling()), q);
      }
    }
    const double scale = renormalize ? 1.0 / engine.norm_sq() : 1.0;
    auto& row = result.per_trajectory[j];
    for (const auto& obs : observables)
      row.push_back(engine.expectation(obs.op) * scale);
  }

  if (!model.enabled() && cfg.num_trajectories > 1)
    result.per_trajectory.assign(cfg.num_trajectories, result.per_trajectory[0]);

  const uint64_t nt = cfg.num_trajectories;
  result.stats.assign(observables.size(), {});
  for (size_t k = 0; k < observables.size(); ++k) {
    double sum = 0.0;
    for (uint64_t j = 0; j < nt; ++j) sum += result.per_trajectory[j][k];
    const double mean = sum / static_cast<double>(nt);
    double ss = 0.0;
    for (uint64_t j = 0; j < nt; ++j) {
      const double d = result.per_trajectory[j][k] - mean;
      ss += d * d;
    }
    const double var = nt > 1 ? ss / static_cast<double>(nt - 1) : 0.0;
    result.stats[k] = {mean, std::sqrt(var), std::sqrt(var / static_cast<double>(nt))};
  }
  return result;
}

}  // namespace qsim::dist
