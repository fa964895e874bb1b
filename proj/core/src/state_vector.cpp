#include "qsim/state_vector.hpp"

#include <atomic>
#include <bit>
#include <cmath>

#include "qsim/errors.hpp"
#include "qsim/parallel.hpp"

namespace qsim {

namespace {

std::atomic<uint64_t> g_capacity_limit{0};

constexpr uint64_t kParallelCutoff = uint64_t{1} << 19;

void check_qubit_index(uint32_t q, uint32_t n) {
  if (q >= n)
    throw index_error("qubit " + std::to_string(q) + " out of range for " +
                      std::to_string(n) + "-qubit state");
}

// Pair update on a contiguous amplitude block; every gate eventually lands
// here. Writes are disjoint across iterations, so any partition of the loop
// gives bit-identical results.
void kernel_1q(std::span<cdouble> amps, const Gate1Q& g, uint32_t k) {
  const uint64_t stride = uint64_t{1} << k;
  const uint64_t size = amps.size();
  cdouble* a = amps.data();
  if (g.is_diagonal()) {
    const cdouble d0 = g.u00, d1 = g.u11;
#pragma omp parallel for schedule(static) if (size >= kParallelCutoff)
    for (int64_t base = 0; base < static_cast<int64_t>(size);
         base += static_cast<int64_t>(2 * stride)) {
      for (uint64_t i = base; i < base + stride; ++i) {
        a[i] *= d0;
        a[i + stride] *= d1;
      }
    }
    return;
  }
  const cdouble u00 = g.u00, u01 = g.u01, u10 = g.u10, u11 = g.u11;
#pragma omp parallel for schedule(static) if (size >= kParallelCutoff)
  for (int64_t base = 0; base < static_cast<int64_t>(size);
       base += static_cast<int64_t>(2 * stride)) {
    for (uint64_t i = base; i < base + stride; ++i) {
      const cdouble lo = a[i];
      const cdouble hi = a[i + stride];
      a[i] = u00 * lo + u01 * hi;
      a[i + stride] = u10 * lo + u11 * hi;
    }
  }
}

uint64_t insert_zero_bit(uint64_t v, uint32_t pos) {
  const uint64_t low = v & ((uint64_t{1} << pos) - 1);
  return ((v >> pos) << (pos + 1)) | low;
}

void kernel_controlled(std::span<cdouble> amps, const Gate1Q& g, uint32_t c,
                       uint32_t t) {
  const uint64_t size = amps.size();
  const uint64_t count = size >> 2;
  const uint32_t lo_bit = std::min(c, t), hi_bit = std::max(c, t);
  const uint64_t cbit = uint64_t{1} << c;
  const uint64_t tbit = uint64_t{1} << t;
  cdouble* a = amps.data();
  if (g.is_diagonal()) {
    const cdouble d0 = g.u00, d1 = g.u11;
    const bool skip_low = d0 == cdouble(1.0, 0.0);
#pragma omp parallel for schedule(static) if (count >= kParallelCutoff)
    for (int64_t j = 0; j < static_cast<int64_t>(count); ++j) {
      uint64_t i = insert_zero_bit(insert_zero_bit(static_cast<uint64_t>(j), lo_bit),
                                   hi_bit) |
                   cbit;
      if (!skip_low) a[i] *= d0;
      a[i | tbit] *= d1;
    }
    return;
  }
  const cdouble u00 = g.u00, u01 = g.u01, u10 = g.u10, u11 = g.u11;
#pragma omp parallel for schedule(static) if (count >= kParallelCutoff)
  for (int64_t j = 0; j < static_cast<int64_t>(count); ++j) {
    uint64_t i = insert_zero_bit(insert_zero_bit(static_cast<uint64_t>(j), lo_bit),
                                 hi_bit) |
                 cbit;
    const cdouble lo = a[i];
    const cdouble hi = a[i | tbit];
    a[i] = u00 * lo + u01 * hi;
    a[i | tbit] = u10 * lo + u11 * hi;
  }
}

}  // namespace

void StateVector::set_capacity_limit_bytes(uint64_t bytes) { g_capacity_limit = bytes; }
uint64_t StateVector::capacity_limit_bytes() { return g_capacity_limit; }

StateVector::StateVector(uint32_t num_qubits) : n_(num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("state needs at least one qubit");
  if (num_qubits >= 56)
    throw capacity_error("state of " + std::to_string(num_qubits) +
                             " qubits exceeds the address space",
                         ~uint64_t{0});
  const uint64_t bytes = uint64_t{16} << num_qubits;  // 2^(n+4)
  const uint64_t limit = g_capacity_limit.load();
  if (limit != 0 && bytes > limit)
    throw capacity_error("state of " + std::to_string(num_qubits) + " qubits requires " +
                             std::to_string(bytes) + " bytes (limit " +
                             std::to_string(limit) + ")",
                         bytes);
  try {
    amps_.assign(uint64_t{1} << num_qubits, cdouble{0.0, 0.0});
  } catch (const std::bad_alloc&) {
    throw capacity_error("state of " + std::to_string(num_qubits) + " qubits requires " +
                             std::to_string(bytes) + " bytes",
                         bytes);
  }
  amps_[0] = 1.0;
}

StateVector StateVector::basis_state(uint32_t num_qubits, uint64_t occupied) {
  StateVector s(num_qubits);
  s.set_basis_state(occupied);
  return s;
}

void StateVector::set_basis_state(uint64_t occupied) {
  if (occupied >= size())
    throw index_error("basis index " + std::to_string(occupied) +
                      " out of range for " + std::to_string(n_) + " qubits");
  std::fill(amps_.begin(), amps_.end(), cdouble{0.0, 0.0});
  amps_[occupied] = 1.0;
}

void StateVector::apply(const Gate1Q& g, uint32_t target) {
  check_qubit_index(target, n_);
  kernel_1q(amps_, g, target);
}

void StateVector::apply_controlled(const Gate1Q& g, uint32_t control, uint32_t target) {
  check_qubit_index(target, n_);
  check_qubit_index(control, n_);
  if (control == target)
    throw invalid_gate_error("controlled gate requires control != target");
  kernel_controlled(amps_, g, control, target);
}

void StateVector::apply_op(const GateOp& op) {
  if (op.is_controlled())
    apply_controlled(op.gate, op.control, op.target);
  else
    apply(op.gate, op.target);
}

void StateVector::run(const Circuit& circuit) {
  if (circuit.num_qubits() != n_)
    throw std::invalid_argument("circuit width does not match state");
  for (const auto& op : circuit.ops()) apply_op(op);
}

double StateVector::norm_sq() const {
  const cdouble* a = amps_.data();
  return parallel_pairwise_sum<double>(0, size(), [a](uint64_t i) {
    return a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  });
}

cdouble StateVector::inner_product(const StateVector& other) const {
  if (other.n_ != n_) throw std::invalid_argument("size mismatch");
  const cdouble* a = amps_.data();
  const cdouble* b = other.amps_.data();
  return parallel_pairwise_sum<cdouble>(0, size(), [a, b](uint64_t i) {
    return std::conj(a[i]) * b[i];
  });
}

namespace {
const cdouble kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
}

double expectation(const StateVector& state, const PauliString& p) {
  if (p.num_qubits() != state.num_qubits())
    throw std::invalid_argument("observable width does not match state");
  const uint64_t x = p.x_mask(), z = p.z_mask();
  const cdouble* a = state.amplitudes().data();
  cdouble total = parallel_pairwise_sum<cdouble>(0, state.size(), [a, x, z](uint64_t i) {
    const double sign = std::popcount(i & z) & 1 ? -1.0 : 1.0;
    return sign * (std::conj(a[i ^ x]) * a[i]);
  });
  total *= kIPow[std::popcount(x & z) & 3];
  if (std::abs(total.imag()) > 1e-12 * std::max(1.0, std::abs(total.real())))
    throw std::runtime_error("Pauli expectation has non-negligible imaginary part");
  return total.real();
}

double expectation(const StateVector& state, const PauliSum& sum) {
  double acc = 0.0;
  for (const auto& t : sum.terms()) acc += t.coeff.real() * expectation(state, t.string);
  return acc;
}

cdouble pauli_block_sum(std::span<const cdouble> block, uint64_t index_offset,
                        uint64_t x_mask, uint64_t z_mask,
                        std::span<const cdouble> flipped_block) {
  const cdouble* a = block.data();
  const cdouble* f = flipped_block.data();
  const uint64_t local_x = x_mask & (block.size() - 1);
  cdouble total = parallel_pairwise_sum<cdouble>(
      0, block.size(), [=](uint64_t i) {
        const double sign = std::popcount((index_offset | i) & z_mask) & 1 ? -1.0 : 1.0;
        return sign * (std::conj(f[i ^ local_x]) * a[i]);
      });
  return total * kIPow[std::popcount(x_mask & z_mask) & 3];
}

void apply_gate_block(std::span<cdouble> block, const Gate1Q& g, uint32_t target) {
  kernel_1q(block, g, target);
}

void apply_controlled_block(std::span<cdouble> block, const Gate1Q& g,
                            uint32_t control, uint32_t target) {
  kernel_controlled(block, g, control, target);
}

Schedule fuse_cache_blocks(const Circuit& circuit, uint32_t block_qubits) {
  if (block_qubits > circuit.num_qubits()) block_qubits = circuit.num_qubits();
  Schedule sched;
  sched.num_qubits = circuit.num_qubits();
  sched.block_qubits = block_qubits;
  for (const auto& op : circuit.ops()) {
    const bool blockable =
        op.target < block_qubits && (!op.is_controlled() || op.control < block_qubits);
    if (blockable && !sched.groups.empty() && sched.groups.back().fused) {
      sched.groups.back().ops.push_back(op);
    } else {
      sched.groups.push_back({blockable, {op}});
    }
  }
  return sched;
}

void run(StateVector& state, const Schedule& sched) {
  if (sched.num_qubits != state.num_qubits())
    throw std::invalid_argument("schedule width does not match state");
  const uint64_t block = uint64_t{1} << sched.block_qubits;
  for (const auto& group : sched.groups) {
    if (!group.fused || state.size() <= block) {
      for (const auto& op : group.ops) state.apply_op(op);
      continue;
    }
    auto amps = state.amplitudes();
    const int64_t nblocks = static_cast<int64_t>(state.size() / block);
#pragma omp parallel for schedule(static)
    for (int64_t b = 0; b < nblocks; ++b) {
      std::span<cdouble> window = amps.subspan(b * block, block);
      for (const auto& op : group.ops) {
        if (op.is_controlled())
          kernel_controlled(window, op.gate, op.control, op.target);
        else
          kernel_1q(window, op.gate, op.target);
      }
    }
  }
}

}  // namespace qsim
