#include "qsim/circuit.hpp"

#include <algorithm>

#include "qsim/errors.hpp"

namespace qsim {

bool gate_kind_is_controlled(GateKind k) {
  return k == GateKind::CNOT || k == GateKind::CRX || k == GateKind::CPhase;
}

void Circuit::check_target(uint32_t q) const {
  if (q >= n_)
    throw index_error("gate qubit " + std::to_string(q) + " out of range for " +
                      std::to_string(n_) + " qubits");
}

void Circuit::add(GateKind kind, const Gate1Q& g, uint32_t target, double angle) {
  check_target(target);
  GateOp op;
  op.kind = kind;
  op.gate = g;
  op.target = target;
  op.angle = angle;
  op.time_step = num_time_steps();
  ops_.push_back(op);
}

void Circuit::add_controlled(GateKind kind, const Gate1Q& g, uint32_t control,
                             uint32_t target, double angle) {
  check_target(target);
  check_target(control);
  if (control == target)
    throw invalid_gate_error("controlled gate requires control != target");
  GateOp op;
  op.kind = kind;
  op.gate = g;
  op.target = target;
  op.control = control;
  op.angle = angle;
  op.time_step = num_time_steps();
  ops_.push_back(op);
}

uint64_t Circuit::num_time_steps() const {
  return ops_.empty() ? 0 : ops_.back().time_step + 1;
}

bool Circuit::contains_non_unitary() const {
  return std::any_of(ops_.begin(), ops_.end(),
                     [](const GateOp& op) { return !op.gate.unitary; });
}

void Circuit::relabel_layered() {
  std::vector<uint64_t> qubit_front(n_, 0);
  for (auto& op : ops_) {
    uint64_t step = qubit_front[op.target];
    if (op.is_controlled()) step = std::max(step, qubit_front[op.control]);
    op.time_step = step;
    qubit_front[op.target] = step + 1;
    if (op.is_controlled()) qubit_front[op.control] = step + 1;
  }
  // Gates sharing a layer act on disjoint qubits, so the stable sort that
  // restores nondecreasing time_step labels cannot change the unitary.
  std::stable_sort(ops_.begin(), ops_.end(),
                   [](const GateOp& a, const GateOp& b) { return a.time_step < b.time_step; });
}

Circuit& Circuit::operator+=(const Circuit& other) {
  if (other.n_ != n_)
    throw std::invalid_argument("cannot concatenate circuits of different widths");
  uint64_t offset = num_time_steps();
  for (GateOp op : other.ops_) {
    op.time_step += offset;
    ops_.push_back(op);
  }
  global_phase_ += other.global_phase_;
  return *this;
}

}  // namespace qsim
