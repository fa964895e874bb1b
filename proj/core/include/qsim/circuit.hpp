#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsim/gates.hpp"

namespace qsim {

/// Named gate kinds mirror the circuit text format; Custom covers raw `U`
/// matrices and composed (errored) gates.
enum class GateKind : uint8_t {
  H,
  X,
  YBasis,     // YB
  YBasisDag,  // YBDG
  RZ,
  RX,
  CNOT,
  CRX,
  CPhase,  // controlled diag(1, e^{i theta}); not representable in the text format
  Custom,
};

bool gate_kind_is_controlled(GateKind k);

struct GateOp {
  GateKind kind;
  Gate1Q gate;
  uint32_t target = 0;
  uint32_t control = kNoControl;
  double angle = 0.0;       // RZ/RX/CRX/CPhase parameter, radians
  uint64_t time_step = 0;   // position on the noise clock

  static constexpr uint32_t kNoControl = 0xffffffffu;
  bool is_controlled() const { return control != kNoControl; }
};

/// Ordered gate sequence. Default scheduling gives every gate its own time
/// step; relabel_layered() packs gates on disjoint qubits into shared steps.
class Circuit {
 public:
  Circuit() : n_(0) {}
  explicit Circuit(uint32_t num_qubits) : n_(num_qubits) {}

  uint32_t num_qubits() const { return n_; }
  const std::vector<GateOp>& ops() const { return ops_; }
  std::vector<GateOp>& mutable_ops() { return ops_; }
  size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }

  double global_phase() const { return global_phase_; }
  void add_global_phase(double phase) { global_phase_ += phase; }

  void add(GateKind kind, const Gate1Q& g, uint32_t target, double angle = 0.0);
  void add_controlled(GateKind kind, const Gate1Q& g, uint32_t control,
                      uint32_t target, double angle = 0.0);

  // Text-format helpers.
  void add_h(uint32_t q) { add(GateKind::H, Gate1Q::h(), q); }
  void add_x(uint32_t q) { add(GateKind::X, Gate1Q::x(), q); }
  void add_yb(uint32_t q) { add(GateKind::YBasis, Gate1Q::y_basis(), q); }
  void add_ybdg(uint32_t q) { add(GateKind::YBasisDag, Gate1Q::y_basis_dag(), q); }
  void add_rz(uint32_t q, double lambda) { add(GateKind::RZ, Gate1Q::rz(lambda), q, lambda); }
  void add_rx(uint32_t q, double lambda) { add(GateKind::RX, Gate1Q::rx(lambda), q, lambda); }
  void add_cnot(uint32_t c, uint32_t t) {
    add_controlled(GateKind::CNOT, Gate1Q::x(), c, t);
  }
  void add_crx(uint32_t c, uint32_t t, double lambda) {
    add_controlled(GateKind::CRX, Gate1Q::rx(lambda), c, t, lambda);
  }
  void add_cphase(uint32_t c, uint32_t t, double theta) {
    add_controlled(GateKind::CPhase, Gate1Q::phase(theta), c, t, theta);
  }
  void add_custom(uint32_t q, const Gate1Q& g) { add(GateKind::Custom, g, q); }

  uint64_t num_time_steps() const;
  bool contains_non_unitary() const;

  /// Greedy layering: a gate joins the current step when its qubits are
  /// untouched there. Observable semantics only change via the noise clock.
  void relabel_layered();

  Circuit& operator+=(const Circuit& other);

 private:
  void check_target(uint32_t q) const;
  uint32_t n_;
  std::vector<GateOp> ops_;
  double global_phase_ = 0.0;
};

}  // namespace qsim
