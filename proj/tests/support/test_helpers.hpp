#pragma once

#include <random>

#include "qsim/circuit.hpp"
#include "qsim/dense_matrix.hpp"
#include "qsim/gates.hpp"
#include "qsim/pauli.hpp"
#include "qsim/state_vector.hpp"

namespace qsim::test {

inline std::mt19937_64& global_rng() {
  static std::mt19937_64 rng(0x5eedu);
  return rng;
}

inline Gate1Q random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = cdouble(nd(rng), nd(rng));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  Eigen::Matrix2cd q = qr.householderQ();
  return Gate1Q(q(0, 0), q(0, 1), q(1, 0), q(1, 1));
}

inline StateVector random_state(uint32_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  StateVector psi(n);
  for (uint64_t i = 0; i < psi.size(); ++i) psi[i] = cdouble(nd(rng), nd(rng));
  const double norm = std::sqrt(psi.norm_sq());
  for (uint64_t i = 0; i < psi.size(); ++i) psi[i] /= norm;
  return psi;
}

inline PauliString random_string(uint32_t n, std::mt19937_64& rng,
                                 bool allow_identity = true) {
  for (;;) {
    PauliString s(n);
    for (uint32_t q = 0; q < n; ++q)
      s.set_letter(q, static_cast<Pauli>(rng() % 4));
    if (allow_identity || !s.is_identity()) return s;
  }
}

inline Circuit random_circuit(uint32_t n, size_t gates, std::mt19937_64& rng) {
  Circuit c(n);
  for (size_t i = 0; i < gates; ++i) {
    if (n >= 2 && rng() % 3 == 0) {
      uint32_t a = static_cast<uint32_t>(rng() % n);
      uint32_t b = static_cast<uint32_t>(rng() % (n - 1));
      if (b >= a) ++b;
      if (rng() % 2)
        c.add_cnot(a, b);
      else
        c.add_controlled(GateKind::Custom, random_unitary(rng), a, b);
    } else {
      c.add_custom(static_cast<uint32_t>(rng() % n), random_unitary(rng));
    }
  }
  return c;
}

inline double max_amp_diff(const StateVector& a, const CVector& b) {
  double worst = 0.0;
  for (uint64_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b(static_cast<Eigen::Index>(i))));
  return worst;
}

inline double max_amp_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (uint64_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace qsim::test
