#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qsim/errors.hpp"

namespace qsim {

using cdouble = std::complex<double>;

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_letter(Pauli p);

/// Tensor product of single-qubit Paulis stored as an (x-mask, z-mask) pair,
/// Y = both bits set. Supports up to 64 qubits.
class PauliString {
 public:
  PauliString() : n_(0) {}
  explicit PauliString(uint32_t num_qubits);
  PauliString(uint32_t num_qubits, uint64_t x_mask, uint64_t z_mask);

  /// E.g. single_letter(4, 2, Pauli::Y) -> "Y2" on four qubits.
  static PauliString single_letter(uint32_t num_qubits, uint32_t qubit, Pauli p);

  uint32_t num_qubits() const { return n_; }
  uint64_t x_mask() const { return x_; }
  uint64_t z_mask() const { return z_; }

  Pauli letter(uint32_t qubit) const;
  void set_letter(uint32_t qubit, Pauli p);

  bool is_identity() const { return x_ == 0 && z_ == 0; }
  /// Number of non-identity letters.
  uint32_t weight() const;
  /// Highest qubit with a non-identity letter, -1 for the identity string.
  int highest_qubit() const;
  bool commutes_with(const PauliString& other) const;

  bool operator==(const PauliString& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
  }

  std::string str() const;

 private:
  uint64_t x_ = 0, z_ = 0;
  uint32_t n_;
};

/// Deterministic term order: primary key highest non-identity qubit,
/// then lexicographic over letters from qubit 0 with I < X < Y < Z.
bool term_order_less(const PauliString& a, const PauliString& b);

/// Product of two strings. The phase i^k (k returned mod 4) is computed from
/// popcounts over the bitmasks; the letter convention is P = i^{x.z} X^x Z^z,
/// which makes every string Hermitian.
struct PauliProduct {
  int phase_exponent;  // product = i^phase_exponent * string
  PauliString string;
};
PauliProduct multiply_strings(const PauliString& a, const PauliString& b);

struct PauliTerm {
  cdouble coeff;
  PauliString string;
};

PauliTerm multiply_terms(const PauliTerm& a, const PauliTerm& b);

/// Weighted sum of Pauli strings. simplify() merges duplicates, drops
/// coefficients below the cutoff and leaves terms in the deterministic order.
class PauliSum {
 public:
  PauliSum() : n_(0) {}
  explicit PauliSum(uint32_t num_qubits) : n_(num_qubits) {}

  static PauliSum identity(uint32_t num_qubits, cdouble coeff = 1.0);

  uint32_t num_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  void add(cdouble coeff, const PauliString& s);
  void add(const PauliTerm& t) { add(t.coeff, t.string); }

  PauliSum& operator+=(const PauliSum& other);
  PauliSum operator+(const PauliSum& other) const;
  PauliSum operator*(cdouble scalar) const;
  PauliSum operator*(const PauliSum& other) const;

  /// Conjugate transpose; strings are Hermitian so only coefficients change.
  PauliSum dagger() const;

  PauliSum simplified(double cutoff = 1e-12) const;

  /// All coefficients real / purely imaginary within tol (call on simplified sums).
  bool is_hermitian(double tol = 1e-10) const;
  bool is_anti_hermitian(double tol = 1e-10) const;

  std::string str() const;

 private:
  uint32_t n_;
  std::vector<PauliTerm> terms_;
};

}  // namespace qsim
