#include "qsim/pauli.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>

namespace qsim {

namespace {

void check_qubit(uint32_t qubit, uint32_t n) {
  if (qubit >= n) {
    throw index_error("qubit " + std::to_string(qubit) + " out of range for " +
                      std::to_string(n) + " qubits");
  }
}

void check_size(uint32_t num_qubits) {
  if (num_qubits > 64)
    throw std::invalid_argument("PauliString supports at most 64 qubits");
}

}  // namespace

char pauli_letter(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

PauliString::PauliString(uint32_t num_qubits) : n_(num_qubits) { check_size(num_qubits); }

PauliString::PauliString(uint32_t num_qubits, uint64_t x_mask, uint64_t z_mask)
    : x_(x_mask), z_(z_mask), n_(num_qubits) {
  check_size(num_qubits);
  if (num_qubits < 64) {
    uint64_t valid = (uint64_t{1} << num_qubits) - 1;
    if ((x_mask | z_mask) & ~valid)
      throw index_error("Pauli mask addresses qubits beyond the register");
  }
}

PauliString PauliString::single_letter(uint32_t num_qubits, uint32_t qubit, Pauli p) {
  PauliString s(num_qubits);
  s.set_letter(qubit, p);
  return s;
}

Pauli PauliString::letter(uint32_t qubit) const {
  check_qubit(qubit, n_);
  bool x = (x_ >> qubit) & 1, z = (z_ >> qubit) & 1;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set_letter(uint32_t qubit, Pauli p) {
  check_qubit(qubit, n_);
  uint64_t bit = uint64_t{1} << qubit;
  x_ &= ~bit;
  z_ &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z_ |= bit;
}

uint32_t PauliString::weight() const {
  return static_cast<uint32_t>(std::popcount(x_ | z_));
}

int PauliString::highest_qubit() const {
  uint64_t support = x_ | z_;
  if (support == 0) return -1;
  return 63 - std::countl_zero(support);
}

bool PauliString::commutes_with(const PauliString& other) const {
  // Strings commute iff they anticommute on an even number of qubits.
  int anti = std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_);
  return (anti & 1) == 0;
}

std::string PauliString::str() const {
  if (is_identity()) return "I";
  std::ostringstream out;
  bool first = true;
  for (uint32_t q = 0; q < n_; ++q) {
    Pauli p = letter(q);
    if (p == Pauli::I) continue;
    if (!first) out << ' ';
    out << pauli_letter(p) << q;
    first = false;
  }
  return out.str();
}

bool term_order_less(const PauliString& a, const PauliString& b) {
  int ha = a.highest_qubit(), hb = b.highest_qubit();
  if (ha != hb) return ha < hb;
  uint32_t n = std::max(a.num_qubits(), b.num_qubits());
  for (uint32_t q = 0; q < n; ++q) {
    // I < X < Y < Z
    auto rank = [](const PauliString& s, uint32_t qubit) -> int {
      if (qubit >= s.num_qubits()) return 0;
      switch (s.letter(qubit)) {
        case Pauli::I: return 0;
        case Pauli::X: return 1;
        case Pauli::Y: return 2;
        case Pauli::Z: return 3;
      }
      return 0;
    };
    int ra = rank(a, q), rb = rank(b, q);
    if (ra != rb) return ra < rb;
  }
  return false;
}

PauliProduct multiply_strings(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("Pauli product requires equal qubit counts");
  uint64_t x3 = a.x_mask() ^ b.x_mask();
  uint64_t z3 = a.z_mask() ^ b.z_mask();
  // With letters P = i^{x.z} X^x Z^z, commuting X^x2 past Z^z1 costs
  // (-1)^{z1.x2}; the remaining powers of i rebalance the letter phases.
  int k = std::popcount(a.x_mask() & a.z_mask()) +
          std::popcount(b.x_mask() & b.z_mask()) +
          2 * std::popcount(a.z_mask() & b.x_mask()) -
          std::popcount(x3 & z3);
  return {((k % 4) + 4) % 4, PauliString(a.num_qubits(), x3, z3)};
}

PauliTerm multiply_terms(const PauliTerm& a, const PauliTerm& b) {
  static const cdouble kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  PauliProduct p = multiply_strings(a.string, b.string);
  return {a.coeff * b.coeff * kPhases[p.phase_exponent], p.string};
}

PauliSum PauliSum::identity(uint32_t num_qubits, cdouble coeff) {
  PauliSum s(num_qubits);
  s.add(coeff, PauliString(num_qubits));
  return s;
}

void PauliSum::add(cdouble coeff, const PauliString& s) {
  if (n_ == 0 && terms_.empty()) n_ = s.num_qubits();
  if (s.num_qubits() != n_)
    throw std::invalid_argument("PauliSum term has mismatched qubit count");
  terms_.push_back({coeff, s});
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  for (const auto& t : other.terms_) add(t);
  return *this;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  PauliSum out = *this;
  out += other;
  return out;
}

PauliSum PauliSum::operator*(cdouble scalar) const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coeff *= scalar;
  return out;
}

PauliSum PauliSum::operator*(const PauliSum& other) const {
  if (n_ != other.n_ && !terms_.empty() && !other.terms_.empty())
    throw std::invalid_argument("PauliSum product requires equal qubit counts");
  PauliSum out(n_);
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) out.add(multiply_terms(a, b));
  return out;
}

PauliSum PauliSum::dagger() const {
  PauliSum out(n_);
  for (const auto& t : terms_) out.add(std::conj(t.coeff), t.string);
  return out;
}

PauliSum PauliSum::simplified(double cutoff) const {
  std::unordered_map<uint64_t, std::unordered_map<uint64_t, cdouble>> merged;
  for (const auto& t : terms_) merged[t.string.x_mask()][t.string.z_mask()] += t.coeff;
  std::vector<PauliTerm> kept;
  for (const auto& [x, zs] : merged)
    for (const auto& [z, c] : zs)
      if (std::abs(c) > cutoff) kept.push_back({c, PauliString(n_, x, z)});
  std::sort(kept.begin(), kept.end(), [](const PauliTerm& a, const PauliTerm& b) {
    return term_order_less(a.string, b.string);
  });
  PauliSum out(n_);
  out.terms_ = std::move(kept);
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& t : terms_)
    if (std::abs(t.coeff.imag()) > tol) return false;
  return true;
}

bool PauliSum::is_anti_hermitian(double tol) const {
  for (const auto& t : terms_)
    if (std::abs(t.coeff.real()) > tol) return false;
  return true;
}

std::string PauliSum::str() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    out << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag()
        << "i)*" << t.string.str();
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace qsim
