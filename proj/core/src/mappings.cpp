#include "qsim/mappings.hpp"

#include "qsim/errors.hpp"

namespace qsim {

namespace {

void check_mode(uint32_t p, uint32_t n) {
  if (p >= n)
    throw index_error("mode " + std::to_string(p) + " out of range for " +
                      std::to_string(n) + " modes");
}

PauliString z_string_on(const std::set<uint32_t>& qubits, uint32_t n) {
  PauliString s(n);
  for (uint32_t q : qubits) s.set_letter(q, Pauli::Z);
  return s;
}

}  // namespace

const char* mapping_name(Mapping m) {
  return m == Mapping::JordanWigner ? "jw" : "bk";
}

namespace bk_sets {

// Node j+1 of the Fenwick tree stores the partial occupation sum ending at
// orbital j; these walks follow the usual binary-index arithmetic.
std::set<uint32_t> occupation_set(uint32_t index) {
  std::set<uint32_t> out;
  uint32_t node = index + 1;
  out.insert(node - 1);
  uint32_t parent = node & (node - 1);
  node = index;
  while (node != parent) {
    out.insert(node - 1);
    node &= node - 1;
  }
  return out;
}

std::set<uint32_t> parity_set(uint32_t index) {
  std::set<uint32_t> out;
  uint32_t node = index;
  while (node > 0) {
    out.insert(node - 1);
    node &= node - 1;
  }
  return out;
}

std::set<uint32_t> update_set(uint32_t index, uint32_t n) {
  std::set<uint32_t> out;
  uint32_t node = index + 1;
  node += node & (~node + 1);
  while (node <= n) {
    out.insert(node - 1);
    node += node & (~node + 1);
  }
  return out;
}

}  // namespace bk_sets

PauliSum jw_creation(uint32_t p, uint32_t n) {
  check_mode(p, n);
  PauliString zs(n);
  for (uint32_t m = 0; m < p; ++m) zs.set_letter(m, Pauli::Z);
  PauliString xs = zs, ys = zs;
  xs.set_letter(p, Pauli::X);
  ys.set_letter(p, Pauli::Y);
  PauliSum out(n);
  out.add(0.5, xs);                 // (X - iY)/2 maps |0> -> |1>
  out.add(cdouble(0, -0.5), ys);
  return out;
}

PauliSum jw_annihilation(uint32_t p, uint32_t n) {
  return jw_creation(p, n).dagger();
}

PauliSum bk_ladder(uint32_t p, bool creation, uint32_t n) {
  check_mode(p, n);
  // flip * projector, with the parity sign on the left:
  //   a_p^dagger = Z_P(p) . X_{p u U(p)} . (I + Z_O(p))/2
  //   a_p        = Z_P(p) . X_{p u U(p)} . (I - Z_O(p))/2
  PauliString flip(n);
  flip.set_letter(p, Pauli::X);
  for (uint32_t q : bk_sets::update_set(p, n)) flip.set_letter(q, Pauli::X);

  PauliTerm parity_flip =
      multiply_terms({1.0, z_string_on(bk_sets::parity_set(p), n)}, {1.0, flip});

  PauliTerm occ = {creation ? cdouble(0.5) : cdouble(-0.5),
                   z_string_on(bk_sets::occupation_set(p), n)};

  PauliSum out(n);
  out.add(multiply_terms(parity_flip, {0.5, PauliString(n)}));
  out.add(multiply_terms(parity_flip, occ));
  return out.simplified();
}

PauliSum map_ladder(uint32_t p, bool creation, uint32_t n, Mapping mapping) {
  if (mapping == Mapping::JordanWigner)
    return creation ? jw_creation(p, n) : jw_annihilation(p, n);
  return bk_ladder(p, creation, n);
}

PauliSum fermion_to_pauli(const FermionSum& f, Mapping mapping, uint32_t n) {
  PauliSum total(n);
  for (const auto& term : f.terms()) {
    PauliSum acc = PauliSum::identity(n, term.coeff);
    for (const auto& op : term.ops) {
      check_mode(op.mode, n);
      acc = acc * map_ladder(op.mode, op.creation, n, mapping);
    }
    total += acc;
  }
  return total.simplified();
}

uint64_t bk_encode_occupation(uint64_t occupation, uint32_t n) {
  uint64_t encoded = 0;
  for (uint32_t j = 0; j < n; ++j) {
    if (!((occupation >> j) & 1)) continue;
    encoded ^= uint64_t{1} << j;
    for (uint32_t q : bk_sets::update_set(j, n)) encoded ^= uint64_t{1} << q;
  }
  return encoded;
}

}  // namespace qsim
