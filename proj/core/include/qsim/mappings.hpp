#pragma once

#include <cstdint>
#include <set>

#include "qsim/fermion.hpp"
#include "qsim/pauli.hpp"

namespace qsim {

enum class Mapping { JordanWigner, BravyiKitaev };

const char* mapping_name(Mapping m);

/// Jordan-Wigner ladder operators: a_p^dagger = (prod_{m<p} Z_m) (X - iY)/2,
/// a_p the (X + iY)/2 partner. Occupation lives on qubit p (|1> = occupied).
PauliSum jw_creation(uint32_t p, uint32_t n);
PauliSum jw_annihilation(uint32_t p, uint32_t n);

/// Bravyi-Kitaev ladder operator from the Fenwick-tree index sets: the flip
/// ({p} + update set) moves the occupation, the occupation set reads it back,
/// the parity set supplies the (-1)^{parity below p} sign. Each image string
/// touches O(log n) qubits.
PauliSum bk_ladder(uint32_t p, bool creation, uint32_t n);

PauliSum map_ladder(uint32_t p, bool creation, uint32_t n, Mapping mapping);

/// Substitutes each ladder operator, multiplies products out left to right
/// and simplifies with the algebraic-zero cutoff.
PauliSum fermion_to_pauli(const FermionSum& f, Mapping mapping, uint32_t n);

/// Bravyi-Kitaev image of an occupation bitmask: qubit q stores the XOR of
/// the occupations its tree node covers.
uint64_t bk_encode_occupation(uint64_t occupation, uint32_t n);

namespace bk_sets {
// Fenwick-tree index sets (0-based qubit indices), exposed for tests.
std::set<uint32_t> occupation_set(uint32_t index);
std::set<uint32_t> parity_set(uint32_t index);
std::set<uint32_t> update_set(uint32_t index, uint32_t n);
}  // namespace bk_sets

}  // namespace qsim
