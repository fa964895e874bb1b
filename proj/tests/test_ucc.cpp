#include <doctest.h>

#include "qsim/dense_matrix.hpp"
#include "qsim/estimators.hpp"
#include "qsim/io.hpp"
#include "qsim/ucc.hpp"
#include "support/test_helpers.hpp"

using namespace qsim;

namespace {

PauliSum random_anti_hermitian(uint32_t n, int terms, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  PauliSum g(n);
  for (int i = 0; i < terms; ++i)
    g.add(cdouble(0, nd(rng)), test::random_string(n, rng, false));
  return g.simplified();
}

double trotter_error(const PauliSum& generator, uint32_t eta) {
  Circuit c(generator.num_qubits());
  for (const auto& term : trotterize(generator, {eta}))
    synthesize_exponential(c, term.angle, term.string);
  return operator_norm_diff(dense_matrix(c), dense_exponential(dense_matrix(generator)));
}

}  // namespace

TEST_SUITE_BEGIN("ucc");

TEST_CASE("cluster operator is anti-Hermitian, symbolically and as a matrix") {
  ClusterAmplitudes amps{4, 2, {{0, 2, 0.1}}, {{0, 1, 2, 3, 0.05}}};
  FermionSum t = build_cluster_operator(amps);
  CHECK(t.dagger().equals_termwise(t * cdouble(-1.0)));

  PauliSum image = fermion_to_pauli(t, Mapping::JordanWigner, 4);
  CHECK(image.is_anti_hermitian(1e-14));
  CMatrix m = dense_matrix(image);
  CHECK((m + m.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("double excitation expands to eight image strings") {
  ClusterAmplitudes amps{4, 2, {}, {{0, 1, 2, 3, 0.05}}};
  PauliSum image =
      fermion_to_pauli(build_cluster_operator(amps), Mapping::JordanWigner, 4);
  CHECK(image.size() == 8);
}

TEST_CASE("amplitude cutoff drops tiny excitations") {
  ClusterAmplitudes amps{4, 2, {{0, 2, 1e-9}}, {}};
  CHECK(build_cluster_operator(amps).empty());
  CHECK(build_cluster_operator(amps, 0.0).terms().size() == 2);
}

TEST_CASE("amplitude validation") {
  ClusterAmplitudes bad{4, 2, {{2, 3, 0.1}}, {}};  // occupied index not < 2
  CHECK_THROWS_AS(bad.validate(), index_error);
  ClusterAmplitudes spin{4, 2, {{0, 3, 0.1}}, {}};  // alpha -> beta
  CHECK(spin.validate().size() == 1);
}

TEST_CASE("Hartree-Fock references") {
  CHECK(hartree_fock_reference(2, 4, Mapping::JordanWigner) == 0b0011);
  CHECK(hartree_fock_reference(0, 5, Mapping::JordanWigner) == 0);
  CHECK(hartree_fock_reference(0, 5, Mapping::BravyiKitaev) == 0);
  // BK encoding of three electrons in four modes measures N = 3 (checked in
  // the mappings suite); here pin the tree encoding itself.
  CHECK(hartree_fock_reference(3, 4, Mapping::BravyiKitaev) == 0b1101);
  CHECK_THROWS(hartree_fock_reference(5, 4, Mapping::JordanWigner));
}

TEST_CASE("trotterize: commuting generator is exact at eta = 1") {
  PauliSum g(2);
  g.add(cdouble(0, 0.1), PauliString::single_letter(2, 0, Pauli::Z));
  g.add(cdouble(0, 0.2), PauliString::single_letter(2, 1, Pauli::Z));
  CHECK(trotter_error(g, 1) < 1e-12);
}

TEST_CASE("trotterize rejects non-anti-Hermitian generators") {
  PauliSum g(1);
  g.add(cdouble(0.3, 0), PauliString::single_letter(1, 0, Pauli::X));
  CHECK_THROWS_AS(trotterize(g, {1}), std::invalid_argument);
}

TEST_CASE("trotter error drops with eta, roughly first order") {
  PauliSum g(1);
  g.add(cdouble(0, 0.3), PauliString::single_letter(1, 0, Pauli::X));
  g.add(cdouble(0, 0.3), PauliString::single_letter(1, 0, Pauli::Z));
  const double e1 = trotter_error(g, 1);
  const double e2 = trotter_error(g, 2);
  const double e4 = trotter_error(g, 4);
  CHECK(e2 < e1);
  CHECK(e4 < e2);
  const double ratio = e2 / e4;
  CHECK(ratio > 2.0 / 1.5);
  CHECK(ratio < 2.0 * 1.5);
}

TEST_CASE("trotterize repeats the sorted sequence") {
  PauliSum g(2);
  g.add(cdouble(0, 0.4), PauliString::single_letter(2, 1, Pauli::X));
  g.add(cdouble(0, 0.2), PauliString::single_letter(2, 0, Pauli::Y));
  auto seq = trotterize(g, {3});
  REQUIRE(seq.size() == 6);
  CHECK(seq[0].string == seq[2].string);
  CHECK(seq[0].string == seq[4].string);
  CHECK(seq[0].angle == doctest::Approx(0.2 / 3.0));  // Y0 sorts before X1
}

TEST_CASE("synthesized exponentials match the dense matrix exponential") {
  CHECK(Gate1Q::y_basis().approx_equal(Gate1Q::rx(M_PI / 2), 1e-15));

  Circuit rz_only(1);
  synthesize_exponential(rz_only, 0.3, PauliString::single_letter(1, 0, Pauli::Z));
  REQUIRE(rz_only.size() == 1);
  CHECK(rz_only.ops()[0].kind == GateKind::RZ);
  CHECK(rz_only.ops()[0].angle == doctest::Approx(-0.6));

  Circuit zz(2);
  PauliString z0z1(2, 0, 0b11);
  synthesize_exponential(zz, 0.42, z0z1);
  REQUIRE(zz.size() == 3);
  CHECK(zz.ops()[0].kind == GateKind::CNOT);
  CHECK(zz.ops()[1].kind == GateKind::RZ);
  CHECK(zz.ops()[1].target == 1);
  CHECK(unitary_distance_up_to_phase(
            dense_matrix(zz),
            dense_exponential(cdouble(0, 0.42) * dense_matrix(z0z1))) < 1e-13);

  auto& rng = test::global_rng();
  std::uniform_real_distribution<double> angle(-1.0, 1.0);
  for (int it = 0; it < 40; ++it) {
    const uint32_t n = 1 + static_cast<uint32_t>(rng() % 5);
    PauliString p = test::random_string(n, rng, false);
    const double c = angle(rng);
    Circuit circ(n);
    synthesize_exponential(circ, c, p);
    CHECK(unitary_distance_up_to_phase(
              dense_matrix(circ),
              dense_exponential(cdouble(0, c) * dense_matrix(p))) < 1e-12);
  }
}

TEST_CASE("zero angle synthesizes to the identity") {
  Circuit c(3);
  PauliString p(3, 0b101, 0b010);
  synthesize_exponential(c, 0.0, p);
  CMatrix u = dense_matrix(c);
  CHECK((u - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("identity strings only shift the global phase") {
  Circuit c(2);
  synthesize_exponential(c, 0.7, PauliString(2));
  CHECK(c.empty());
  CHECK(c.global_phase() == doctest::Approx(0.7));
}

TEST_CASE("empty cluster operator gives the bare reference") {
  ClusterAmplitudes amps{4, 2, {}, {}};
  UccCircuit ucc = build_ucc_circuit(amps, Mapping::JordanWigner, 1);
  CHECK(ucc.circuit.empty());
  StateVector psi = StateVector::basis_state(4, ucc.reference);
  CHECK(std::abs(psi[0b0011] - cdouble(1, 0)) < 1e-15);
}

TEST_CASE("one single excitation against the dense exponential") {
  ClusterAmplitudes amps{4, 2, {{0, 2, 0.1}}, {}};
  for (auto mapping : {Mapping::JordanWigner, Mapping::BravyiKitaev}) {
    UccCircuit ucc = build_ucc_circuit(amps, mapping, 1);
    StateVector psi = StateVector::basis_state(4, ucc.reference);
    psi.run(ucc.circuit);
    PauliSum image =
        fermion_to_pauli(build_cluster_operator(amps), mapping, 4);
    CVector expected =
        dense_exponential(dense_matrix(image)) *
        to_dense(StateVector::basis_state(4, ucc.reference));
    // the two image strings commute, so eta = 1 is exact
    CHECK(test::max_amp_diff(psi, expected) < 1e-10);
  }
}

TEST_CASE("noise-free UCC conserves the particle number") {
  ClusterAmplitudes amps{4, 2, {{0, 2, 0.06}, {1, 3, 0.06}}, {{0, 1, 2, 3, -0.11}}};
  for (auto mapping : {Mapping::JordanWigner, Mapping::BravyiKitaev}) {
    for (uint32_t eta : {1u, 2u}) {
      UccCircuit ucc = build_ucc_circuit(amps, mapping, eta);
      StateVector psi = StateVector::basis_state(4, ucc.reference);
      psi.run(ucc.circuit);
      CHECK(std::abs(expectation(psi, particle_number_observable(4, mapping)) - 2.0) <
            1e-12);
    }
  }
}

TEST_CASE("circuit emission is deterministic") {
  ClusterAmplitudes amps{4, 2, {{0, 2, 0.06}}, {{0, 1, 2, 3, -0.11}}};
  UccCircuit a = build_ucc_circuit(amps, Mapping::BravyiKitaev, 2);
  UccCircuit b = build_ucc_circuit(amps, Mapping::BravyiKitaev, 2);
  CHECK(write_circuit_file(a.circuit, a.reference) ==
        write_circuit_file(b.circuit, b.reference));
}

TEST_CASE("qft: uniform superposition, DFT matrix, analytic phases") {
  Circuit q3 = qft_circuit(3);
  CMatrix u = dense_matrix(q3);
  CMatrix dft(8, 8);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      dft(y, x) = std::exp(cdouble(0, 2 * M_PI * x * y / 8.0)) / std::sqrt(8.0);
  CHECK((u - dft).cwiseAbs().maxCoeff() < 1e-12);

  StateVector zero(8);
  zero.run(qft_circuit(8));
  const double amp = std::pow(2.0, -4.0);
  for (uint64_t i = 0; i < zero.size(); ++i)
    CHECK(std::abs(zero[i] - cdouble(amp, 0)) < 1e-12);

  const uint64_t x = 0b1011001101;
  StateVector psi = StateVector::basis_state(10, x);
  psi.run(qft_circuit(10));
  const double a10 = std::pow(2.0, -5.0);
  for (uint64_t y = 0; y < psi.size(); y += 37) {
    const double phase = 2.0 * M_PI * static_cast<double>((x * y) % 1024) / 1024.0;
    CHECK(std::abs(psi[y] - a10 * std::exp(cdouble(0, phase))) < 1e-10);
  }
}

TEST_SUITE_END();
