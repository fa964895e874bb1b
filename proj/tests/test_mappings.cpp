#include <doctest.h>

#include "qsim/dense_matrix.hpp"
#include "qsim/mappings.hpp"
#include "qsim/state_vector.hpp"
#include "support/test_helpers.hpp"

using namespace qsim;

namespace {

FermionSum number_operator(uint32_t n) {
  FermionSum sum(n);
  for (uint32_t i = 0; i < n; ++i) sum.add(1.0, {{i, true}, {i, false}});
  return sum;
}

FermionSum random_hermitian_fermion_sum(uint32_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  FermionSum sum(n);
  for (int term = 0; term < 6; ++term) {
    const uint32_t p = static_cast<uint32_t>(rng() % n);
    const uint32_t q = static_cast<uint32_t>(rng() % n);
    const double w = nd(rng);
    sum.add(w, {{p, true}, {q, false}});
    sum.add(w, {{q, true}, {p, false}});  // Hermitian pair
  }
  return sum;
}

}  // namespace

TEST_SUITE_BEGIN("mappings");

TEST_CASE("jw creation on one mode raises |0> to |1>") {
  PauliSum a_dag = jw_creation(0, 1);
  CMatrix m = dense_matrix(a_dag);
  CHECK(std::abs(m(1, 0) - cdouble(1, 0)) < 1e-15);
  CHECK(std::abs(m(0, 0)) < 1e-15);
  CHECK(std::abs(m(0, 1)) < 1e-15);
  CHECK(std::abs(m(1, 1)) < 1e-15);
}

TEST_CASE("jw_creation(1,2) is 0.5 Z0X1 - 0.5i Z0Y1") {
  PauliSum a_dag = jw_creation(1, 2).simplified();
  REQUIRE(a_dag.size() == 2);
  PauliString z0x1(2), z0y1(2);
  z0x1.set_letter(0, Pauli::Z);
  z0x1.set_letter(1, Pauli::X);
  z0y1.set_letter(0, Pauli::Z);
  z0y1.set_letter(1, Pauli::Y);
  for (const auto& t : a_dag.terms()) {
    if (t.string == z0x1) CHECK(std::abs(t.coeff - cdouble(0.5, 0)) < 1e-15);
    else if (t.string == z0y1) CHECK(std::abs(t.coeff - cdouble(0, -0.5)) < 1e-15);
    else FAIL("unexpected string in the image");
  }
}

TEST_CASE("number operator images") {
  FermionSum n0(1);
  n0.add(1.0, {{0, true}, {0, false}});
  PauliSum image = fermion_to_pauli(n0, Mapping::JordanWigner, 1);
  // 0.5 I - 0.5 Z0
  REQUIRE(image.size() == 2);
  CHECK(image.terms()[0].string.is_identity());
  CHECK(std::abs(image.terms()[0].coeff - cdouble(0.5, 0)) < 1e-15);
  CHECK(std::abs(image.terms()[1].coeff - cdouble(-0.5, 0)) < 1e-15);

  PauliSum n3 = fermion_to_pauli(number_operator(3), Mapping::JordanWigner, 3);
  CMatrix m = dense_matrix(n3);
  for (uint64_t i = 0; i < 8; ++i)
    CHECK(std::abs(m(i, i).real() - std::popcount(i)) < 1e-12);
}

TEST_CASE("hopping term image") {
  FermionSum hop(2);
  hop.add(1.0, {{0, true}, {1, false}});
  hop.add(1.0, {{1, true}, {0, false}});
  PauliSum image = fermion_to_pauli(hop, Mapping::JordanWigner, 2);
  // 0.5 X0X1 + 0.5 Y0Y1
  REQUIRE(image.size() == 2);
  for (const auto& t : image.terms())
    CHECK(std::abs(t.coeff - cdouble(0.5, 0)) < 1e-15);
}

TEST_CASE("single-mode BK equals JW") {
  for (bool creation : {false, true}) {
    CMatrix jw = dense_matrix(map_ladder(0, creation, 1, Mapping::JordanWigner));
    CMatrix bk = dense_matrix(map_ladder(0, creation, 1, Mapping::BravyiKitaev));
    CHECK((jw - bk).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("canonical anticommutation for both mappings, n <= 6") {
  for (auto mapping : {Mapping::JordanWigner, Mapping::BravyiKitaev}) {
    for (uint32_t n = 2; n <= 6; ++n) {
      const uint64_t dim = uint64_t{1} << n;
      for (uint32_t p = 0; p < n; ++p) {
        for (uint32_t q = 0; q < n; ++q) {
          CMatrix ap = dense_matrix(map_ladder(p, false, n, mapping));
          CMatrix aq = dense_matrix(map_ladder(q, false, n, mapping));
          CMatrix aq_dag = dense_matrix(map_ladder(q, true, n, mapping));
          CMatrix mixed = ap * aq_dag + aq_dag * ap;
          CMatrix expected =
              p == q ? CMatrix(CMatrix::Identity(dim, dim)) : CMatrix(CMatrix::Zero(dim, dim));
          CHECK((mixed - expected).cwiseAbs().maxCoeff() < 1e-12);
          CHECK((ap * aq + aq * ap).cwiseAbs().maxCoeff() < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("dagger of the image is the image of the dagger") {
  for (auto mapping : {Mapping::JordanWigner, Mapping::BravyiKitaev}) {
    for (uint32_t p = 0; p < 5; ++p) {
      CMatrix a_dag = dense_matrix(map_ladder(p, true, 5, mapping));
      CMatrix a = dense_matrix(map_ladder(p, false, 5, mapping));
      CHECK((a_dag - a.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("locality: JW exact, BK logarithmic") {
  const uint32_t n = 16;
  for (uint32_t p = 0; p < n; ++p) {
    for (const auto& t : jw_creation(p, n).terms())
      CHECK(t.string.weight() == p + 1);
    const uint32_t bound = 3 * static_cast<uint32_t>(std::ceil(std::log2(n))) + 1;
    for (const auto& t : bk_ladder(p, true, n).terms())
      CHECK(t.string.weight() <= bound);
  }
}

TEST_CASE("JW and BK images are isospectral") {
  auto& rng = test::global_rng();
  for (int it = 0; it < 10; ++it) {
    const uint32_t n = 3 + it % 4;
    FermionSum f = random_hermitian_fermion_sum(n, rng);
    auto jw = hermitian_eigenvalues(dense_matrix(fermion_to_pauli(f, Mapping::JordanWigner, n)));
    auto bk = hermitian_eigenvalues(dense_matrix(fermion_to_pauli(f, Mapping::BravyiKitaev, n)));
    REQUIRE(jw.size() == bk.size());
    for (size_t i = 0; i < jw.size(); ++i)
      CHECK(std::abs(jw[i] - bk[i]) < 1e-10);
  }
}

TEST_CASE("image distributes over addition") {
  auto& rng = test::global_rng();
  FermionSum f = random_hermitian_fermion_sum(4, rng);
  FermionSum g = random_hermitian_fermion_sum(4, rng);
  FermionSum sum = f;
  sum += g;
  for (auto mapping : {Mapping::JordanWigner, Mapping::BravyiKitaev}) {
    CMatrix lhs = dense_matrix(fermion_to_pauli(sum, mapping, 4));
    CMatrix rhs = dense_matrix(
        (fermion_to_pauli(f, mapping, 4) + fermion_to_pauli(g, mapping, 4)).simplified());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("empty and zero sums map to empty images") {
  FermionSum zero(3);
  CHECK(fermion_to_pauli(zero, Mapping::JordanWigner, 3).empty());
  FermionSum cancels(3);
  cancels.add(1.0, {{0, true}, {1, false}});
  cancels.add(-1.0, {{0, true}, {1, false}});
  CHECK(fermion_to_pauli(cancels, Mapping::BravyiKitaev, 3).empty());
}

TEST_CASE("mode range errors") {
  CHECK_THROWS_AS(jw_creation(3, 3), index_error);
  CHECK_THROWS_AS(bk_ladder(5, false, 4), index_error);
}

TEST_CASE("BK occupation encoding carries the particle number") {
  StateVector psi =
      StateVector::basis_state(4, bk_encode_occupation(0b0111, 4));
  PauliSum n_bk = fermion_to_pauli(number_operator(4), Mapping::BravyiKitaev, 4);
  CHECK(expectation(psi, n_bk) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_SUITE_END();
