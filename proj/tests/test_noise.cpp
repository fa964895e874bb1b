#include <doctest.h>

#include <cmath>

#include "qsim/noise.hpp"
#include "support/test_helpers.hpp"

using namespace qsim;

TEST_SUITE_BEGIN("noise");

TEST_CASE("derived probabilities") {
  SUBCASE("equal coherence parameters give equal probabilities") {
    auto p = derive_probabilities(250.0, 250.0);
    CHECK(p.px == p.py);
    CHECK(p.pz == doctest::Approx(p.px).epsilon(1e-14));
    CHECK(p.px == doctest::Approx((1 - std::exp(-1.0 / 250.0)) / 4).epsilon(1e-15));
  }
  SUBCASE("infinite M1 leaves pure dephasing") {
    auto p = derive_probabilities(INFINITY, 300.0);
    CHECK(p.px == 0.0);
    CHECK(p.py == 0.0);
    CHECK(p.pz == doctest::Approx((1 - std::exp(-1.0 / 300.0)) / 2).epsilon(1e-15));
  }
  SUBCASE("frozen values at M1=1, M2=2") {
    auto p = derive_probabilities(1.0, 2.0);
    CHECK(p.px == doctest::Approx(0.15803013970713942).epsilon(1e-15));
    CHECK(p.pz == doctest::Approx(0.038704530436543871).epsilon(1e-12));
  }
  SUBCASE("T2 > 2 T1 is rejected") {
    CHECK_THROWS_AS(derive_probabilities(1.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(derive_probabilities(-1.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("gaussian widths") {
  CHECK(stddevs({0, 0, 0}).sx == 0.0);
  CHECK(stddevs({0.15803013970713942, 0, 0}).sx ==
        doctest::Approx(0.41474216177901452).epsilon(1e-15));
  // no overflow right at the edge
  auto s = stddevs({1.0 - 1e-300, 0, 0});
  CHECK(std::isfinite(s.sx));
  CHECK(s.sx > 20.0);
  CHECK_THROWS_AS(stddevs({1.0, 0, 0}), std::invalid_argument);
}

TEST_CASE("scenario mapping honours 1/Tphi = 1/T2 - 1/(2 T1)") {
  NoiseScenario rel_deph{NoiseScenario::Kind::RelaxationDephasing, 90.0};
  CHECK(rel_deph.m1() == 90.0);
  CHECK(rel_deph.m2() == doctest::Approx(60.0));

  NoiseScenario relax{NoiseScenario::Kind::PureRelaxation, 90.0};
  CHECK(relax.m1() == 90.0);
  CHECK(relax.m2() == doctest::Approx(180.0));

  NoiseScenario dephase{NoiseScenario::Kind::PureDephasing, 90.0};
  CHECK(std::isinf(dephase.m1()));
  CHECK(dephase.m2() == 90.0);
}

TEST_CASE("sampled noise gates") {
  Rng rng(123);
  SUBCASE("zero widths give the identity") {
    for (auto mode : {NoiseSampling::ThreeRotation, NoiseSampling::SingleRotation}) {
      Gate1Q g = sample_noise_gate(rng, {0, 0, 0}, mode);
      CHECK(g.approx_equal(Gate1Q::identity(), 1e-15));
    }
  }
  SUBCASE("pure-dephasing gates are diagonal") {
    for (int it = 0; it < 20; ++it) {
      Gate1Q g = sample_noise_gate(rng, {0, 0, 0.3}, NoiseSampling::ThreeRotation);
      CHECK(g.is_diagonal(1e-15));
    }
  }
  SUBCASE("gates are unitary") {
    for (int it = 0; it < 200; ++it) {
      Gate1Q g = sample_noise_gate(rng, {0.2, 0.15, 0.4},
                                   it % 2 ? NoiseSampling::ThreeRotation
                                          : NoiseSampling::SingleRotation);
      CHECK(g.unitarity_defect() < 1e-14);
    }
  }
  SUBCASE("three-rotation and single-rotation agree to O(v^2)") {
    Rng paired_a(77), paired_b(77);
    for (int it = 0; it < 200; ++it) {
      const GaussianWidths s{3e-4, 3e-4, 3e-4};
      Gate1Q three = sample_noise_gate(paired_a, s, NoiseSampling::ThreeRotation);
      Gate1Q single = sample_noise_gate(paired_b, s, NoiseSampling::SingleRotation);
      CHECK(three.approx_equal(single, 5e-6));
    }
  }
}

TEST_CASE("noiseless models do nothing") {
  NoiseModel off = NoiseModel::noiseless();
  CHECK(!off.enabled());
  auto& mt = test::global_rng();
  StateVector psi = test::random_state(3, mt);
  StateVector copy = psi;
  Rng rng(5);
  apply_noise_step(psi, off, rng);
  CHECK(test::max_amp_diff(psi, copy) == 0.0);
}

TEST_CASE("dm channel single-step decay factors are exact") {
  const double m1 = 50.0, m2 = 80.0;
  auto rates = derive_probabilities(m1, m2);

  DensityMatrix rho = DensityMatrix::basis(1, 1);
  PauliSum z(1);
  z.add(1.0, PauliString::single_letter(1, 0, Pauli::Z));
  double before = rho.expectation(z);
  rho.apply_pauli_channel(0, rates);
  CHECK(rho.expectation(z) ==
        doctest::Approx(before * std::exp(-1.0 / m1)).epsilon(1e-13));

  StateVector plus(1);
  plus.apply(Gate1Q::h(), 0);
  DensityMatrix rho_x = DensityMatrix::pure(plus);
  PauliSum x(1);
  x.add(1.0, PauliString::single_letter(1, 0, Pauli::X));
  rho_x.apply_pauli_channel(0, rates);
  CHECK(rho_x.expectation(x) == doctest::Approx(std::exp(-1.0 / m2)).epsilon(1e-13));
}

TEST_CASE("trajectory decay tracks the channel within 4 standard errors") {
  const double m = 60.0;
  NoiseModel model = NoiseModel::from_coherence(m, m);
  const uint32_t steps = 30;
  Circuit idle(1);
  for (uint32_t t = 0; t < steps; ++t) idle.add_custom(0, Gate1Q::identity());

  PauliSum z(1);
  z.add(1.0, PauliString::single_letter(1, 0, Pauli::Z));
  TrajectoryConfig cfg;
  cfg.num_trajectories = 3000;
  cfg.master_seed = 11;
  auto r = run_trajectories(idle, uint64_t{1}, model, {{"z", z, false}}, cfg);

  DensityMatrix rho = propagate_density_matrix(idle, 1, model);
  const double channel = rho.expectation(z);
  CHECK(std::abs(r.stats[0].mean - channel) < 4.0 * r.stats[0].standard_error +
                                                   2e-4 /* O(p^2) sampling bias */);
}

TEST_CASE("idle fusion matches step-by-step noise statistically") {
  const double m = 500.0;
  NoiseModel fused = NoiseModel::from_coherence(m, m);
  fused.fuse_idle = true;
  NoiseModel plain = NoiseModel::from_coherence(m, m);

  const uint32_t steps = 100;
  Circuit idle(1);
  for (uint32_t t = 0; t < steps; ++t) idle.add_custom(0, Gate1Q::identity());
  PauliSum z(1);
  z.add(1.0, PauliString::single_letter(1, 0, Pauli::Z));

  TrajectoryConfig cfg;
  cfg.num_trajectories = 4000;
  cfg.master_seed = 3;
  auto a = run_trajectories(idle, uint64_t{1}, fused, {{"z", z, false}}, cfg);
  cfg.master_seed = 4;
  auto b = run_trajectories(idle, uint64_t{1}, plain, {{"z", z, false}}, cfg);
  const double se =
      std::hypot(a.stats[0].standard_error, b.stats[0].standard_error);
  CHECK(std::abs(a.stats[0].mean - b.stats[0].mean) < 4.0 * se + 1e-3);
}

TEST_CASE("fused idle noise with t=1 matches the plain sampler") {
  Rng a(9), b(9);
  GaussianWidths s{0.1, 0.2, 0.3};
  Gate1Q g1 = fuse_idle_noise(a, s, 1, NoiseSampling::ThreeRotation);
  Gate1Q g2 = sample_noise_gate(b, s, NoiseSampling::ThreeRotation);
  CHECK(g1.approx_equal(g2, 1e-15));
  CHECK(fuse_idle_noise(a, {0, 0, 0}, 50, NoiseSampling::ThreeRotation)
            .approx_equal(Gate1Q::identity(), 1e-15));
}

TEST_CASE("run_trajectories basics") {
  SUBCASE("no noise: every trajectory is the pristine run") {
    auto& mt = test::global_rng();
    Circuit c = test::random_circuit(3, 15, mt);
    PauliSum z(3);
    z.add(1.0, PauliString::single_letter(3, 1, Pauli::Z));
    TrajectoryConfig cfg;
    cfg.num_trajectories = 64;
    auto r = run_trajectories(c, 0, NoiseModel::noiseless(), {{"z", z, false}}, cfg);
    CHECK(r.stats[0].sample_stddev == 0.0);
    CHECK(r.per_trajectory.size() == 64);
  }
  SUBCASE("empty circuit keeps <Z> = -1 on |1>") {
    Circuit empty(1);
    PauliSum z(1);
    z.add(1.0, PauliString::single_letter(1, 0, Pauli::Z));
    TrajectoryConfig cfg;
    cfg.num_trajectories = 10;
    auto r = run_trajectories(empty, 1, NoiseModel::from_coherence(50, 50),
                              {{"z", z, false}}, cfg);
    for (const auto& row : r.per_trajectory) CHECK(row[0] == doctest::Approx(-1.0));
  }
  SUBCASE("trajectory states stay normalized under noise") {
    Circuit idle(2);
    for (int t = 0; t < 50; ++t) idle.add_custom(0, Gate1Q::identity());
    PauliSum norm_probe = PauliSum::identity(2);
    TrajectoryConfig cfg;
    cfg.num_trajectories = 20;
    auto r = run_trajectories(idle, 0b11, NoiseModel::from_coherence(40, 40),
                              {{"one", norm_probe, false}}, cfg);
    for (const auto& row : r.per_trajectory)
      CHECK(std::abs(row[0] - 1.0) < 1e-10);
  }
}

TEST_CASE("identical seeds give identical records for any worker count") {
  auto& mt = test::global_rng();
  Circuit c = test::random_circuit(3, 25, mt);
  PauliSum obs(3);
  obs.add(0.7, PauliString::single_letter(3, 0, Pauli::Z));
  obs.add(0.3, PauliString::single_letter(3, 2, Pauli::X));
  NoiseModel model = NoiseModel::from_coherence(200, 150);

  TrajectoryConfig cfg;
  cfg.num_trajectories = 200;
  cfg.master_seed = 42;
  cfg.workers = 1;
  auto serial = run_trajectories(c, 0b101, model, {{"o", obs, false}}, cfg);
  cfg.workers = 4;
  auto threaded = run_trajectories(c, 0b101, model, {{"o", obs, false}}, cfg);
  REQUIRE(serial.per_trajectory.size() == threaded.per_trajectory.size());
  for (size_t j = 0; j < serial.per_trajectory.size(); ++j)
    CHECK(serial.per_trajectory[j][0] == threaded.per_trajectory[j][0]);
  CHECK(serial.stats[0].mean == threaded.stats[0].mean);
}

TEST_CASE("pure dephasing preserves N on diagonal circuits exactly") {
  NoiseModel model =
      NoiseModel::from_scenario({NoiseScenario::Kind::PureDephasing, 25.0});
  Circuit diag(3);
  for (int t = 0; t < 10; ++t) diag.add_rz(t % 3, 0.3);
  PauliSum number = [] {
    FermionSum n(3);
    for (uint32_t i = 0; i < 3; ++i) n.add(1.0, {{i, true}, {i, false}});
    return fermion_to_pauli(n, Mapping::JordanWigner, 3);
  }();
  TrajectoryConfig cfg;
  cfg.num_trajectories = 50;
  cfg.master_seed = 8;
  auto r = run_trajectories(diag, 0b011, model, {{"n", number, false}}, cfg);
  for (const auto& row : r.per_trajectory) CHECK(std::abs(row[0] - 2.0) < 1e-12);
}

TEST_SUITE_END();
