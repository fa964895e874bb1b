#include <doctest.h>

#include <thread>

#include "qsim/distributed.hpp"
#include "qsim/estimators.hpp"
#include "qsim/io.hpp"
#include "qsim/ucc.hpp"
#include "support/test_helpers.hpp"

using namespace qsim;
using dist::DistEngine;
using dist::InProcessHub;
using dist::InProcessTransport;

namespace {

/// Runs `body(engine)` on every rank of an in-process group and returns the
/// rank-0 gathered state (plus per-rank transport stats).
struct GroupResult {
  StateVector state{1};
  std::vector<dist::TransportStats> stats;
};

template <typename Body>
GroupResult run_group(uint32_t ranks, uint32_t n, Body body,
                      uint64_t chunk = dist::kDefaultChunkAmplitudes) {
  InProcessHub hub(ranks);
  std::vector<InProcessTransport> transports;
  transports.reserve(ranks);
  for (uint32_t r = 0; r < ranks; ++r) transports.emplace_back(hub, r);

  GroupResult result;
  result.stats.resize(ranks);
  std::optional<StateVector> gathered;
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex mutex;
  for (uint32_t r = 0; r < ranks; ++r) {
    workers.emplace_back([&, r] {
      try {
        DistEngine engine(transports[r], n, chunk);
        body(engine, r);
        auto full = engine.gather();
        std::lock_guard<std::mutex> lock(mutex);
        result.stats[r] = transports[r].stats();
        if (full) gathered = std::move(full);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
  REQUIRE(gathered.has_value());
  result.state = std::move(*gathered);
  return result;
}

}  // namespace

TEST_SUITE_BEGIN("distributed");

TEST_CASE("partner rank") {
  CHECK(dist::partner_rank(0, 5, 5) == 1);
  CHECK(dist::partner_rank(5, 6, 5) == 7);
  for (uint32_t r = 0; r < 8; ++r)
    for (uint32_t k = 4; k < 7; ++k)
      CHECK(dist::partner_rank(dist::partner_rank(r, k, 4), k, 4) == r);
  CHECK_THROWS_AS(dist::partner_rank(0, 3, 5), std::invalid_argument);
}

TEST_CASE("high-qubit H across two ranks") {
  auto result = run_group(2, 3, [](DistEngine& engine, uint32_t) {
    engine.set_basis_state(0);
    engine.apply(Gate1Q::h(), 2);
  });
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(result.state[0] - inv_sqrt2) < 1e-15);
  CHECK(std::abs(result.state[4] - inv_sqrt2) < 1e-15);
  for (uint64_t i : {1, 2, 3, 5, 6, 7}) CHECK(std::abs(result.state[i]) == 0.0);
}

TEST_CASE("local gates move no amplitudes") {
  auto result = run_group(4, 8, [](DistEngine& engine, uint32_t) {
    engine.set_basis_state(3);
    for (uint32_t q = 0; q < engine.local_qubits(); ++q)
      engine.apply(Gate1Q::h(), q);
    engine.apply_controlled(Gate1Q::x(), 0, 1);
  });
  for (const auto& s : result.stats) {
    CHECK(s.amp_messages_sent == 0);
    CHECK(s.amps_sent == 0);
  }
}

TEST_CASE("message accounting for one high gate") {
  const uint32_t n = 10, ranks = 4;  // m = 8
  const uint64_t chunk = 32;
  auto result = run_group(
      ranks, n,
      [](DistEngine& engine, uint32_t) {
        engine.set_basis_state(0);
        engine.apply(Gate1Q::h(), 9);
      },
      chunk);
  const uint64_t m = n - 2;
  const uint64_t half = uint64_t{1} << (m - 1);
  for (const auto& s : result.stats) {
    CHECK(s.amps_sent == (uint64_t{1} << m));  // 2^{m-1} out + 2^{m-1} back
    CHECK(s.amp_messages_sent == 2 * ((half + chunk - 1) / chunk));
  }
}

TEST_CASE("random circuits match single-node execution") {
  auto& rng = test::global_rng();
  for (uint32_t p : {1u, 2u, 3u}) {
    const uint32_t n = 8 + p;
    Circuit circuit = test::random_circuit(n, 60, rng);
    StateVector expected(n);
    expected.run(circuit);
    auto result = run_group(uint32_t{1} << p, n, [&](DistEngine& engine, uint32_t) {
      engine.set_basis_state(0);
      engine.run(circuit);
    });
    CHECK(test::max_amp_diff(result.state, expected) < 1e-12);
  }
}

TEST_CASE("controlled-gate cases") {
  SUBCASE("clear high control: untouched state, idle ranks silent") {
    const uint32_t n = 6;
    auto result = run_group(2, n, [&](DistEngine& engine, uint32_t) {
      engine.set_basis_state(0);
      engine.apply_controlled(Gate1Q::x(), n - 1, 0);
    });
    CHECK(std::abs(result.state[0] - cdouble(1, 0)) < 1e-15);
    for (const auto& s : result.stats) CHECK(s.amp_messages_sent == 0);
  }
  SUBCASE("high control over superposed control bit") {
    // (|0000> + |1000>)/sqrt2 -> CNOT(c=3,t=1) -> (|0000> + |1010>)/sqrt2
    auto result = run_group(2, 4, [](DistEngine& engine, uint32_t) {
      engine.set_basis_state(0);
      engine.apply(Gate1Q::h(), 3);
      engine.apply_controlled(Gate1Q::x(), 3, 1);
    });
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(result.state[0b0000] - inv_sqrt2) < 1e-14);
    CHECK(std::abs(result.state[0b1010] - inv_sqrt2) < 1e-14);
  }
  SUBCASE("randomized controlled gates vs single node") {
    auto& rng = test::global_rng();
    for (uint32_t ranks : {2u, 4u, 8u}) {
      const uint32_t n = 9;
      Circuit circuit(n);
      for (int i = 0; i < 40; ++i) {
        uint32_t c = static_cast<uint32_t>(rng() % n);
        uint32_t t = static_cast<uint32_t>(rng() % (n - 1));
        if (t >= c) ++t;
        circuit.add_controlled(GateKind::Custom, test::random_unitary(rng), c, t);
      }
      StateVector expected = StateVector::basis_state(n, 5);
      expected.run(circuit);
      auto result = run_group(ranks, n, [&](DistEngine& engine, uint32_t) {
        engine.set_basis_state(5);
        engine.run(circuit);
      });
      CHECK(test::max_amp_diff(result.state, expected) < 1e-12);
    }
  }
}

TEST_CASE("distributed expectations") {
  SUBCASE("high-qubit Z needs no amplitude traffic") {
    const uint32_t n = 8;
    InProcessHub hub(4);
    std::vector<InProcessTransport> transports;
    for (uint32_t r = 0; r < 4; ++r) transports.emplace_back(hub, r);
    std::vector<double> values(4, 0.0);
    std::vector<std::thread> workers;
    for (uint32_t r = 0; r < 4; ++r) {
      workers.emplace_back([&, r] {
        DistEngine engine(transports[r], n);
        engine.set_basis_state(0);
        PauliSum z(n);
        z.add(1.0, PauliString::single_letter(n, n - 1, Pauli::Z));
        values[r] = engine.expectation(z);
      });
    }
    for (auto& w : workers) w.join();
    for (uint32_t r = 0; r < 4; ++r) {
      CHECK(values[r] == doctest::Approx(1.0));
      CHECK(transports[r].stats().amp_messages_sent == 0);
    }
  }
  SUBCASE("random observables match the single-node path") {
    auto& rng = test::global_rng();
    const uint32_t n = 12;
    Circuit prep = test::random_circuit(n, 40, rng);
    StateVector expected(n);
    expected.run(prep);
    PauliSum obs(n);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 6; ++i) obs.add(nd(rng), test::random_string(n, rng));
    obs = obs.simplified();
    PauliSum identity = PauliSum::identity(n);

    std::vector<double> got(4, 0.0), got_id(4, 0.0);
    InProcessHub hub(4);
    std::vector<InProcessTransport> transports;
    for (uint32_t r = 0; r < 4; ++r) transports.emplace_back(hub, r);
    std::vector<std::thread> workers;
    for (uint32_t r = 0; r < 4; ++r) {
      workers.emplace_back([&, r] {
        DistEngine engine(transports[r], n);
        engine.set_basis_state(0);
        engine.run(prep);
        got[r] = engine.expectation(obs);
        got_id[r] = engine.expectation(identity);
      });
    }
    for (auto& w : workers) w.join();
    const double reference = expectation(expected, obs);
    for (uint32_t r = 0; r < 4; ++r) {
      CHECK(std::abs(got[r] - reference) < 1e-10);
      CHECK(got_id[r] == 1.0);
    }
  }
}

TEST_CASE("scatter/gather round trip") {
  auto& rng = test::global_rng();
  const uint32_t n = 8;
  StateVector full = test::random_state(n, rng);
  auto result = run_group(4, n, [&](DistEngine& engine, uint32_t r) {
    const uint64_t slice = full.size() / 4;
    engine.set_local_slice(full.amplitudes().subspan(r * slice, slice));
  });
  CHECK(test::max_amp_diff(result.state, full) == 0.0);
}

TEST_CASE("single rank degenerates to local execution") {
  auto& rng = test::global_rng();
  Circuit circuit = test::random_circuit(5, 30, rng);
  StateVector expected(5);
  expected.run(circuit);
  auto result = run_group(1, 5, [&](DistEngine& engine, uint32_t) {
    engine.set_basis_state(0);
    engine.run(circuit);
  });
  CHECK(test::max_amp_diff(result.state, expected) == 0.0);
  CHECK(result.stats[0].amp_messages_sent == 0);
}

TEST_CASE("distributed noisy trajectories reproduce the single-node runner") {
  ClusterAmplitudes amps{4, 2, {{0, 2, 0.06}, {1, 3, 0.06}}, {}};
  UccCircuit ucc = build_ucc_circuit(amps, Mapping::JordanWigner, 1);
  PauliSum number = particle_number_observable(4, Mapping::JordanWigner);
  NoiseModel model = NoiseModel::from_coherence(300, 300);
  TrajectoryConfig cfg;
  cfg.num_trajectories = 40;
  cfg.master_seed = 77;

  auto single = run_trajectories(ucc.circuit, ucc.reference, model,
                                 {{"n", number, false}}, cfg);

  InProcessHub hub(2);
  std::vector<InProcessTransport> transports;
  for (uint32_t r = 0; r < 2; ++r) transports.emplace_back(hub, r);
  std::vector<TrajectoryResult> results(2);
  std::vector<std::thread> workers;
  for (uint32_t r = 0; r < 2; ++r) {
    workers.emplace_back([&, r] {
      DistEngine engine(transports[r], 4);
      results[r] = dist::dist_run_trajectories(engine, ucc.circuit, ucc.reference,
                                               model, {{"n", number, false}}, cfg);
    });
  }
  for (auto& w : workers) w.join();

  // Same RNG streams, same gates; Z-only observable reduces identically.
  for (uint64_t j = 0; j < cfg.num_trajectories; ++j) {
    CHECK(results[0].per_trajectory[j][0] == results[1].per_trajectory[j][0]);
    CHECK(results[0].per_trajectory[j][0] ==
          doctest::Approx(single.per_trajectory[j][0]).epsilon(1e-12));
  }
  CHECK(results[0].per_trajectory[5][0] == single.per_trajectory[5][0]);
}

TEST_CASE("tcp transport matches in-process byte for byte") {
  const uint32_t n = 6;
  auto& rng = test::global_rng();
  Circuit circuit = test::random_circuit(n, 25, rng);
  PauliSum obs(n);
  obs.add(0.5, PauliString::single_letter(n, n - 1, Pauli::Z));
  obs.add(0.25, PauliString::single_letter(n, 0, Pauli::X));
  obs = obs.simplified();

  std::vector<double> inproc_value(2, 0.0);
  {
    InProcessHub hub(2);
    std::vector<InProcessTransport> transports;
    for (uint32_t r = 0; r < 2; ++r) transports.emplace_back(hub, r);
    std::vector<std::thread> workers;
    for (uint32_t r = 0; r < 2; ++r) {
      workers.emplace_back([&, r] {
        DistEngine engine(transports[r], n);
        engine.set_basis_state(1);
        engine.run(circuit);
        inproc_value[r] = engine.expectation(obs);
      });
    }
    for (auto& w : workers) w.join();
  }

  std::vector<double> tcp_value(2, 0.0);
  {
    std::vector<dist::TcpEndpoint> peers{{"127.0.0.1", 39181}, {"127.0.0.1", 39182}};
    std::vector<std::thread> workers;
    std::exception_ptr failure;
    std::mutex mutex;
    for (uint32_t r = 0; r < 2; ++r) {
      workers.emplace_back([&, r] {
        try {
          dist::TcpTransport transport(r, peers);
          DistEngine engine(transport, n, 16);
          engine.set_basis_state(1);
          engine.run(circuit);
          tcp_value[r] = engine.expectation(obs);
          transport.barrier();
        } catch (...) {
          std::lock_guard<std::mutex> lock(mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
  }
  CHECK(inproc_value[0] == inproc_value[1]);
  CHECK(tcp_value[0] == inproc_value[0]);
  CHECK(tcp_value[1] == inproc_value[0]);
}

TEST_SUITE_END();
