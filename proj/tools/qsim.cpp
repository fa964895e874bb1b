#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "qsim/distributed.hpp"
#include "qsim/errors.hpp"
#include "qsim/experiments.hpp"
#include "qsim/io.hpp"
#include "qsim/parallel.hpp"

using nlohmann::json;
using namespace qsim;

namespace {

json report_json(const EstimatorReport& r) {
  return json{{"observable", r.observable},
              {"pristine_value", r.pristine_value},
              {"noisy_mean", r.noisy_mean},
              {"mean_error", r.mean_error},
              {"sigma_p", r.sigma_p},
              {"sigma_noisy", r.sigma_noisy},
              {"width_energy_estimator", r.error_width},
              {"stddev_particle_error", r.trajectory_stddev},
              {"per_gate_error", r.per_gate_error},
              {"standard_error", r.standard_error},
              {"trajectory_count", r.trajectory_count},
              {"gate_count", r.gate_count}};
}

json input_hashes(const std::vector<std::pair<std::string, std::string>>& files) {
  json out = json::object();
  for (const auto& [path, content] : files) out[path] = git_blob_sha1(content);
  return out;
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string trajectory_csv(const TrajectoryResult& result) {
  std::string csv = "traj_id";
  for (const auto& name : result.names) csv += "," + name;
  csv += "\n";
  for (uint64_t j = 0; j < result.per_trajectory.size(); ++j) {
    csv += std::to_string(j);
    for (double v : result.per_trajectory[j]) csv += "," + format_double(v);
    csv += "\n";
  }
  return csv;
}

Mapping parse_mapping(const std::string& name) {
  if (name == "jw") return Mapping::JordanWigner;
  if (name == "bk") return Mapping::BravyiKitaev;
  throw CLI::ValidationError("--mapping", "must be jw or bk");
}

NoiseScenario::Kind parse_kind(const std::string& name) {
  if (name == "t1tphi") return NoiseScenario::Kind::RelaxationDephasing;
  if (name == "relax") return NoiseScenario::Kind::PureRelaxation;
  if (name == "dephase") return NoiseScenario::Kind::PureDephasing;
  throw CLI::ValidationError("--scenario", "must be t1tphi, relax or dephase");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct RunInputs {
  Circuit circuit{1};
  uint64_t reference = 0;
  std::optional<PauliSum> hamiltonian;
  Mapping mapping = Mapping::JordanWigner;
  std::vector<std::pair<std::string, std::string>> files;
};

RunInputs load_run_inputs(const std::string& circuit_path, const std::string& ham_path,
                          const std::string& mapping_name) {
  RunInputs in;
  std::string circuit_text = read_text_file(circuit_path);
  in.files.emplace_back(circuit_path, circuit_text);
  auto parsed = parse_circuit_file(circuit_text);
  in.circuit = std::move(parsed.circuit);
  in.reference = parsed.reference;
  in.mapping = parse_mapping(mapping_name);
  if (!ham_path.empty()) {
    std::string ham_text = read_text_file(ham_path);
    in.files.emplace_back(ham_path, ham_text);
    auto ham = parse_pauli_file(ham_text);
    if (ham.qubits != in.circuit.num_qubits())
      throw std::runtime_error("hamiltonian width does not match the circuit");
    in.hamiltonian = ham.sum.simplified();
  }
  return in;
}

json run_summary(const RunInputs& in, const NoiseConfig& noise,
                 const TrajectoryResult& result) {
  json observables = json::array();
  StateVector pristine = StateVector::basis_state(in.circuit.num_qubits(), in.reference);
  pristine.run(in.circuit);
  size_t k = 0;
  if (in.hamiltonian) {
    auto stats = result.stats[k];
    EstimatorReport r = make_report(
        "energy", energy_estimate(pristine, *in.hamiltonian),
        pristine_variance(pristine, *in.hamiltonian), stats,
        result.term_means.empty() ? std::span<const double>{}
                                  : std::span<const double>(result.term_means[k]),
        *in.hamiltonian, result.num_trajectories, result.gate_count);
    observables.push_back(report_json(r));
    ++k;
  }
  PauliSum number = particle_number_observable(in.circuit.num_qubits(), in.mapping);
  EstimatorReport r =
      make_report("particle_number", expectation(pristine, number), 0.0,
                  result.stats[k], {}, number, result.num_trajectories,
                  result.gate_count);
  observables.push_back(report_json(r));

  json summary;
  summary["gate_count"] = result.gate_count;
  summary["time_steps"] = result.step_count;
  summary["trajectories"] = result.num_trajectories;
  summary["seed"] = noise.trajectories.master_seed;
  summary["noise"] = {{"M1", std::isinf(noise.model.m1()) ? json("inf") : json(noise.model.m1())},
                      {"M2", std::isinf(noise.model.m2()) ? json("inf") : json(noise.model.m2())},
                      {"enabled", noise.model.enabled()}};
  summary["inputs"] = input_hashes(in.files);
  summary["observables"] = observables;
  return summary;
}

std::vector<NamedObservable> run_observables(const RunInputs& in) {
  std::vector<NamedObservable> obs;
  if (in.hamiltonian) obs.push_back({"energy", *in.hamiltonian, true});
  obs.push_back({"particle_number",
                 particle_number_observable(in.circuit.num_qubits(), in.mapping),
                 false});
  return obs;
}

int cmd_transform(const std::string& in_path, const std::string& out_path,
                  const std::string& mapping_name) {
  auto parsed = parse_fermion_file(read_text_file(in_path));
  PauliSum image =
      fermion_to_pauli(parsed.sum, parse_mapping(mapping_name), parsed.modes);
  write_text_file(out_path, write_pauli_file(image));
  std::printf("wrote %s (%zu terms on %u qubits)\n", out_path.c_str(), image.size(),
              image.num_qubits());
  return 0;
}

int cmd_ucc(const std::string& amps_path, const std::string& out_path,
            const std::string& mapping_name, uint32_t eta, double cutoff) {
  auto amps = parse_amplitude_file(read_text_file(amps_path));
  for (const auto& warning : amps.validate())
    std::fprintf(stderr, "warning: %s\n", warning.c_str());
  UccCircuit ucc = build_ucc_circuit(amps, parse_mapping(mapping_name), eta, cutoff);
  write_text_file(out_path, write_circuit_file(ucc.circuit, ucc.reference));
  std::printf("wrote %s (%zu gates, reference 0x%llx)\n", out_path.c_str(),
              ucc.circuit.size(), static_cast<unsigned long long>(ucc.reference));
  return 0;
}

int cmd_run(const std::string& circuit_path, const std::string& ham_path,
            const std::string& mapping_name, const std::string& noise_text,
            uint64_t traj_override, uint64_t seed_override, bool has_traj,
            bool has_seed, const std::string& csv_path, const std::string& json_path) {
  RunInputs in = load_run_inputs(circuit_path, ham_path, mapping_name);
  NoiseConfig noise = parse_noise_config(noise_text);
  if (has_traj) noise.trajectories.num_trajectories = traj_override;
  if (has_seed) noise.trajectories.master_seed = seed_override;

  TrajectoryResult result = run_trajectories(in.circuit, in.reference, noise.model,
                                             run_observables(in), noise.trajectories);
  json summary = run_summary(in, noise, result);
  if (!csv_path.empty()) write_text_file(csv_path, trajectory_csv(result));
  write_json(json_path, summary);
  std::printf("%s\n", summary.dump(2).c_str());
  return 0;
}

int cmd_sweep(const std::string& circuit_path, const std::string& ham_path,
              const std::string& mapping_name, const std::string& scenario_list,
              const std::string& m_list, uint64_t traj, uint64_t seed,
              const std::string& csv_path, const std::string& json_path) {
  RunInputs in = load_run_inputs(circuit_path, ham_path, mapping_name);
  if (!in.hamiltonian) throw std::runtime_error("sweep requires --ham");
  std::vector<NoiseScenario> scenarios;
  for (const auto& kind_name : split_list(scenario_list))
    for (const auto& m_text : split_list(m_list))
      scenarios.push_back({parse_kind(kind_name),
                           m_text == "inf" ? INFINITY : std::stod(m_text)});

  PauliSum number = particle_number_observable(in.circuit.num_qubits(), in.mapping);
  TrajectoryConfig cfg;
  cfg.num_trajectories = traj;
  cfg.master_seed = seed;
  auto rows = noise_sweep(in.circuit, in.reference, *in.hamiltonian, number, scenarios,
                          NoiseSampling::ThreeRotation, cfg);

  std::string csv =
      "scenario,M,energy_pristine,energy_noisy_mean,energy_mean_error,"
      "width_energy_estimator,energy_per_gate_error,energy_standard_error,"
      "mean_error_times_M,particle_pristine,particle_noisy_mean,"
      "particle_mean_error,stddev_particle_error,gate_count\n";
  json rows_json = json::array();
  for (const auto& row : rows) {
    csv += row.scenario.name() + "," + format_double(row.scenario.M) + "," +
           format_double(row.energy.pristine_value) + "," +
           format_double(row.energy.noisy_mean) + "," +
           format_double(row.energy.mean_error) + "," +
           format_double(row.energy.error_width) + "," +
           format_double(row.energy.per_gate_error) + "," +
           format_double(row.energy.standard_error) + "," +
           format_double(row.mean_error_times_m) + "," +
           format_double(row.particle.pristine_value) + "," +
           format_double(row.particle.noisy_mean) + "," +
           format_double(row.particle.mean_error) + "," +
           format_double(row.particle.trajectory_stddev) + "," +
           std::to_string(row.energy.gate_count) + "\n";
    rows_json.push_back({{"scenario", row.scenario.name()},
                         {"M", row.scenario.M},
                         {"energy", report_json(row.energy)},
                         {"particle", report_json(row.particle)},
                         {"mean_error_times_M", row.mean_error_times_m}});
  }
  if (!csv_path.empty()) write_text_file(csv_path, csv);
  json summary{{"rows", rows_json},
               {"seed", seed},
               {"trajectories", traj},
               {"inputs", input_hashes(in.files)}};
  write_json(json_path, summary);
  std::printf("%s", csv.c_str());
  return 0;
}

int cmd_calibrate(double m1, double m2, uint32_t steps, uint64_t traj, uint64_t seed,
                  const std::string& json_path) {
  NoiseModel model = NoiseModel::from_coherence(m1, m2);
  TrajectoryConfig cfg;
  cfg.num_trajectories = traj;
  cfg.master_seed = seed;
  CalibrationResult result = calibrate_noise(model, steps, cfg);
  json summary{{"M1", m1},
               {"M2", m2},
               {"steps", steps},
               {"trajectories", traj},
               {"seed", seed},
               {"fitted_M1", result.fitted_m1},
               {"fitted_M2", result.fitted_m2},
               {"relative_error_M1", std::abs(result.fitted_m1 - m1) / m1},
               {"relative_error_M2", std::abs(result.fitted_m2 - m2) / m2}};
  write_json(json_path, summary);
  std::printf("%s\n", summary.dump(2).c_str());
  return 0;
}

int cmd_mtrot(const std::string& amps_path, const std::string& ham_path,
              const std::string& mapping_name, const std::string& kind_name,
              double lo, double hi, uint64_t traj, uint64_t seed,
              const std::string& json_path) {
  auto amps = parse_amplitude_file(read_text_file(amps_path));
  auto ham_file = parse_fermion_file(read_text_file(ham_path));
  Mapping mapping = parse_mapping(mapping_name);
  PauliSum hamiltonian = fermion_to_pauli(ham_file.sum, mapping, ham_file.modes);
  TrajectoryConfig cfg;
  cfg.num_trajectories = traj;
  cfg.master_seed = seed;
  MTrotResult result = find_m_trot(amps, mapping, hamiltonian, parse_kind(kind_name),
                                   lo, hi, NoiseSampling::ThreeRotation, cfg);
  json samples = json::array();
  for (const auto& s : result.samples)
    samples.push_back({{"log10_M", s.log10_m},
                       {"total_error_eta1", s.total_error_eta1},
                       {"total_error_eta2", s.total_error_eta2}});
  json summary{{"found", result.found}, {"samples", samples}, {"seed", seed}};
  if (result.found) {
    summary["log10_M_trot"] = result.log10_m;
    summary["M_trot"] = std::pow(10.0, result.log10_m);
  }
  write_json(json_path, summary);
  std::printf("%s\n", summary.dump(2).c_str());
  if (!result.found) {
    std::fprintf(stderr, "no crossing inside the bracket [%g, %g] decades\n", lo, hi);
    return 1;
  }
  return 0;
}

int cmd_gate_error(const std::string& n_list, double theta1, double theta2,
                   double h_err, double yb_err, double cnot_angle, bool no_h,
                   bool no_yb, bool no_cnot, const std::string& scope,
                   const std::string& csv_path) {
  std::string csv = "n,theta1,theta2,particle_error,particle_number,gate_count,errored_gates\n";
  for (const auto& n_text : split_list(n_list)) {
    GateErrorSpec spec;
    spec.n = static_cast<uint32_t>(std::stoul(n_text));
    spec.theta1 = theta1;
    spec.theta2 = theta2;
    spec.h_overrotation = h_err;
    spec.yb_overrotation = yb_err;
    spec.cnot_angle = cnot_angle;
    spec.error_h = !no_h;
    spec.error_yb = !no_yb;
    spec.error_cnot = !no_cnot;
    spec.cnot_scope = scope == "ladder" ? GateErrorSpec::CnotScope::BeforeFourthRotation
                                        : GateErrorSpec::CnotScope::AllGates;
    GateErrorResult r = gate_error_experiment(spec);
    csv += std::to_string(spec.n) + "," + format_double(theta1) + "," +
           format_double(theta2) + "," + format_double(r.particle_error) + "," +
           format_double(r.particle_number) + "," + std::to_string(r.gate_count) + "," +
           std::to_string(r.errored_gates) + "\n";
  }
  if (!csv_path.empty()) write_text_file(csv_path, csv);
  std::printf("%s", csv.c_str());
  return 0;
}

int cmd_qft(uint32_t n, uint64_t input, uint32_t block_qubits, bool check) {
  Circuit circuit = qft_circuit(n);
  StateVector psi = StateVector::basis_state(n, input);
  Schedule schedule = fuse_cache_blocks(circuit, block_qubits);
  auto start = std::chrono::steady_clock::now();
  run(psi, schedule);
  auto stop = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(stop - start).count();
  std::printf("qft n=%u gates=%zu time=%.3fs (%.3g s/gate)\n", n, circuit.size(),
              seconds, seconds / static_cast<double>(circuit.size()));
  if (check) {
    // |x> -> amplitudes 2^{-n/2} e^{2 pi i x y / 2^n}
    const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
    double worst = 0.0;
    const uint64_t dim = psi.size();
    const uint64_t samples = std::min<uint64_t>(dim, 4096);
    for (uint64_t s = 0; s < samples; ++s) {
      const uint64_t y = (s * 2654435761ull) % dim;
      const double phase = 2.0 * M_PI *
                           static_cast<double>((__uint128_t(input) * y) % dim) /
                           static_cast<double>(dim);
      const cdouble want = amp * std::exp(cdouble(0, phase));
      worst = std::max(worst, std::abs(psi[y] - want));
    }
    std::printf("max sampled amplitude error vs analytic: %.3g\n", worst);
    if (worst > 1e-10) return 1;
  }
  return 0;
}

int cmd_dist_run(uint32_t ranks, const std::string& transport_name,
                 const std::string& circuit_path, const std::string& ham_path,
                 const std::string& mapping_name, const std::string& noise_text,
                 uint32_t rank_id, const std::string& peer_list, uint64_t chunk,
                 const std::string& json_path) {
  RunInputs in = load_run_inputs(circuit_path, ham_path, mapping_name);
  NoiseConfig noise = parse_noise_config(noise_text);
  auto observables = run_observables(in);

  auto run_rank = [&](dist::Transport& transport) -> json {
    dist::DistEngine engine(transport, in.circuit.num_qubits(), chunk);
    TrajectoryResult result = dist::dist_run_trajectories(
        engine, in.circuit, in.reference, noise.model, observables,
        noise.trajectories);
    json obs = json::object();
    for (size_t k = 0; k < result.names.size(); ++k)
      obs[result.names[k]] = {{"mean", result.stats[k].mean},
                              {"sample_stddev", result.stats[k].sample_stddev},
                              {"standard_error", result.stats[k].standard_error}};
    return json{{"ranks", transport.world_size()},
                {"rank", transport.rank()},
                {"gate_count", result.gate_count},
                {"trajectories", result.num_trajectories},
                {"seed", noise.trajectories.master_seed},
                {"amp_messages_sent", transport.stats().amp_messages_sent},
                {"amps_sent", transport.stats().amps_sent},
                {"observables", obs},
                {"inputs", input_hashes(in.files)}};
  };

  if (transport_name == "inproc") {
    dist::InProcessHub hub(ranks);
    std::vector<dist::InProcessTransport> transports;
    transports.reserve(ranks);
    for (uint32_t r = 0; r < ranks; ++r) transports.emplace_back(hub, r);
    json summary;
    std::vector<std::thread> workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (uint32_t r = 0; r < ranks; ++r) {
      workers.emplace_back([&, r] {
        try {
          json local = run_rank(transports[r]);
          if (r == 0) summary = std::move(local);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
    write_json(json_path, summary);
    std::printf("%s\n", summary.dump(2).c_str());
    return 0;
  }

  if (transport_name != "tcp")
    throw std::runtime_error("transport must be inproc or tcp");
  std::vector<dist::TcpEndpoint> peers;
  for (const auto& hp : split_list(peer_list)) {
    auto colon = hp.rfind(':');
    if (colon == std::string::npos)
      throw std::runtime_error("peer must be host:port, got " + hp);
    peers.push_back({hp.substr(0, colon),
                     static_cast<uint16_t>(std::stoul(hp.substr(colon + 1)))});
  }
  if (peers.size() != ranks)
    throw std::runtime_error("--peers must list exactly --ranks endpoints");
  dist::TcpTransport transport(rank_id, std::move(peers));
  json summary = run_rank(transport);
  if (rank_id == 0) {
    write_json(json_path, summary);
    std::printf("%s\n", summary.dump(2).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy quantum-circuit simulation toolkit"};
  app.require_subcommand(1);

  // transform
  std::string in_path, out_path, mapping_name = "jw";
  auto* transform = app.add_subcommand("transform", "fermion file -> pauli file");
  transform->add_option("--in", in_path)->required();
  transform->add_option("--out", out_path)->required();
  transform->add_option("--mapping", mapping_name);

  // ucc
  std::string amps_path;
  uint32_t eta = 1;
  double cutoff = 1e-5;
  auto* ucc = app.add_subcommand("ucc", "amplitude file -> state-prep circuit");
  ucc->add_option("--amps", amps_path)->required();
  ucc->add_option("--out", out_path)->required();
  ucc->add_option("--mapping", mapping_name);
  ucc->add_option("--eta", eta);
  ucc->add_option("--cutoff", cutoff);

  // run
  std::string circuit_path, ham_path, noise_text, csv_path, json_path;
  uint64_t traj = 10000, seed = 0;
  auto* run_cmd = app.add_subcommand("run", "run a circuit, optionally under noise");
  run_cmd->add_option("--circuit", circuit_path)->required();
  run_cmd->add_option("--ham", ham_path);
  run_cmd->add_option("--mapping", mapping_name);
  run_cmd->add_option("--noise", noise_text);
  auto* traj_opt = run_cmd->add_option("--traj", traj);
  auto* seed_opt = run_cmd->add_option("--seed", seed);
  run_cmd->add_option("--csv", csv_path);
  run_cmd->add_option("--json", json_path);

  // sweep
  std::string scenario_list = "t1tphi,relax,dephase", m_list = "1e6";
  auto* sweep = app.add_subcommand("sweep", "noise sweep over scenarios and M values");
  sweep->add_option("--circuit", circuit_path)->required();
  sweep->add_option("--ham", ham_path)->required();
  sweep->add_option("--mapping", mapping_name);
  sweep->add_option("--scenarios", scenario_list);
  sweep->add_option("--M", m_list);
  sweep->add_option("--traj", traj);
  sweep->add_option("--seed", seed);
  sweep->add_option("--csv", csv_path);
  sweep->add_option("--json", json_path);

  // calibrate
  double m1 = 50, m2 = 50;
  uint32_t steps = 200;
  auto* calibrate = app.add_subcommand("calibrate", "fit M1/M2 from idle decay");
  calibrate->add_option("--M1", m1);
  calibrate->add_option("--M2", m2);
  calibrate->add_option("--steps", steps);
  calibrate->add_option("--traj", traj);
  calibrate->add_option("--seed", seed);
  calibrate->add_option("--json", json_path);

  // mtrot
  std::string kind_name = "relax";
  double lo = 2.0, hi = 9.0;
  auto* mtrot = app.add_subcommand("mtrot", "coherence parameter where eta=1 and eta=2 errors cross");
  mtrot->add_option("--amps", amps_path)->required();
  mtrot->add_option("--ham", ham_path)->required();
  mtrot->add_option("--mapping", mapping_name);
  mtrot->add_option("--scenario", kind_name);
  mtrot->add_option("--lo", lo);
  mtrot->add_option("--hi", hi);
  mtrot->add_option("--traj", traj);
  mtrot->add_option("--seed", seed);
  mtrot->add_option("--json", json_path);

  // gate-error
  std::string n_list = "12", scope = "all";
  double theta1 = 0.1, theta2 = 0.1, h_err = 1e-4, yb_err = 1e-4,
         cnot_angle = M_PI + 1e-3;
  bool no_h = false, no_yb = false, no_cnot = false;
  auto* gate_error = app.add_subcommand("gate-error", "systematic gate-error experiment");
  gate_error->add_option("--n", n_list);
  gate_error->add_option("--theta1", theta1);
  gate_error->add_option("--theta2", theta2);
  gate_error->add_option("--h-err", h_err);
  gate_error->add_option("--yb-err", yb_err);
  gate_error->add_option("--cnot-angle", cnot_angle);
  gate_error->add_flag("--no-h-err", no_h);
  gate_error->add_flag("--no-yb-err", no_yb);
  gate_error->add_flag("--no-cnot-err", no_cnot);
  gate_error->add_option("--cnot-scope", scope)->check(CLI::IsMember({"all", "ladder"}));
  gate_error->add_option("--csv", csv_path);

  // qft
  uint32_t qft_n = 10, block_qubits = kDefaultBlockQubits;
  uint64_t qft_input = 0;
  bool qft_check = false;
  auto* qft = app.add_subcommand("qft", "run the QFT kernel");
  qft->add_option("--n", qft_n);
  qft->add_option("--input", qft_input);
  qft->add_option("--block-qubits", block_qubits);
  qft->add_flag("--check", qft_check);

  // dist-run
  uint32_t ranks = 2, rank_id = 0;
  std::string transport_name = "inproc", peer_list;
  uint64_t chunk = dist::kDefaultChunkAmplitudes;
  auto* dist_run = app.add_subcommand("dist-run", "distributed circuit execution");
  dist_run->add_option("--ranks", ranks);
  dist_run->add_option("--transport", transport_name)
      ->check(CLI::IsMember({"inproc", "tcp"}));
  dist_run->add_option("--circuit", circuit_path)->required();
  dist_run->add_option("--ham", ham_path);
  dist_run->add_option("--mapping", mapping_name);
  dist_run->add_option("--noise", noise_text);
  dist_run->add_option("--rank-id", rank_id);
  dist_run->add_option("--peers", peer_list);
  dist_run->add_option("--chunk", chunk);
  dist_run->add_option("--json", json_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*transform) return cmd_transform(in_path, out_path, mapping_name);
    if (*ucc) return cmd_ucc(amps_path, out_path, mapping_name, eta, cutoff);
    if (*run_cmd)
      return cmd_run(circuit_path, ham_path, mapping_name, noise_text, traj, seed,
                     traj_opt->count() > 0, seed_opt->count() > 0, csv_path, json_path);
    if (*sweep)
      return cmd_sweep(circuit_path, ham_path, mapping_name, scenario_list, m_list,
                       traj, seed, csv_path, json_path);
    if (*calibrate) return cmd_calibrate(m1, m2, steps, traj, seed, json_path);
    if (*mtrot)
      return cmd_mtrot(amps_path, ham_path, mapping_name, kind_name, lo, hi, traj,
                       seed, json_path);
    if (*gate_error)
      return cmd_gate_error(n_list, theta1, theta2, h_err, yb_err, cnot_angle, no_h,
                            no_yb, no_cnot, scope, csv_path);
    if (*qft) return cmd_qft(qft_n, qft_input, block_qubits, qft_check);
    if (*dist_run)
      return cmd_dist_run(ranks, transport_name, circuit_path, ham_path, mapping_name,
                          noise_text, rank_id, peer_list, chunk, json_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
