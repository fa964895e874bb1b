#include "qsim/experiments.hpp"

#include <cmath>

#include "qsim/dense_matrix.hpp"
#include "qsim/errors.hpp"

namespace qsim {

namespace {

std::vector<NamedObservable> sweep_observables(const PauliSum& h, const PauliSum& n) {
  return {{"energy", h, true}, {"particle_number", n, true}};
}

struct SweepPristine {
  double energy, energy_var, particle;
};

SweepPristine pristine_values(const Circuit& circuit, uint64_t reference,
                              const PauliSum& h, const PauliSum& n) {
  StateVector psi = StateVector::basis_state(circuit.num_qubits(), reference);
  psi.run(circuit);
  return {energy_estimate(psi, h), pristine_variance(psi, h), expectation(psi, n)};
}

}  // namespace

std::vector<SweepRow> noise_sweep(const Circuit& circuit, uint64_t reference,
                                  const PauliSum& hamiltonian,
                                  const PauliSum& particle_number,
                                  const std::vector<NoiseScenario>& scenarios,
                                  NoiseSampling sampling, const TrajectoryConfig& cfg) {
  const SweepPristine base =
      pristine_values(circuit, reference, hamiltonian, particle_number);
  const double particle_var = 0.0;  // particle reports carry trajectory stddev instead

  std::vector<SweepRow> rows;
  for (const auto& sc : scenarios) {
    NoiseModel model = NoiseModel::from_scenario(sc, sampling);
    auto result = run_trajectories(circuit, reference, model,
                                   sweep_observables(hamiltonian, particle_number), cfg);
    SweepRow row;
    row.scenario = sc;
    row.energy = make_report("energy", base.energy, base.energy_var, result.stats[0],
                             result.term_means.empty()
                                 ? std::span<const double>{}
                                 : std::span<const double>(result.term_means[0]),
                             hamiltonian, result.num_trajectories, result.gate_count);
    row.particle = make_report("particle_number", base.particle, particle_var,
                               result.stats[1],
                               result.term_means.empty()
                                   ? std::span<const double>{}
                                   : std::span<const double>(result.term_means[1]),
                               particle_number, result.num_trajectories,
                               result.gate_count);
    row.mean_error_times_m =
        std::isinf(sc.M) ? 0.0 : row.energy.mean_error * sc.M;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

double total_error(const ClusterAmplitudes& amps, Mapping mapping, const PauliSum& h,
                   double exact_energy, uint32_t eta, NoiseScenario::Kind kind,
                   double log10_m, NoiseSampling sampling, const TrajectoryConfig& cfg) {
  UccCircuit ucc = build_ucc_circuit(amps, mapping, eta);
  NoiseModel model =
      NoiseModel::from_scenario({kind, std::pow(10.0, log10_m)}, sampling);
  auto result =
      run_trajectories(ucc.circuit, ucc.reference, model, {{"energy", h, false}}, cfg);
  return std::abs(result.stats[0].mean - exact_energy);
}

}  // namespace

MTrotResult find_m_trot(const ClusterAmplitudes& amps, Mapping mapping,
                        const PauliSum& hamiltonian, NoiseScenario::Kind kind,
                        double log10_lo, double log10_hi, NoiseSampling sampling,
                        const TrajectoryConfig& cfg) {
  if (!(log10_lo < log10_hi))
    throw std::invalid_argument("search bracket must satisfy lo < hi");
  check_dense_size(amps.n_modes);

  // <H>_exact from the dense exponential of the full (untrotterized) generator.
  FermionSum t = build_cluster_operator(amps);
  PauliSum image = fermion_to_pauli(t, mapping, amps.n_modes);
  CMatrix u = dense_exponential(dense_matrix(image));
  CVector ref = to_dense(StateVector::basis_state(
      amps.n_modes, hartree_fock_reference(amps.n_electrons, amps.n_modes, mapping)));
  CVector exact_state = u * ref;
  const double exact_energy =
      (exact_state.adjoint() * dense_matrix(hamiltonian) * exact_state)(0, 0).real();

  MTrotResult result;
  auto gap = [&](double log10_m) {
    const double e1 = total_error(amps, mapping, hamiltonian, exact_energy, 1, kind,
                                  log10_m, sampling, cfg);
    const double e2 = total_error(amps, mapping, hamiltonian, exact_energy, 2, kind,
                                  log10_m, sampling, cfg);
    result.samples.push_back({log10_m, e1, e2});
    return e1 - e2;
  };

  double lo = log10_lo, hi = log10_hi;
  double g_lo = gap(lo), g_hi = gap(hi);
  // In the noise-dominated regime the longer eta=2 circuit errs more
  // (gap < 0); in the Trotter regime eta=1 errs more (gap > 0).
  if (g_lo == 0.0) {
    result.found = true;
    result.log10_m = lo;
    return result;
  }
  if (g_hi == 0.0) {
    result.found = true;
    result.log10_m = hi;
    return result;
  }
  if ((g_lo < 0) == (g_hi < 0)) {
    result.found = false;
    return result;
  }
  while (hi - lo > 0.05) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = gap(mid);
    if (g_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((g_mid < 0) == (g_lo < 0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  result.found = true;
  result.log10_m = 0.5 * (lo + hi);
  return result;
}

Circuit build_gate_error_circuit(const GateErrorSpec& spec, uint64_t* errored_gates) {
  if (spec.n % 4 != 0 || spec.n == 0)
    throw std::invalid_argument("gate-error experiment needs n divisible by 4");
  const uint32_t fill = spec.n / 4;
  ClusterAmplitudes amps;
  amps.n_modes = spec.n;
  amps.n_electrons = fill;
  // First excitation from qubit 0 to n/4, second from n/4-1 to n-1; the
  // Z-rotation magnitude equals the excitation amplitude.
  amps.singles.push_back({0, fill, spec.theta1});
  amps.singles.push_back({fill - 1, spec.n - 1, spec.theta2});
  UccCircuit ideal = build_ucc_circuit(amps, Mapping::JordanWigner, 1, 0.0);

  // Locate the ladder of CNOTs immediately preceding the fourth Z rotation.
  size_t fourth_rz = SIZE_MAX;
  uint32_t rz_seen = 0;
  const auto& ops = ideal.circuit.ops();
  for (size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].kind == GateKind::RZ && ++rz_seen == 4) {
      fourth_rz = i;
      break;
    }
  }
  size_t ladder_begin = fourth_rz;
  if (fourth_rz != SIZE_MAX)
    while (ladder_begin > 0 && ops[ladder_begin - 1].kind == GateKind::CNOT)
      --ladder_begin;

  uint64_t errored = 0;
  Circuit out(spec.n);
  const Gate1Q errored_h =
      Gate1Q::axis_rotation(1, 0, 1, spec.h_overrotation) * Gate1Q::h();
  for (size_t i = 0; i < ops.size(); ++i) {
    const GateOp& op = ops[i];
    switch (op.kind) {
      case GateKind::H:
        if (spec.error_h && spec.h_overrotation != 0.0) {
          out.add_custom(op.target, errored_h);
          ++errored;
        } else {
          out.add_h(op.target);
        }
        break;
      case GateKind::YBasis:
      case GateKind::YBasisDag: {
        const double base = op.kind == GateKind::YBasis ? M_PI / 2 : -M_PI / 2;
        if (spec.error_yb && spec.yb_overrotation != 0.0) {
          const double extra = base >= 0 ? spec.yb_overrotation : -spec.yb_overrotation;
          out.add_rx(op.target, base + extra);
          ++errored;
        } else {
          op.kind == GateKind::YBasis ? out.add_yb(op.target) : out.add_ybdg(op.target);
        }
        break;
      }
      case GateKind::CNOT: {
        const bool in_scope =
            spec.cnot_scope == GateErrorSpec::CnotScope::AllGates ||
            (fourth_rz != SIZE_MAX && i >= ladder_begin && i < fourth_rz);
        if (spec.error_cnot && in_scope && spec.cnot_angle != 0.0) {
          out.add_crx(op.control, op.target, spec.cnot_angle);
          ++errored;
        } else {
          out.add_cnot(op.control, op.target);
        }
        break;
      }
      default:
        out.mutable_ops().push_back(op);
        out.mutable_ops().back().time_step = out.size() - 1;
        break;
    }
  }
  if (errored_gates) *errored_gates = errored;
  return out;
}

GateErrorResult gate_error_experiment(const GateErrorSpec& spec) {
  GateErrorResult result;
  Circuit circuit = build_gate_error_circuit(spec, &result.errored_gates);
  result.gate_count = circuit.size();
  const uint32_t fill = spec.n / 4;
  const uint64_t reference = (uint64_t{1} << fill) - 1;
  StateVector psi = StateVector::basis_state(spec.n, reference);
  psi.run(circuit);
  PauliSum number = particle_number_observable(spec.n, Mapping::JordanWigner);
  double value = expectation(psi, number);
  if (circuit.contains_non_unitary()) value /= psi.norm_sq();
  result.particle_number = value;
  result.particle_error = std::abs(value - static_cast<double>(fill));
  return result;
}

double fit_decay_factor(const std::vector<double>& series, double sign) {
  // Weighted least squares of ln(sign*y_t) = t ln(factor), weights y_t^2.
  double num = 0.0, den = 0.0;
  for (size_t t = 0; t < series.size(); ++t) {
    const double y = sign * series[t];
    if (y <= 1e-6) continue;
    const double w = y * y;
    const double step = static_cast<double>(t + 1);  // recorded after step t+1...
    num += w * step * std::log(y);
    den += w * step * step;
  }
  if (den == 0.0) throw std::runtime_error("decay fit has no usable points");
  return std::exp(num / den);
}

CalibrationResult calibrate_noise(const NoiseModel& model, uint32_t steps,
                                  const TrajectoryConfig& cfg) {
  if (steps < 2) throw std::invalid_argument("calibration needs at least two steps");
  Circuit idle(1);
  for (uint32_t t = 0; t < steps; ++t) idle.add_custom(0, Gate1Q::identity());

  TrajectoryConfig series_cfg = cfg;
  series_cfg.record_time_series = true;

  CalibrationResult result;
  {
    PauliSum z(1);
    z.add(1.0, PauliString::single_letter(1, 0, Pauli::Z));
    auto r = run_trajectories(idle, uint64_t{1}, model, {{"z", z, false}}, series_cfg);
    for (const auto& step : r.step_means) result.z_means.push_back(step[0]);
    result.fitted_m1 = -1.0 / std::log(fit_decay_factor(result.z_means, -1.0));
  }
  {
    PauliSum x(1);
    x.add(1.0, PauliString::single_letter(1, 0, Pauli::X));
    StateVector plus(1);
    plus.apply(Gate1Q::h(), 0);
    auto r = run_trajectories(idle, plus, model, {{"x", x, false}}, series_cfg);
    for (const auto& step : r.step_means) result.x_means.push_back(step[0]);
    result.fitted_m2 = -1.0 / std::log(fit_decay_factor(result.x_means, 1.0));
  }
  return result;
}

}  // namespace qsim
