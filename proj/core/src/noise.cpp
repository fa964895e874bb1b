#include "qsim/noise.hpp"

#include <cmath>
#include <limits>

#include "qsim/parallel.hpp"

namespace qsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double decay(double m) {
  // 1 - e^{-1/M}; 0 when M = inf.
  if (std::isinf(m)) return 0.0;
  return -std::expm1(-1.0 / m);
}
}  // namespace

PauliChannel derive_probabilities(double m1, double m2) {
  if (!(m1 > 0) || !(m2 > 0))
    throw std::invalid_argument("coherence parameters must be positive (or +inf)");
  PauliChannel p;
  p.px = p.py = decay(m1) / 4.0;
  p.pz = decay(m2) / 2.0 - p.px;
  if (p.pz < -1e-15)
    throw std::invalid_argument(
        "invalid noise scenario: T2 > 2 T1 gives a negative pz");
  if (p.pz < 0) p.pz = 0.0;
  return p;
}

GaussianWidths stddevs(const PauliChannel& p) {
  auto width = [](double prob) {
    if (prob < 0 || prob >= 1.0)
      throw std::invalid_argument("error probability must lie in [0, 1)");
    return std::sqrt(-std::log1p(-prob));
  };
  return {width(p.px), width(p.py), width(p.pz)};
}

double NoiseScenario::m1() const {
  switch (kind) {
    case Kind::RelaxationDephasing: return M;
    case Kind::PureRelaxation: return M;
    case Kind::PureDephasing: return kInf;
  }
  return M;
}

double NoiseScenario::m2() const {
  switch (kind) {
    case Kind::RelaxationDephasing: return 2.0 * M / 3.0;  // 1/T2 = 3/(2M)
    case Kind::PureRelaxation: return 2.0 * M;             // 1/T2 = 1/(2M)
    case Kind::PureDephasing: return M;
  }
  return M;
}

std::string NoiseScenario::name() const {
  switch (kind) {
    case Kind::RelaxationDephasing: return "t1tphi";
    case Kind::PureRelaxation: return "relax";
    case Kind::PureDephasing: return "dephase";
  }
  return "?";
}

NoiseModel NoiseModel::noiseless() {
  NoiseModel m;
  m.m1_ = kInf;
  m.m2_ = kInf;
  m.enabled_ = false;
  return m;
}

NoiseModel NoiseModel::from_coherence(double m1, double m2, NoiseSampling sampling) {
  NoiseModel m;
  m.m1_ = m1;
  m.m2_ = m2;
  m.rates_ = derive_probabilities(m1, m2);
  m.widths_ = stddevs(m.rates_);
  m.sampling_ = sampling;
  m.enabled_ = !(std::isinf(m1) && std::isinf(m2));
  return m;
}

NoiseModel NoiseModel::from_scenario(const NoiseScenario& sc, NoiseSampling sampling) {
  if (std::isinf(sc.M)) return noiseless();
  return from_coherence(sc.m1(), sc.m2(), sampling);
}

namespace {

Gate1Q rotation_product(double vx, double vy, double vz) {
  // exp(-i vx X) exp(-i vy Y) exp(-i vz Z), each factor cos(v) I - i sin(v) P.
  const Gate1Q rx = Gate1Q::axis_rotation(1, 0, 0, 2.0 * vx);
  const Gate1Q ry = Gate1Q::axis_rotation(0, 1, 0, 2.0 * vy);
  const Gate1Q rz = Gate1Q::axis_rotation(0, 0, 1, 2.0 * vz);
  return rx * ry * rz;
}

Gate1Q single_rotation(double vx, double vy, double vz) {
  const double norm = std::sqrt(vx * vx + vy * vy + vz * vz);
  if (norm == 0.0) return Gate1Q::identity();
  return Gate1Q::axis_rotation(vx, vy, vz, 2.0 * norm);
}

Gate1Q sample_with_widths(Rng& rng, double sx, double sy, double sz,
                          NoiseSampling sampling) {
  // Three standard normals are always drawn so that streams stay aligned
  // across scenarios sharing a master seed.
  const double vx = sx * rng.gaussian();
  const double vy = sy * rng.gaussian();
  const double vz = sz * rng.gaussian();
  return sampling == NoiseSampling::ThreeRotation ? rotation_product(vx, vy, vz)
                                                  : single_rotation(vx, vy, vz);
}

}  // namespace

Gate1Q sample_noise_gate(Rng& rng, const GaussianWidths& s, NoiseSampling sampling) {
  return sample_with_widths(rng, s.sx, s.sy, s.sz, sampling);
}

Gate1Q fuse_idle_noise(Rng& rng, const GaussianWidths& s, uint64_t idle_steps,
                       NoiseSampling sampling) {
  if (idle_steps == 0) return Gate1Q::identity();
  const double scale = std::sqrt(static_cast<double>(idle_steps));
  return sample_with_widths(rng, s.sx * scale, s.sy * scale, s.sz * scale, sampling);
}

void apply_noise_step(StateVector& state, const NoiseModel& model, Rng& rng) {
  if (!model.enabled()) return;
  for (uint32_t q = 0; q < state.num_qubits(); ++q)
    state.apply(sample_noise_gate(rng, model.widths(), model.sampling()), q);
}

namespace {

struct StepView {
  const Circuit& circuit;
  uint64_t steps;
  std::vector<size_t> first_op_of_step;  // ops are sorted by time_step

  explicit StepView(const Circuit& c) : circuit(c) {
    steps = c.num_time_steps();
    first_op_of_step.assign(steps + 1, c.ops().size());
    size_t op = 0;
    for (uint64_t t = 0; t < steps; ++t) {
      first_op_of_step[t] = op;
      while (op < c.ops().size() && c.ops()[op].time_step == t) ++op;
    }
    first_op_of_step[steps] = c.ops().size();
  }
};

void run_one_trajectory(const StepView& view, const StateVector& initial,
                        const NoiseModel& model, Rng rng,
                        const std::vector<NamedObservable>& observables,
                        bool renormalize, std::vector<double>& values,
                        std::vector<double>* term_values,
                        std::vector<double>* series) {
  StateVector psi = initial;
  const uint32_t n = psi.num_qubits();
  std::vector<uint64_t> idle(model.fuse_idle ? n : 0, 0);

  auto record = [&](std::vector<double>* out) {
    const double scale = renormalize ? 1.0 / psi.norm_sq() : 1.0;
    size_t term_slot = 0;
    for (size_t k = 0; k < observables.size(); ++k) {
      double total = 0.0;
      for (const auto& t : observables[k].op.terms()) {
        const double v = t.coeff.real() * expectation(psi, t.string) * scale;
        total += v;
        if (term_values && observables[k].record_terms)
          (*term_values)[term_slot++] = v;
      }
      out->push_back(total);
    }
  };

  for (uint64_t t = 0; t < view.steps; ++t) {
    const size_t begin = view.first_op_of_step[t], end = view.first_op_of_step[t + 1];
    if (model.fuse_idle && model.enabled()) {
      // Flush pending idle noise on the qubits this step touches.
      for (size_t i = begin; i < end; ++i) {
        const auto& op = view.circuit.ops()[i];
        for (uint32_t q : {op.target, op.control}) {
          if (q == GateOp::kNoControl || idle[q] == 0) continue;
          psi.apply(fuse_idle_noise(rng, model.widths(), idle[q], model.sampling()), q);
          idle[q] = 0;
        }
      }
    }
    for (size_t i = begin; i < end; ++i) psi.apply_op(view.circuit.ops()[i]);
    if (model.enabled()) {
      if (!model.fuse_idle) {
        apply_noise_step(psi, model, rng);
      } else {
        std::vector<bool> touched(n, false);
        for (size_t i = begin; i < end; ++i) {
          touched[view.circuit.ops()[i].target] = true;
          if (view.circuit.ops()[i].is_controlled())
            touched[view.circuit.ops()[i].control] = true;
        }
        for (uint32_t q = 0; q < n; ++q) {
          if (touched[q])
            psi.apply(sample_noise_gate(rng, model.widths(), model.sampling()), q);
          else
            ++idle[q];
        }
      }
    }
    if (series) record(series);
  }
  if (model.fuse_idle && model.enabled()) {
    for (uint32_t q = 0; q < n; ++q) {
      if (idle[q] == 0) continue;
      psi.apply(fuse_idle_noise(rng, model.widths(), idle[q], model.sampling()), q);
      idle[q] = 0;
    }
  }
  values.clear();
  record(&values);
}

TrajectoryResult run_trajectories_impl(const Circuit& circuit, const StateVector& initial,
                                       const NoiseModel& model,
                                       const std::vector<NamedObservable>& observables,
                                       const TrajectoryConfig& cfg) {
  if (cfg.num_trajectories < 1)
    throw std::invalid_argument("need at least one trajectory");
  for (const auto& obs : observables)
    if (obs.op.num_qubits() != circuit.num_qubits())
      throw std::invalid_argument("observable '" + obs.name +
                                  "' does not match the circuit width");

  const StepView view(circuit);
  const bool renormalize = circuit.contains_non_unitary();
  size_t term_count = 0;
  for (const auto& obs : observables)
    if (obs.record_terms) term_count += obs.op.terms().size();

  TrajectoryResult result;
  for (const auto& obs : observables) result.names.push_back(obs.name);
  result.num_trajectories = cfg.num_trajectories;
  result.gate_count = circuit.size();
  result.step_count = view.steps;

  const uint64_t stored = model.enabled() ? cfg.num_trajectories : 1;
  result.per_trajectory.assign(stored, {});
  std::vector<std::vector<double>> terms(term_count ? stored : 0);
  std::vector<std::vector<double>> series(cfg.record_time_series ? stored : 0);

  parallel_for(
      stored,
      [&](uint64_t j) {
        Rng rng = Rng::trajectory_stream(cfg.master_seed, j);
        std::vector<double>* term_out = nullptr;
        if (term_count) {
          terms[j].assign(term_count, 0.0);
          term_out = &terms[j];
        }
        std::vector<double>* series_out = cfg.record_time_series ? &series[j] : nullptr;
        run_one_trajectory(view, initial, model, std::move(rng), observables,
                           renormalize, result.per_trajectory[j], term_out, series_out);
      },
      cfg.workers);

  if (!model.enabled() && cfg.num_trajectories > 1) {
    // Every trajectory is the pristine run.
    result.per_trajectory.assign(cfg.num_trajectories, result.per_trajectory[0]);
    if (term_count) terms.assign(cfg.num_trajectories, terms[0]);
    if (cfg.record_time_series) series.assign(cfg.num_trajectories, series[0]);
  }

  // Reductions walk trajectories in index order: deterministic for any
  // worker count.
  const uint64_t nt = cfg.num_trajectories;
  const size_t nobs = observables.size();
  result.stats.assign(nobs, {});
  for (size_t k = 0; k < nobs; ++k) {
    double sum = 0.0;
    for (uint64_t j = 0; j < nt; ++j) sum += result.per_trajectory[j][k];
    const double mean = sum / static_cast<double>(nt);
    double ss = 0.0;
    for (uint64_t j = 0; j < nt; ++j) {
      const double d = result.per_trajectory[j][k] - mean;
      ss += d * d;
    }
    const double var = nt > 1 ? ss / static_cast<double>(nt - 1) : 0.0;
    result.stats[k] = {mean, std::sqrt(var),
                       std::sqrt(var / static_cast<double>(nt))};
  }

  if (term_count) {
    result.term_means.assign(nobs, {});
    size_t slot = 0;
    for (size_t k = 0; k < nobs; ++k) {
      if (!observables[k].record_terms) continue;
      const size_t tc = observables[k].op.terms().size();
      result.term_means[k].assign(tc, 0.0);
      for (size_t g = 0; g < tc; ++g) {
        double sum = 0.0;
        for (uint64_t j = 0; j < nt; ++j) sum += terms[j][slot + g];
        result.term_means[k][g] = sum / static_cast<double>(nt);
      }
      slot += tc;
    }
  }

  if (cfg.record_time_series) {
    result.step_means.assign(view.steps, std::vector<double>(nobs, 0.0));
    for (uint64_t t = 0; t < view.steps; ++t)
      for (size_t k = 0; k < nobs; ++k) {
        double sum = 0.0;
        for (uint64_t j = 0; j < nt; ++j) sum += series[j][t * nobs + k];
        result.step_means[t][k] = sum / static_cast<double>(nt);
      }
  }
  return result;
}

}  // namespace

TrajectoryResult run_trajectories(const Circuit& circuit, uint64_t reference,
                                  const NoiseModel& model,
                                  const std::vector<NamedObservable>& observables,
                                  const TrajectoryConfig& cfg) {
  return run_trajectories_impl(
      circuit, StateVector::basis_state(circuit.num_qubits(), reference), model,
      observables, cfg);
}

TrajectoryResult run_trajectories(const Circuit& circuit, const StateVector& initial,
                                  const NoiseModel& model,
                                  const std::vector<NamedObservable>& observables,
                                  const TrajectoryConfig& cfg) {
  return run_trajectories_impl(circuit, initial, model, observables, cfg);
}

DensityMatrix propagate_density_matrix(const Circuit& circuit, uint64_t reference,
                                       const NoiseModel& model) {
  DensityMatrix rho = DensityMatrix::basis(circuit.num_qubits(), reference);
  const StepView view(circuit);
  for (uint64_t t = 0; t < view.steps; ++t) {
    for (size_t i = view.first_op_of_step[t]; i < view.first_op_of_step[t + 1]; ++i)
      rho.apply_op(circuit.ops()[i]);
    if (model.enabled()) rho.apply_pauli_channel_all(model.rates());
  }
  return rho;
}

}  // namespace qsim
