#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsim/estimators.hpp"
#include "qsim/noise.hpp"
#include "qsim/ucc.hpp"

namespace qsim {

/// One noise-sweep row: energy and particle-number reports for a scenario,
/// plus the error-to-noise ratio (mean energy error x M).
struct SweepRow {
  NoiseScenario scenario;
  EstimatorReport energy;
  EstimatorReport particle;
  double mean_error_times_m = 0.0;
};

std::vector<SweepRow> noise_sweep(const Circuit& circuit, uint64_t reference,
                                  const PauliSum& hamiltonian,
                                  const PauliSum& particle_number,
                                  const std::vector<NoiseScenario>& scenarios,
                                  NoiseSampling sampling, const TrajectoryConfig& cfg);

struct MTrotResult {
  bool found = false;
  double log10_m = 0.0;  // crossing to within 0.05 decades
  struct Sample {
    double log10_m;
    double total_error_eta1;
    double total_error_eta2;
  };
  std::vector<Sample> samples;
};

/// Coherence parameter at which total error (Trotter + noise) matches for
/// eta=1 and eta=2. The exact energy uses the dense exponential of the full
/// generator, so this runs at oracle scale only. All evaluations share the
/// master seed (common random numbers); found=false reports a bracket with
/// no sign change (e.g. an all-commuting generator).
MTrotResult find_m_trot(const ClusterAmplitudes& amps, Mapping mapping,
                        const PauliSum& hamiltonian, NoiseScenario::Kind kind,
                        double log10_lo, double log10_hi, NoiseSampling sampling,
                        const TrajectoryConfig& cfg);

/// Systematic-gate-error experiment: two sequential single excitations under
/// JW from a quarter-filled register, errors on basis-change gates and CNOTs
/// only, no environmental noise. Returns |<N> - n/4|.
struct GateErrorSpec {
  uint32_t n = 12;                    // divisible by 4
  double theta1 = 0.1;                // first excitation's Z-rotation magnitude
  double theta2 = 0.1;                // second excitation's (paper: fixed 0.1)
  double h_overrotation = 1e-4;       // radians, about the gate's own axis
  double yb_overrotation = 1e-4;
  double cnot_angle = M_PI + 1e-3;    // errored CNOT = CRX(cnot_angle)
  bool error_h = true;
  bool error_yb = true;
  bool error_cnot = true;
  enum class CnotScope {
    AllGates,                 // qubit-count sweep variant
    BeforeFourthRotation,     // theta sweep variant
  };
  CnotScope cnot_scope = CnotScope::AllGates;
};

struct GateErrorResult {
  double particle_error = 0.0;  // |<N> - n/4|
  double particle_number = 0.0;
  uint64_t gate_count = 0;
  uint64_t errored_gates = 0;
};

GateErrorResult gate_error_experiment(const GateErrorSpec& spec);

/// Builds the two-excitation circuit with the spec's errors applied; exposed
/// for tests and the CLI.
Circuit build_gate_error_circuit(const GateErrorSpec& spec, uint64_t* errored_gates);

struct CalibrationResult {
  double fitted_m1 = 0.0;
  double fitted_m2 = 0.0;
  std::vector<double> z_means;  // <Z> after each step, from |1>
  std::vector<double> x_means;  // <X> after each step, from |+>
};

/// Idle register under noise: fits exponential decays of <Z> (from |1>) and
/// <X> (from |+>) over the recorded time series and reports the implied
/// coherence parameters.
CalibrationResult calibrate_noise(const NoiseModel& model, uint32_t steps,
                                  const TrajectoryConfig& cfg);

/// Weighted log-linear fit of y_t ~ factor^t through the origin; returns the
/// per-step decay factor. Points with the wrong sign or tiny magnitude are
/// skipped.
double fit_decay_factor(const std::vector<double>& series, double sign);

}  // namespace qsim
