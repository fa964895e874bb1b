#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsim/circuit.hpp"
#include "qsim/density_matrix.hpp"
#include "qsim/pauli.hpp"
#include "qsim/rng.hpp"
#include "qsim/state_vector.hpp"

namespace qsim {

/// Per-step Pauli error probabilities derived from the coherence parameters
/// M_beta = T_beta / dt:
///   px = py = (1 - e^{-1/M1}) / 4
///   pz      = (1 - e^{-1/M2}) / 2 - (1 - e^{-1/M1}) / 4
/// Requires T2 <= 2 T1 (otherwise pz < 0 and the model is unphysical).
PauliChannel derive_probabilities(double m1, double m2);

struct GaussianWidths {
  double sx = 0.0, sy = 0.0, sz = 0.0;
};

/// s_alpha = sqrt(-ln(1 - p_alpha)); diverges as p -> 1.
GaussianWidths stddevs(const PauliChannel& p);

enum class NoiseSampling {
  ThreeRotation,   // exact product exp(-i vx X) exp(-i vy Y) exp(-i vz Z)
  SingleRotation,  // small-angle form exp(-i |v| (v/|v|).sigma)
};

struct NoiseScenario {
  enum class Kind {
    RelaxationDephasing,  // T1 = Tphi
    PureRelaxation,       // Tphi = inf  =>  T2 = 2 T1
    PureDephasing,        // T1 = inf
  };
  Kind kind = Kind::RelaxationDephasing;
  double M = 0.0;

  /// (M1, M2) through 1/Tphi = 1/T2 - 1/(2 T1).
  double m1() const;
  double m2() const;
  std::string name() const;
};

class NoiseModel {
 public:
  static NoiseModel noiseless();
  static NoiseModel from_coherence(double m1, double m2,
                                   NoiseSampling sampling = NoiseSampling::ThreeRotation);
  static NoiseModel from_scenario(const NoiseScenario& sc,
                                  NoiseSampling sampling = NoiseSampling::ThreeRotation);

  double m1() const { return m1_; }
  double m2() const { return m2_; }
  const PauliChannel& rates() const { return rates_; }
  const GaussianWidths& widths() const { return widths_; }
  NoiseSampling sampling() const { return sampling_; }
  bool enabled() const { return enabled_; }

  bool fuse_idle = false;  // optional optimization, off by default

 private:
  NoiseModel() = default;
  double m1_ = 0.0, m2_ = 0.0;
  PauliChannel rates_;
  GaussianWidths widths_;
  NoiseSampling sampling_ = NoiseSampling::ThreeRotation;
  bool enabled_ = false;
};

/// One sampled noise gate; always unitary. SingleRotation with |v| = 0 is the
/// identity by definition.
Gate1Q sample_noise_gate(Rng& rng, const GaussianWidths& s, NoiseSampling sampling);

/// Gaussian angles add over idle steps, so t fused steps sample with widths
/// s_alpha * sqrt(t). Exact for commuting parts; O(v^2) otherwise.
Gate1Q fuse_idle_noise(Rng& rng, const GaussianWidths& s, uint64_t idle_steps,
                       NoiseSampling sampling);

/// Independently sampled noise gate on every qubit (one time step).
void apply_noise_step(StateVector& state, const NoiseModel& model, Rng& rng);

struct TrajectoryConfig {
  uint64_t num_trajectories = 10000;
  uint64_t master_seed = 0;
  unsigned workers = 0;            // 0: use max_threads()
  bool record_time_series = false; // per-step observable means (calibration)
};

struct NamedObservable {
  std::string name;
  PauliSum op;
  bool record_terms = false;  // also average each w_g <O_g> (variance input)
};

struct TrajectoryStats {
  double mean = 0.0;
  double sample_stddev = 0.0;
  double standard_error = 0.0;
};

struct TrajectoryResult {
  std::vector<std::string> names;
  /// per_trajectory[j][k]: observable k in trajectory j.
  std::vector<std::vector<double>> per_trajectory;
  std::vector<TrajectoryStats> stats;
  /// term_means[k][g]: trajectory mean of w_g <O_g> (only when record_terms).
  std::vector<std::vector<double>> term_means;
  /// step_means[t][k] after step t (only when record_time_series).
  std::vector<std::vector<double>> step_means;
  uint64_t num_trajectories = 0;
  uint64_t gate_count = 0;
  uint64_t step_count = 0;
};

/// Monte Carlo unraveling: each trajectory starts from the reference basis
/// state, applies every time step's gates followed by a noise step, then
/// records each observable. Trajectory j's randomness is a pure function of
/// (master_seed, j); aggregation runs in trajectory order, so results are
/// byte-identical for any worker count.
TrajectoryResult run_trajectories(const Circuit& circuit, uint64_t reference,
                                  const NoiseModel& model,
                                  const std::vector<NamedObservable>& observables,
                                  const TrajectoryConfig& cfg);

/// Same contract with an explicit initial state (calibration experiments).
TrajectoryResult run_trajectories(const Circuit& circuit, const StateVector& initial,
                                  const NoiseModel& model,
                                  const std::vector<NamedObservable>& observables,
                                  const TrajectoryConfig& cfg);

/// Density-matrix reference for the same noise clock (small registers): the
/// twirled channel with the model's (px, py, pz) after every time step.
DensityMatrix propagate_density_matrix(const Circuit& circuit, uint64_t reference,
                                       const NoiseModel& model);

}  // namespace qsim
