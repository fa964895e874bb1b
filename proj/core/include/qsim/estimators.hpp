#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "qsim/mappings.hpp"
#include "qsim/noise.hpp"
#include "qsim/pauli.hpp"
#include "qsim/state_vector.hpp"

namespace qsim {

/// Noise-error summary for one observable. Errors are differences between
/// the noisy ensemble and the pristine (noise-free) run of the same circuit.
struct EstimatorReport {
  std::string observable;
  double pristine_value = 0.0;
  double noisy_mean = 0.0;
  double mean_error = 0.0;       // noisy_mean - pristine_value
  double sigma_p = 0.0;          // sqrt of the pristine estimator variance
  double sigma_noisy = 0.0;
  double error_width = 0.0;      // sigma_noisy - sigma_p
  double per_gate_error = 0.0;   // mean_error / gate count
  double standard_error = 0.0;   // of noisy_mean
  double trajectory_stddev = 0.0;  // sample stddev of per-trajectory values
  uint64_t trajectory_count = 0;
  uint64_t gate_count = 0;
};

/// sum_g w_g <O_g>; requires a Hermitian observable.
double energy_estimate(const StateVector& state, const PauliSum& h);

/// Estimator variance of a term-by-term Pauli measurement:
/// sigma^2 = sum_g (w_g^2 - <H_g>^2). <O_g^2> = I makes identity terms
/// contribute exactly zero.
double pristine_variance(const StateVector& state, const PauliSum& h);

/// Same formula with trajectory-averaged term means <H_g>_n (from
/// TrajectoryResult::term_means).
double noisy_variance(const PauliSum& h, std::span<const double> term_means);

/// Total electron-number operator sum_i a_i^dagger a_i under the mapping;
/// the Jordan-Wigner form is (n/2) I - (1/2) sum_i Z_i.
PauliSum particle_number_observable(uint32_t n, Mapping mapping);

EstimatorReport make_report(const std::string& name, double pristine_value,
                            double pristine_var, const TrajectoryStats& stats,
                            std::span<const double> term_means, const PauliSum& h,
                            uint64_t trajectory_count, uint64_t gate_count);

/// Divides the mean error and the width by the gate count (= time steps
/// under serial scheduling).
EstimatorReport per_gate_normalize(const EstimatorReport& report, uint64_t gate_count);

}  // namespace qsim
