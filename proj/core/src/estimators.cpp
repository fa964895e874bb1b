#include "qsim/estimators.hpp"

#include <cmath>

namespace qsim {

double energy_estimate(const StateVector& state, const PauliSum& h) {
  if (!h.is_hermitian())
    throw std::invalid_argument("energy estimate requires a Hermitian observable");
  return expectation(state, h);
}

double pristine_variance(const StateVector& state, const PauliSum& h) {
  if (!h.is_hermitian())
    throw std::invalid_argument("variance requires a Hermitian observable");
  double var = 0.0;
  for (const auto& t : h.terms()) {
    const double w = t.coeff.real();
    const double hv = w * expectation(state, t.string);
    var += w * w - hv * hv;
  }
  return var;
}

double noisy_variance(const PauliSum& h, std::span<const double> term_means) {
  if (term_means.size() != h.terms().size())
    throw std::invalid_argument("term mean count does not match the observable");
  double var = 0.0;
  for (size_t g = 0; g < term_means.size(); ++g) {
    const double w = h.terms()[g].coeff.real();
    var += w * w - term_means[g] * term_means[g];
  }
  return var;
}

PauliSum particle_number_observable(uint32_t n, Mapping mapping) {
  FermionSum number(n);
  for (uint32_t i = 0; i < n; ++i) number.add(1.0, {{i, true}, {i, false}});
  return fermion_to_pauli(number, mapping, n);
}

EstimatorReport make_report(const std::string& name, double pristine_value,
                            double pristine_var, const TrajectoryStats& stats,
                            std::span<const double> term_means, const PauliSum& h,
                            uint64_t trajectory_count, uint64_t gate_count) {
  EstimatorReport r;
  r.observable = name;
  r.pristine_value = pristine_value;
  r.noisy_mean = stats.mean;
  r.mean_error = stats.mean - pristine_value;
  r.sigma_p = pristine_var >= 0 ? std::sqrt(pristine_var) : 0.0;
  const double noisy_var =
      term_means.empty() ? pristine_var : noisy_variance(h, term_means);
  r.sigma_noisy = noisy_var >= 0 ? std::sqrt(noisy_var) : 0.0;
  r.error_width = r.sigma_noisy - r.sigma_p;
  r.per_gate_error = gate_count ? r.mean_error / static_cast<double>(gate_count) : 0.0;
  r.standard_error = stats.standard_error;
  r.trajectory_stddev = stats.sample_stddev;
  r.trajectory_count = trajectory_count;
  r.gate_count = gate_count;
  return r;
}

EstimatorReport per_gate_normalize(const EstimatorReport& report, uint64_t gate_count) {
  if (gate_count == 0) throw std::invalid_argument("gate count must be at least 1");
  EstimatorReport r = report;
  r.mean_error /= static_cast<double>(gate_count);
  r.error_width /= static_cast<double>(gate_count);
  r.per_gate_error = r.mean_error;
  return r;
}

}  // namespace qsim
