#include "qsim/ucc.hpp"

#include <algorithm>
#include <cmath>

#include "qsim/errors.hpp"

namespace qsim {

std::vector<std::string> ClusterAmplitudes::validate() const {
  if (n_electrons > n_modes)
    throw std::invalid_argument("electron count exceeds mode count");
  auto check_occ = [&](uint32_t i) {
    if (i >= n_electrons)
      throw index_error("occupied index " + std::to_string(i) +
                        " must be below n_electrons=" + std::to_string(n_electrons));
  };
  auto check_virt = [&](uint32_t p) {
    if (p < n_electrons || p >= n_modes)
      throw index_error("virtual index " + std::to_string(p) + " must lie in [" +
                        std::to_string(n_electrons) + ", " + std::to_string(n_modes) +
                        ")");
  };
  std::vector<std::string> warnings;
  auto spin = [](uint32_t m) { return m & 1u; };
  for (const auto& s : singles) {
    check_occ(s.occupied);
    check_virt(s.virt);
    if (!std::isfinite(s.amplitude))
      throw std::invalid_argument("non-finite single amplitude");
    if (spin(s.occupied) != spin(s.virt))
      warnings.push_back("single " + std::to_string(s.occupied) + "->" +
                         std::to_string(s.virt) + " does not conserve spin parity");
  }
  for (const auto& d : doubles) {
    check_occ(d.occupied1);
    check_occ(d.occupied2);
    check_virt(d.virt1);
    check_virt(d.virt2);
    if (!std::isfinite(d.amplitude))
      throw std::invalid_argument("non-finite double amplitude");
    if (spin(d.occupied1) != spin(d.virt1) || spin(d.occupied2) != spin(d.virt2))
      warnings.push_back("double (" + std::to_string(d.occupied1) + "," +
                         std::to_string(d.occupied2) + ")->(" +
                         std::to_string(d.virt1) + "," + std::to_string(d.virt2) +
                         ") does not conserve spin parity");
  }
  return warnings;
}

FermionSum build_cluster_operator(const ClusterAmplitudes& amps, double cutoff) {
  amps.validate();
  FermionSum t(amps.n_modes);
  for (const auto& s : amps.singles) {
    if (std::abs(s.amplitude) < cutoff) continue;
    // xi (a_i^dagger a_p - a_p^dagger a_i)
    t.add(s.amplitude, {{s.occupied, true}, {s.virt, false}});
    t.add(-s.amplitude, {{s.virt, true}, {s.occupied, false}});
  }
  for (const auto& d : amps.doubles) {
    if (std::abs(d.amplitude) < cutoff) continue;
    // xi (a_i1^dagger a_p1 a_i2^dagger a_p2 - a_p2^dagger a_i2 a_p1^dagger a_i1)
    t.add(d.amplitude, {{d.occupied1, true},
                        {d.virt1, false},
                        {d.occupied2, true},
                        {d.virt2, false}});
    t.add(-d.amplitude, {{d.virt2, true},
                         {d.occupied2, false},
                         {d.virt1, true},
                         {d.occupied1, false}});
  }
  return t;
}

uint64_t hartree_fock_reference(uint32_t n_electrons, uint32_t n_modes, Mapping mapping) {
  if (n_electrons > n_modes)
    throw std::invalid_argument("electron count exceeds mode count");
  const uint64_t occupation =
      n_electrons == 0 ? 0 : ((uint64_t{1} << n_electrons) - 1);
  if (mapping == Mapping::JordanWigner) return occupation;
  return bk_encode_occupation(occupation, n_modes);
}

std::vector<ExponentTerm> trotterize(const PauliSum& generator, const TrotterPlan& plan) {
  if (plan.repetitions < 1)
    throw std::invalid_argument("Trotter number must be at least 1");
  PauliSum sorted = generator.simplified();
  double scale = 0.0;
  for (const auto& t : sorted.terms()) scale = std::max(scale, std::abs(t.coeff));
  for (const auto& t : sorted.terms()) {
    if (std::abs(t.coeff.real()) > 1e-10 * std::max(1.0, scale))
      throw std::invalid_argument(
          "generator must be anti-Hermitian (purely imaginary coefficients), got " +
          sorted.str());
  }
  std::vector<ExponentTerm> out;
  out.reserve(sorted.size() * plan.repetitions);
  for (uint32_t rep = 0; rep < plan.repetitions; ++rep)
    for (const auto& t : sorted.terms())
      out.push_back({t.coeff.imag() / plan.repetitions, t.string});
  return out;
}

void synthesize_exponential(Circuit& circuit, double angle, const PauliString& p) {
  if (p.num_qubits() != circuit.num_qubits())
    throw std::invalid_argument("string width does not match circuit");
  if (p.is_identity()) {
    circuit.add_global_phase(angle);
    return;
  }
  std::vector<uint32_t> active;
  for (uint32_t q = 0; q < p.num_qubits(); ++q)
    if (p.letter(q) != Pauli::I) active.push_back(q);

  for (uint32_t q : active) {
    if (p.letter(q) == Pauli::X) circuit.add_h(q);
    if (p.letter(q) == Pauli::Y) circuit.add_yb(q);
  }
  for (size_t i = 0; i + 1 < active.size(); ++i)
    circuit.add_cnot(active[i], active[i + 1]);
  circuit.add_rz(active.back(), -2.0 * angle);
  for (size_t i = active.size() - 1; i-- > 0;)
    circuit.add_cnot(active[i], active[i + 1]);
  for (auto it = active.rbegin(); it != active.rend(); ++it) {
    if (p.letter(*it) == Pauli::X) circuit.add_h(*it);
    if (p.letter(*it) == Pauli::Y) circuit.add_ybdg(*it);
  }
}

namespace {

// One excitation's anti-Hermitian generator. The image strings of a single
// excitation commute pairwise, so as long as they stay adjacent the product
// of their exponentials equals the exponential of the (particle-conserving)
// group sum and <N> is conserved exactly for any amplitudes. A flat sort over
// the whole image can interleave groups that share a top qubit and loses
// that exactness, so excitations are ordered as groups here.
struct ExcitationGroup {
  uint64_t order_key_top;
  std::vector<uint32_t> order_key_modes;
  FermionSum generator;
};

bool group_less(const ExcitationGroup& a, const ExcitationGroup& b) {
  if (a.order_key_top != b.order_key_top) return a.order_key_top < b.order_key_top;
  return a.order_key_modes < b.order_key_modes;
}

std::vector<ExcitationGroup> excitation_groups(const ClusterAmplitudes& amps,
                                               double cutoff) {
  amps.validate();
  std::vector<ExcitationGroup> groups;
  for (const auto& s : amps.singles) {
    if (std::abs(s.amplitude) < cutoff) continue;
    ClusterAmplitudes one{amps.n_modes, amps.n_electrons, {s}, {}};
    groups.push_back({std::max(s.occupied, s.virt),
                      {s.occupied, s.virt},
                      build_cluster_operator(one, 0.0)});
  }
  for (const auto& d : amps.doubles) {
    if (std::abs(d.amplitude) < cutoff) continue;
    ClusterAmplitudes one{amps.n_modes, amps.n_electrons, {}, {d}};
    groups.push_back(
        {std::max(std::max(d.occupied1, d.occupied2), std::max(d.virt1, d.virt2)),
         {d.occupied1, d.occupied2, d.virt1, d.virt2},
         build_cluster_operator(one, 0.0)});
  }
  std::sort(groups.begin(), groups.end(), group_less);
  return groups;
}

}  // namespace

UccCircuit build_ucc_circuit(const ClusterAmplitudes& amps, Mapping mapping,
                             uint32_t trotter_repetitions, double amplitude_cutoff) {
  if (trotter_repetitions < 1)
    throw std::invalid_argument("Trotter number must be at least 1");
  auto groups = excitation_groups(amps, amplitude_cutoff);
  std::vector<ExponentTerm> sequence;
  for (const auto& group : groups) {
    PauliSum image = fermion_to_pauli(group.generator, mapping, amps.n_modes);
    for (const auto& term : trotterize(image, {1}))
      sequence.push_back(term);
  }
  UccCircuit out;
  out.circuit = Circuit(amps.n_modes);
  out.reference = hartree_fock_reference(amps.n_electrons, amps.n_modes, mapping);
  out.mapping = mapping;
  out.n_electrons = amps.n_electrons;
  for (uint32_t rep = 0; rep < trotter_repetitions; ++rep)
    for (const auto& term : sequence)
      synthesize_exponential(out.circuit, term.angle / trotter_repetitions,
                             term.string);
  return out;
}

Circuit qft_circuit(uint32_t n) {
  if (n < 1) throw std::invalid_argument("QFT needs at least one qubit");
  Circuit c(n);
  for (uint32_t j = n; j-- > 0;) {
    c.add_h(j);
    for (uint32_t m = j; m-- > 0;) {
      const double theta = M_PI / static_cast<double>(uint64_t{1} << (j - m));
      c.add_cphase(m, j, theta);
    }
  }
  for (uint32_t q = 0; q < n / 2; ++q) {
    const uint32_t r = n - 1 - q;
    c.add_cnot(q, r);
    c.add_cnot(r, q);
    c.add_cnot(q, r);
  }
  return c;
}

}  // namespace qsim
