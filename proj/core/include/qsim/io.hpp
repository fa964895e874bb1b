#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qsim/circuit.hpp"
#include "qsim/fermion.hpp"
#include "qsim/noise.hpp"
#include "qsim/pauli.hpp"
#include "qsim/ucc.hpp"

namespace qsim {

// Text formats. All are whitespace-separated with `#` comments and decimal
// floats.
//
// Fermion file    : `modes <n>` then `<re> <im> : <tok> ...` where a token is
//                   `p^` (creation) or `p` (annihilation), written left to
//                   right in operator-product order.
// Pauli file      : `qubits <n>` then `<re> <im> : X0 Z3 ...`; an empty tail
//                   after the colon is the identity string.
// Amplitude file  : `modes <n>`, `electrons <k>`, then
//                   `single <i> <p> <xi>` / `double <i1> <i2> <p1> <p2> <xi>`.
// Circuit file    : one op per line: H/YB/YBDG/X <q>, RZ/RX <q> <radians>,
//                   CNOT <c> <t>, CRX <c> <t> <radians>,
//                   U <q> <re11> <im11> ... <im22> (row-major). The writer
//                   prefixes `# qubits`, `# reference`, `# gates` headers,
//                   which the parser understands when present.

struct ParsedFermionFile {
  uint32_t modes;
  FermionSum sum;
};
ParsedFermionFile parse_fermion_file(const std::string& text);
std::string write_fermion_file(const FermionSum& sum);

struct ParsedPauliFile {
  uint32_t qubits;
  PauliSum sum;
};
ParsedPauliFile parse_pauli_file(const std::string& text);
std::string write_pauli_file(const PauliSum& sum);

ClusterAmplitudes parse_amplitude_file(const std::string& text);
std::string write_amplitude_file(const ClusterAmplitudes& amps);

struct ParsedCircuitFile {
  Circuit circuit;
  uint64_t reference = 0;
  bool has_reference = false;
};
ParsedCircuitFile parse_circuit_file(const std::string& text);
std::string write_circuit_file(const Circuit& circuit, uint64_t reference);

/// Noise configuration: comma/space separated `key=value` pairs with keys
/// scenario=t1tphi|relax|dephase, M=, M1=, M2=, mode=three|single,
/// fuse_idle=on|off, traj=, seed=.
struct NoiseConfig {
  NoiseModel model = NoiseModel::noiseless();
  TrajectoryConfig trajectories;
  bool has_scenario = false;
  NoiseScenario scenario;
};
NoiseConfig parse_noise_config(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Floats print with 17 significant digits everywhere results are persisted.
std::string format_double(double v);

/// Git-style blob hash (sha1 over "blob <len>\0<content>"), hex encoded.
std::string git_blob_sha1(const std::string& content);

}  // namespace qsim
