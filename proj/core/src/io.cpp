#include "qsim/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsim/errors.hpp"

namespace qsim {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

double parse_double(const std::string& tok, int line) {
  try {
    size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error("expected a number, got '" + tok + "'", line);
  }
}

uint64_t parse_uint(const std::string& tok, int line) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw parse_error("expected a non-negative integer, got '" + tok + "'", line);
  return v;
}

void expect_tokens(const Line& line, size_t count, const std::string& what) {
  if (line.tokens.size() != count)
    throw parse_error("expected " + what, line.number);
}

}  // namespace

ParsedFermionFile parse_fermion_file(const std::string& text) {
  auto lines = tokenize(text);
  if (lines.empty()) throw parse_error("empty fermion file");
  expect_tokens(lines[0], 2, "`modes <n>` header");
  if (lines[0].tokens[0] != "modes")
    throw parse_error("first line must be `modes <n>`", lines[0].number);
  const auto n = static_cast<uint32_t>(parse_uint(lines[0].tokens[1], lines[0].number));
  FermionSum sum(n);
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.tokens.size() < 3 || line.tokens[2] != ":")
      throw parse_error("expected `<re> <im> : <tok> ...`", line.number);
    cdouble coeff(parse_double(line.tokens[0], line.number),
                  parse_double(line.tokens[1], line.number));
    LadderProduct ops;
    for (size_t t = 3; t < line.tokens.size(); ++t) {
      std::string tok = line.tokens[t];
      bool creation = false;
      if (!tok.empty() && tok.back() == '^') {
        creation = true;
        tok.pop_back();
      }
      const auto mode = static_cast<uint32_t>(parse_uint(tok, line.number));
      if (mode >= n)
        throw parse_error("mode " + std::to_string(mode) + " out of range (modes " +
                              std::to_string(n) + ")",
                          line.number);
      ops.push_back({mode, creation});
    }
    sum.add(coeff, std::move(ops));
  }
  return {n, sum};
}

std::string write_fermion_file(const FermionSum& sum) {
  std::ostringstream out;
  out << "modes " << sum.modes() << "\n";
  for (const auto& t : sum.terms()) {
    out << format_double(t.coeff.real()) << " " << format_double(t.coeff.imag()) << " :";
    for (const auto& op : t.ops) out << " " << op.mode << (op.creation ? "^" : "");
    out << "\n";
  }
  return out.str();
}

ParsedPauliFile parse_pauli_file(const std::string& text) {
  auto lines = tokenize(text);
  if (lines.empty()) throw parse_error("empty pauli file");
  expect_tokens(lines[0], 2, "`qubits <n>` header");
  if (lines[0].tokens[0] != "qubits")
    throw parse_error("first line must be `qubits <n>`", lines[0].number);
  const auto n = static_cast<uint32_t>(parse_uint(lines[0].tokens[1], lines[0].number));
  PauliSum sum(n);
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.tokens.size() < 3 || line.tokens[2] != ":")
      throw parse_error("expected `<re> <im> : <letters>`", line.number);
    cdouble coeff(parse_double(line.tokens[0], line.number),
                  parse_double(line.tokens[1], line.number));
    PauliString s(n);
    for (size_t t = 3; t < line.tokens.size(); ++t) {
      const std::string& tok = line.tokens[t];
      if (tok.size() < 2)
        throw parse_error("expected letter+qubit like `X0`, got '" + tok + "'",
                          line.number);
      Pauli letter;
      switch (tok[0]) {
        case 'X': letter = Pauli::X; break;
        case 'Y': letter = Pauli::Y; break;
        case 'Z': letter = Pauli::Z; break;
        default:
          throw parse_error("unknown Pauli letter '" + tok.substr(0, 1) + "'",
                            line.number);
      }
      const auto q =
          static_cast<uint32_t>(parse_uint(tok.substr(1), line.number));
      if (q >= n)
        throw parse_error("qubit " + std::to_string(q) + " out of range (qubits " +
                              std::to_string(n) + ")",
                          line.number);
      if (s.letter(q) != Pauli::I)
        throw parse_error("duplicate letter on qubit " + std::to_string(q),
                          line.number);
      s.set_letter(q, letter);
    }
    sum.add(coeff, s);
  }
  return {n, sum};
}

std::string write_pauli_file(const PauliSum& sum) {
  std::ostringstream out;
  out << "qubits " << sum.num_qubits() << "\n";
  for (const auto& t : sum.terms()) {
    out << format_double(t.coeff.real()) << " " << format_double(t.coeff.imag()) << " :";
    for (uint32_t q = 0; q < sum.num_qubits(); ++q) {
      Pauli p = t.string.letter(q);
      if (p != Pauli::I) out << " " << pauli_letter(p) << q;
    }
    out << "\n";
  }
  return out.str();
}

ClusterAmplitudes parse_amplitude_file(const std::string& text) {
  auto lines = tokenize(text);
  if (lines.size() < 2) throw parse_error("amplitude file needs modes and electrons");
  expect_tokens(lines[0], 2, "`modes <n>` header");
  expect_tokens(lines[1], 2, "`electrons <k>` header");
  if (lines[0].tokens[0] != "modes" || lines[1].tokens[0] != "electrons")
    throw parse_error("headers must be `modes <n>` then `electrons <k>`",
                      lines[0].number);
  ClusterAmplitudes amps;
  amps.n_modes = static_cast<uint32_t>(parse_uint(lines[0].tokens[1], lines[0].number));
  amps.n_electrons =
      static_cast<uint32_t>(parse_uint(lines[1].tokens[1], lines[1].number));
  for (size_t i = 2; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.tokens[0] == "single") {
      expect_tokens(line, 4, "`single <i> <p> <xi>`");
      amps.singles.push_back(
          {static_cast<uint32_t>(parse_uint(line.tokens[1], line.number)),
           static_cast<uint32_t>(parse_uint(line.tokens[2], line.number)),
           parse_double(line.tokens[3], line.number)});
    } else if (line.tokens[0] == "double") {
      expect_tokens(line, 6, "`double <i1> <i2> <p1> <p2> <xi>`");
      amps.doubles.push_back(
          {static_cast<uint32_t>(parse_uint(line.tokens[1], line.number)),
           static_cast<uint32_t>(parse_uint(line.tokens[2], line.number)),
           static_cast<uint32_t>(parse_uint(line.tokens[3], line.number)),
           static_cast<uint32_t>(parse_uint(line.tokens[4], line.number)),
           parse_double(line.tokens[5], line.number)});
    } else {
      throw parse_error("expected `single` or `double`, got '" + line.tokens[0] + "'",
                        line.number);
    }
  }
  try {
    amps.validate();
  } catch (const std::exception& e) {
    throw parse_error(e.what());
  }
  return amps;
}

std::string write_amplitude_file(const ClusterAmplitudes& amps) {
  std::ostringstream out;
  out << "modes " << amps.n_modes << "\nelectrons " << amps.n_electrons << "\n";
  for (const auto& s : amps.singles)
    out << "single " << s.occupied << " " << s.virt << " " << format_double(s.amplitude)
        << "\n";
  for (const auto& d : amps.doubles)
    out << "double " << d.occupied1 << " " << d.occupied2 << " " << d.virt1 << " "
        << d.virt2 << " " << format_double(d.amplitude) << "\n";
  return out.str();
}

ParsedCircuitFile parse_circuit_file(const std::string& text) {
  // Header comments carry the register width and reference state; without
  // them the width is inferred from the highest qubit index.
  uint32_t declared_qubits = 0;
  uint64_t reference = 0;
  bool has_reference = false;
  {
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
      std::istringstream ls(raw);
      std::string a, b, c;
      ls >> a >> b >> c;
      if (a == "#" && b == "qubits" && !c.empty())
        declared_qubits = static_cast<uint32_t>(std::stoul(c));
      if (a == "#" && b == "reference" && c.rfind("0b", 0) == 0) {
        reference = std::stoull(c.substr(2), nullptr, 2);
        has_reference = true;
      }
    }
  }
  auto lines = tokenize(text);
  uint32_t width = declared_qubits;
  if (width == 0) {
    for (const auto& line : lines) {
      const std::string& op = line.tokens[0];
      size_t qubit_operands = (op == "CNOT" || op == "CRX") ? 2 : 1;
      for (size_t t = 1; t <= qubit_operands && t < line.tokens.size(); ++t) {
        uint64_t v = 0;
        auto [p, ec] = std::from_chars(
            line.tokens[t].data(), line.tokens[t].data() + line.tokens[t].size(), v);
        if (ec == std::errc() && p == line.tokens[t].data() + line.tokens[t].size())
          width = std::max(width, static_cast<uint32_t>(v + 1));
      }
    }
    if (width == 0) width = 1;
  }
  Circuit circuit(width);
  for (const auto& line : lines) {
    const std::string& op = line.tokens[0];
    auto qubit = [&](size_t idx) {
      const auto q = static_cast<uint32_t>(parse_uint(line.tokens[idx], line.number));
      if (q >= width)
        throw parse_error("qubit " + std::to_string(q) + " out of range (qubits " +
                              std::to_string(width) + ")",
                          line.number);
      return q;
    };
    try {
      if (op == "H") {
        expect_tokens(line, 2, "`H <q>`");
        circuit.add_h(qubit(1));
      } else if (op == "X") {
        expect_tokens(line, 2, "`X <q>`");
        circuit.add_x(qubit(1));
      } else if (op == "YB") {
        expect_tokens(line, 2, "`YB <q>`");
        circuit.add_yb(qubit(1));
      } else if (op == "YBDG") {
        expect_tokens(line, 2, "`YBDG <q>`");
        circuit.add_ybdg(qubit(1));
      } else if (op == "RZ") {
        expect_tokens(line, 3, "`RZ <q> <angle>`");
        circuit.add_rz(qubit(1), parse_double(line.tokens[2], line.number));
      } else if (op == "RX") {
        expect_tokens(line, 3, "`RX <q> <angle>`");
        circuit.add_rx(qubit(1), parse_double(line.tokens[2], line.number));
      } else if (op == "CNOT") {
        expect_tokens(line, 3, "`CNOT <c> <t>`");
        circuit.add_cnot(qubit(1), qubit(2));
      } else if (op == "CRX") {
        expect_tokens(line, 4, "`CRX <c> <t> <angle>`");
        circuit.add_crx(qubit(1), qubit(2), parse_double(line.tokens[3], line.number));
      } else if (op == "U") {
        expect_tokens(line, 10, "`U <q> <8 matrix entries>`");
        double e[8];
        for (int k = 0; k < 8; ++k) e[k] = parse_double(line.tokens[2 + k], line.number);
        Gate1Q g = Gate1Q::non_unitary({e[0], e[1]}, {e[2], e[3]}, {e[4], e[5]},
                                       {e[6], e[7]});
        circuit.add_custom(qubit(1), g);
      } else {
        throw parse_error("unknown op '" + op + "'", line.number);
      }
    } catch (const invalid_gate_error& e) {
      throw parse_error(e.what(), line.number);
    } catch (const index_error& e) {
      throw parse_error(e.what(), line.number);
    }
  }
  return {std::move(circuit), reference, has_reference};
}

std::string write_circuit_file(const Circuit& circuit, uint64_t reference) {
  std::ostringstream out;
  out << "# qubits " << circuit.num_qubits() << "\n";
  out << "# reference 0b";
  for (uint32_t q = circuit.num_qubits(); q-- > 0;) out << ((reference >> q) & 1);
  out << "\n# gates " << circuit.size() << "\n";
  for (const auto& op : circuit.ops()) {
    switch (op.kind) {
      case GateKind::H: out << "H " << op.target; break;
      case GateKind::X: out << "X " << op.target; break;
      case GateKind::YBasis: out << "YB " << op.target; break;
      case GateKind::YBasisDag: out << "YBDG " << op.target; break;
      case GateKind::RZ:
        out << "RZ " << op.target << " " << format_double(op.angle);
        break;
      case GateKind::RX:
        out << "RX " << op.target << " " << format_double(op.angle);
        break;
      case GateKind::CNOT: out << "CNOT " << op.control << " " << op.target; break;
      case GateKind::CRX:
        out << "CRX " << op.control << " " << op.target << " "
            << format_double(op.angle);
        break;
      case GateKind::CPhase:
        throw std::invalid_argument(
            "controlled-phase gates have no circuit-file representation");
      case GateKind::Custom:
        out << "U " << op.target;
        for (cdouble v : {op.gate.u00, op.gate.u01, op.gate.u10, op.gate.u11})
          out << " " << format_double(v.real()) << " " << format_double(v.imag());
        break;
    }
    out << "\n";
  }
  return out.str();
}

NoiseConfig parse_noise_config(const std::string& text) {
  NoiseConfig cfg;
  double m = 0.0, m1 = 0.0, m2 = 0.0;
  bool has_m = false, has_m1 = false, has_m2 = false;
  NoiseScenario::Kind kind = NoiseScenario::Kind::RelaxationDephasing;
  bool has_kind = false;
  NoiseSampling sampling = NoiseSampling::ThreeRotation;
  bool fuse_idle = false;

  std::string normalized = text;
  for (char& ch : normalized)
    if (ch == ',' || ch == ';') ch = ' ';
  std::istringstream in(normalized);
  std::string pair;
  while (in >> pair) {
    auto eq = pair.find('=');
    if (eq == std::string::npos)
      throw parse_error("expected key=value in noise config, got '" + pair + "'");
    std::string key = pair.substr(0, eq), value = pair.substr(eq + 1);
    auto as_double = [&](const std::string& v) {
      if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
      return parse_double(v, -1);
    };
    if (key == "scenario") {
      has_kind = true;
      if (value == "t1tphi") kind = NoiseScenario::Kind::RelaxationDephasing;
      else if (value == "relax") kind = NoiseScenario::Kind::PureRelaxation;
      else if (value == "dephase") kind = NoiseScenario::Kind::PureDephasing;
      else throw parse_error("unknown scenario '" + value + "'");
    } else if (key == "M") {
      has_m = true;
      m = as_double(value);
    } else if (key == "M1") {
      has_m1 = true;
      m1 = as_double(value);
    } else if (key == "M2") {
      has_m2 = true;
      m2 = as_double(value);
    } else if (key == "mode") {
      if (value == "three") sampling = NoiseSampling::ThreeRotation;
      else if (value == "single") sampling = NoiseSampling::SingleRotation;
      else throw parse_error("unknown sampling mode '" + value + "'");
    } else if (key == "fuse_idle") {
      if (value == "on") fuse_idle = true;
      else if (value == "off") fuse_idle = false;
      else throw parse_error("fuse_idle must be on or off");
    } else if (key == "traj") {
      cfg.trajectories.num_trajectories = parse_uint(value, -1);
    } else if (key == "seed") {
      cfg.trajectories.master_seed = parse_uint(value, -1);
    } else {
      throw parse_error("unknown noise config key '" + key + "'");
    }
  }

  if (has_m1 != has_m2)
    throw parse_error("M1 and M2 must be given together");
  if (has_m1 && (has_m || has_kind))
    throw parse_error("give either scenario/M or explicit M1/M2, not both");
  if (has_m1) {
    cfg.model = NoiseModel::from_coherence(m1, m2, sampling);
  } else if (has_m || has_kind) {
    if (!has_m) throw parse_error("scenario requires M=<real>");
    cfg.scenario = {kind, m};
    cfg.has_scenario = true;
    cfg.model = NoiseModel::from_scenario(cfg.scenario, sampling);
  }
  cfg.model.fuse_idle = fuse_idle;
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace qsim
