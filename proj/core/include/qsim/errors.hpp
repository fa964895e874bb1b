#pragma once

#include <stdexcept>
#include <string>

namespace qsim {

/// Raised when an allocation request exceeds the configured state-vector
/// memory bound. The message names the required bytes (16 per amplitude).
class capacity_error : public std::runtime_error {
 public:
  capacity_error(const std::string& what, uint64_t required)
      : std::runtime_error(what), required_bytes(required) {}
  uint64_t required_bytes;
};

class index_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class invalid_gate_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input; carries the 1-based line number when known.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, int line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what
                                     : what),
        line_number(line) {}
  int line_number;
};

class transport_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsim
