#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsnav {

/// Malformed input text or binary (PLY headers, config files, feature dumps).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input parsed but the payload is unusable (non-finite values, unreadable file).
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration cannot be satisfied (unknown keys, no free start position).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical fault inside the simulator (non-finite state).
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void throw_load_error_at(const std::string& what, std::size_t index);

}  // namespace gsnav
