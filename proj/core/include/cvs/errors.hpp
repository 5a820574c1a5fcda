#pragma once

#include <stdexcept>
#include <string>

namespace cvs {

/// Raised when a domain object (tree, config, provider parameter) violates its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for malformed or unknown experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an environment is stepped past termination.
class EpisodeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cvs
