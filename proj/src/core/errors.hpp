#pragma once

#include <stdexcept>
#include <string>

namespace tgp {

// Bad shapes, bad options, bad file contents. Maps to exit code 1 at the CLI.
class validation_error : public std::invalid_argument {
public:
  explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical breakdown that is not a recoverable MCMC rejection (NaN
// log-likelihood, exhausted jitter outside a proposal). Exit code 2.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tgp
