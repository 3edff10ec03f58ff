#pragma once

#include <stdexcept>

namespace kgsig {

/// Rejected experiment configuration. The command-line front end maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An adaptive procedure (time window doubling, reconstruction tolerance) did not
/// reach its target. Exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kgsig
