#pragma once

#include <stdexcept>
#include <string>

namespace hotspot {

// Input violates a precondition of the requested operation (bad shape, point outside, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation is not available for this domain kind / parameter combination.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bound or property whose hypotheses are not met by the supplied data.
struct InapplicableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver failed to reach its tolerance.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters are mutually inconsistent (e.g. a Young pair that is not a conjugate pair).
struct ConsistencyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed run configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace hotspot
