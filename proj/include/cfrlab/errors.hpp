#pragma once

#include <stdexcept>
#include <string>

namespace cfrlab {

// Bad user input on the command line (unknown rule/game name, bad flag combo).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structurally invalid configuration (spec invariant violation, missing
// baseline curves, checkpoint/game mismatch).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures and malformed persisted artifacts.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lookup of an unknown infoset key.
struct LookupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller broke an API precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Non-finite values surfaced during optimization.
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cfrlab
