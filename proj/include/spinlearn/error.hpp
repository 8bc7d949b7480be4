#pragma once

#include <stdexcept>
#include <string>

namespace spinlearn {

// Process exit codes used by the command line tool.
enum class ExitCode : int {
  ok = 0,
  config = 2,
  budget = 3,
  invariant = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Malformed input, out-of-range index, dimension mismatch.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::config, what) {}
};

class DimensionError : public ConfigError {
 public:
  explicit DimensionError(const std::string& what) : ConfigError("dimension mismatch: " + what) {}
};

// A requested computation exceeds an enumeration cap or the available samples.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(ExitCode::budget, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(ExitCode::invariant, what) {}
};

#define SPINLEARN_ENSURE(cond, msg)                                      \
  do {                                                                   \
    if (!(cond)) throw ::spinlearn::InvariantError(std::string(msg));    \
  } while (0)

}  // namespace spinlearn
