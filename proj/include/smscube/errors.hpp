#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace smscube {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed DIMACS / iCNF input. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An argument lies outside the domain of an operation (e.g. a variable index
// beyond the formula's declared variable count).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A component broke an interface contract (e.g. a propagator returned a
// clause already satisfied by the trail).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Invalid pipeline configuration; carries every problem found, not just the
// first one.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string out = "invalid configuration";
    for (const auto& s : p) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace smscube
