#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ringdisp {

// Caller broke a documented precondition (bad bit index, bad window, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Inconsistent placement or configuration handed to the engine.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A robot state reached something the protocol forbids (e.g. a status back-edge).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t line, std::string rule, const std::string& message)
      : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line),
        rule_(std::move(rule)) {}

  /// 1-based source line, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::size_t line_;
  std::string rule_;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ringdisp
