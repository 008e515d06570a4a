#pragma once

#include <stdexcept>
#include <string>

namespace conley {

/// Invalid or inconsistent configuration. `key()` names the offending
/// configuration entry (dotted path, e.g. "grid.n").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A numerical procedure failed (divergence, singular system, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergence : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularJacobian : public NumericError {
 public:
  using NumericError::NumericError;
};

class ContinuationStuck : public NumericError {
 public:
  ContinuationStuck(const std::string& message, double last_good_beta)
      : NumericError(message), last_good_beta_(last_good_beta) {}
  double last_good_beta() const noexcept { return last_good_beta_; }

 private:
  double last_good_beta_;
};

/// An operation was called outside its domain of validity.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A structural property that must hold did not (∂∂ ≠ 0, block not isolating).
class PropertyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conley
