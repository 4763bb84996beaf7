#pragma once

#include <stdexcept>
#include <string>

namespace wyner {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A channel (or quantized channel) with zero norm where a direction is required.
class DegenerateChannel : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent vector lengths or per-cell list sizes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Zero-forcing is infeasible because the desired and interfering channels are parallel.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Codebook request larger than the memory guard allows.
class BudgetTooLarge : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or run configuration. `key()` names the offending parameter.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace wyner
