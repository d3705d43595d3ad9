#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kpflow {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// knapsack
class CapacityTooLarge : public Error { using Error::Error; };
class InstanceTooLarge : public Error { using Error::Error; };
class InvalidInstance : public Error { using Error::Error; };

// bpso
class DimensionMismatch : public Error { using Error::Error; };
class InvalidBpsoConfig : public Error { using Error::Error; };

// tos
class NonPositiveSize : public Error {
 public:
  NonPositiveSize(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  explicit NonPositiveSize(const std::string& what) : Error(what) {}

  /// Offending position in a batch call; 0 for single-value calls.
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_ = 0;
};
class InvalidTosTable : public Error { using Error::Error; };

// topology
class InvalidK : public Error { using Error::Error; };
class UnknownHost : public Error { using Error::Error; };
class UnknownPair : public Error { using Error::Error; };
class InvalidTopology : public Error { using Error::Error; };

// traffic
class PatternInfeasible : public Error { using Error::Error; };
class InvalidWorkload : public Error { using Error::Error; };

// schedulers
class ZeroCapacity : public Error { using Error::Error; };
class InvalidGroup : public Error { using Error::Error; };

// simengine
class MissingDecision : public Error { using Error::Error; };
class InvalidPath : public Error { using Error::Error; };
class NoTraffic : public Error { using Error::Error; };
class InvalidSimConfig : public Error { using Error::Error; };

// cli / experiment
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};
class IoError : public Error { using Error::Error; };

}  // namespace kpflow
