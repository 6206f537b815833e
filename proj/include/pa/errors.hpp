#pragma once

#include <stdexcept>
#include <string>

namespace pa {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance could not be Cholesky-factorized, even after the escalating
/// jitter policy.
class SingularCovariance : public Error {
 public:
  using Error::Error;
};

/// Every log-value in a weight computation was -inf; no usable weights exist.
class DegenerateWeights : public Error {
 public:
  using Error::Error;
};

/// Config-file parse or validation failure. Messages carry the line number
/// and the offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while emitting results; messages carry the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pa
