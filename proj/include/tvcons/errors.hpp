#pragma once

#include <stdexcept>
#include <string>

namespace tvcons {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node or edge field does not conform to its graph (size or non-finite entry).
class InvalidFieldError : public Error {
 public:
  using Error::Error;
};

class InvalidSubsetError : public Error {
 public:
  using Error::Error;
};

/// Malformed graph input: self-loop, duplicate edge, out-of-range id.
class InvalidGraphError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined on this graph (e.g. dual norm on a disconnected graph).
class UnsupportedGraphError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperationError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive routine was asked to enumerate beyond its configured cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A structural assumption on a gossip matrix does not hold.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tvcons
