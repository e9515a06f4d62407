#pragma once

#include <stdexcept>
#include <string>

namespace feathom {

/// Base class for every error raised by the library. The CLI maps any
/// `feathom::Error` to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A feature name or config key that the schema does not know.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (CSV rows, duplicate timestamps, blank cells).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Index or window outside the series.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Graph-level problems: disconnected graphs, zero edge weights.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Values outside their mathematical domain (negative influences, prices).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inputs that are too short or misaligned.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computation that would exceed a configured size limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace feathom
