#pragma once

#include <stdexcept>
#include <string>

namespace facmech {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed call: invalid index, infeasible solution, violated operation
/// precondition. Signals a bug in the caller, not bad input data.
struct UsageError : Error {
    using Error::Error;
};

/// Instance lies outside a mechanism's domain (e.g. a non-homogeneous
/// instance given to a homogeneous-only mechanism).
struct DomainError : Error {
    using Error::Error;
};

/// Bad configuration: out-of-range fixture parameters, incompatible
/// generator/mechanism pairing, unknown identifiers.
struct ConfigError : Error {
    using Error::Error;
};

/// Malformed document or rational string.
struct ParseError : Error {
    using Error::Error;
};

} // namespace facmech
