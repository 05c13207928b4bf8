#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ontic {

/// Base class for all failures raised by the rewrite engine.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The expression violates a structural rule of the calculus
/// (e.g. a superposition of states from different domains).
struct IllFormedError : Error {
  using Error::Error;
};

/// No map edge of the requested kind leaves the source domain
/// in the active configuration.
struct UnknownEdgeError : Error {
  using Error::Error;
};

/// Joint superposition of operands that do not share a correlated
/// domain of disjointness.
struct MixedParityError : Error {
  using Error::Error;
};

/// A correlated state has no representation over the requested
/// domain pair and superposition kind.
struct NoRepresentationError : Error {
  using Error::Error;
};

/// A measurement or operation was addressed to the wrong scope
/// (single-system spec on a joint state or vice versa).
struct ScopeMismatchError : Error {
  using Error::Error;
};

/// The requested operation is not defined for the active variant.
struct UndefinedForVariantError : Error {
  using Error::Error;
};

/// Text input that does not match the expression grammar.
struct SyntaxError : Error {
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

/// A domain label outside the active configuration.
struct UnknownDomainError : Error {
  using Error::Error;
};

/// A bounded exhaustive check exceeded its work budget.
struct DepthLimitError : Error {
  using Error::Error;
};

/// A protocol was started from an unusable shared resource state.
struct BadSharedStateError : Error {
  using Error::Error;
};

}  // namespace ontic
