#pragma once

#include <stdexcept>
#include <string>

namespace ergo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: dimension or arity mismatch, invalid parameters, malformed
/// config. The CLI maps this to exit status 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A declared cap was hit (term count, cube order, cloud size, integer
/// range). The CLI maps this to exit status 3.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Checked 64-bit frequency arithmetic overflowed.
class OverflowError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

}  // namespace ergo
