#pragma once

#include <stdexcept>
#include <string>

namespace nsg {

/// Malformed input: bad spec, dimension mismatch, non-unit direction.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well formed but outside the domain where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller misuse, e.g. a missing optional parameter or an empty sample set.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Work would exceed a hard size guard (path explosion, cover dimension).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsg
