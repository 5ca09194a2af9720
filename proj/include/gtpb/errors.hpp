#pragma once

#include <stdexcept>
#include <string>

namespace gtpb {

// Error taxonomy mirrored by the CLI exit codes:
//   ValidationError -> 2, ResourceError -> 3, NumericError -> 4.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Requested feature is out of scope for this version (e.g. p != 2 projection,
// Fourier extraction on non-integer spectra). Treated as validation at the CLI.
class CapabilityError : public ValidationError {
 public:
  explicit CapabilityError(const std::string& what) : ValidationError(what) {}
};

class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gtpb
