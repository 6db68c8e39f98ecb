#pragma once

#include <stdexcept>
#include <string>

namespace dbar {

enum class ErrorKind {
  Geometry,          // bad curve, scaling out of range
  Parameter,         // invalid sizes, exponents, mismatched grids
  DomainMembership,  // point outside the domain where an interior point is required
  Singularity,       // evaluation on (or too close to) the kernel diagonal
  Data,              // unbounded / inconsistent / insufficiently smooth data
  Precondition,      // numerical hypothesis check failed
  Unsupported,       // documented scale limit exceeded
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace dbar
