#pragma once

#include <stdexcept>
#include <string>

namespace mottlab {

// Validation errors map to CLI exit code 2, numerical failures to 3.
enum class ErrorKind {
  InvalidParameter,
  Unit,
  UnsupportedBranch,
  UnsupportedOccupation,
  PoleProximity,
  Range,
  InvalidBracket,
  Capacity,
  OutOfBracket,
  Numerical,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::Numerical || kind_ == ErrorKind::OutOfBracket;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidParameter, what);
}

}  // namespace mottlab
