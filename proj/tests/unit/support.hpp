#pragma once

#include <cmath>
#include <optional>

#include "mottlab/errors.hpp"

namespace testing {

// Kind of the mottlab::Error thrown by f, if any.
template <class F>
std::optional<mottlab::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const mottlab::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing

#define CHECK_ERROR_KIND(expr, k) \
  CHECK(testing::error_kind([&] { (void)(expr); }) == std::optional(k))
