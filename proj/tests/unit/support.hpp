#pragma once

#include <optional>

#include <doctest.h>
#include "common/fixtures.hpp"
#include "morphkit/error.hpp"

namespace testing {

/// Code of the morphkit::Error thrown by f, or nullopt when nothing (or something else) is thrown.
template <class F>
std::optional<morphkit::Errc> error_of(F&& f) {
  try {
    f();
  } catch (const morphkit::Error& e) {
    return e.code();
  } catch (...) {
  }
  return std::nullopt;
}

#define CHECK_ERRC(expr, code) CHECK(::testing::error_of([&] { (void)(expr); }) == std::optional(code))

}  // namespace testing
