#pragma once

#include <stdexcept>
#include <string>

namespace forge {

// Base error for all library failures.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed user input (group specs, sigma strings, corpus files).
struct InputError : Error {
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// A configured size bound was exceeded; callers may skip-with-notice.
struct BoundError : Error {
  explicit BoundError(const std::string& msg) : Error(msg) {}
};

}  // namespace forge
