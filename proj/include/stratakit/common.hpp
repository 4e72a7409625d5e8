#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stratakit {

/// Raised when an operation's precondition does not hold (invalid input
/// structure, unknown ids, non-functorial data, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Human-readable findings of a validator. Empty means "no violation found".
using Diagnostics = std::vector<std::string>;

namespace detail {

struct VectorHash {
  std::size_t operator()(const std::vector<std::size_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::uint64_t pair_key(std::size_t a, std::size_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace detail

/// Upper bound on worker threads, read from STRATAKIT_THREADS (default 1).
inline unsigned thread_budget() {
  if (const char* env = std::getenv("STRATAKIT_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

}  // namespace stratakit
