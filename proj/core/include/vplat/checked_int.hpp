#pragma once

#include <cstdint>
#include <stdexcept>

namespace vplat {

struct OverflowError : std::runtime_error {
  OverflowError()
      : std::runtime_error("integer overflow in exact lattice arithmetic") {}
};

// Exact 64-bit particle count. Every operation either returns the exact
// result or throws; there is no wraparound path.
struct CheckedInt64 {
  std::int64_t v = 0;

  CheckedInt64() = default;
  constexpr CheckedInt64(std::int64_t x) : v(x) {}

  friend CheckedInt64 operator+(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw OverflowError{};
    return CheckedInt64{r};
  }
  friend CheckedInt64 operator-(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw OverflowError{};
    return CheckedInt64{r};
  }
  friend CheckedInt64 operator*(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw OverflowError{};
    return CheckedInt64{r};
  }
  friend CheckedInt64 operator-(CheckedInt64 a) {
    return CheckedInt64{0} - a;
  }
  CheckedInt64& operator+=(CheckedInt64 b) { return *this = *this + b; }
  CheckedInt64& operator-=(CheckedInt64 b) { return *this = *this - b; }

  friend bool operator==(CheckedInt64, CheckedInt64) = default;
  friend auto operator<=>(CheckedInt64, CheckedInt64) = default;
};

inline CheckedInt64 abs(CheckedInt64 a) {
  return a.v < 0 ? -a : a;
}

}  // namespace vplat
