#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace necred {

// Exact arbitrary-precision integers and rationals. Counting results (pattern
// counts, code-space sizes) and audit inequalities are computed exactly.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exhaustive passes refuse to start beyond this many elementary evaluations.
inline constexpr std::uint64_t kMaxExhaustiveEvals = std::uint64_t{1} << 40;

// Widest per-edge symbol representable as a packed value.
inline constexpr int kMaxAlphabetBits = 62;

/// Thrown when an exhaustive computation would exceed its state-space cap.
/// Carries the exact size that was refused.
class SizeRefusal : public std::runtime_error {
public:
  SizeRefusal(const std::string& what, BigInt size)
      : std::runtime_error(what + " (size " + size.str() + ")"),
        size_(std::move(size)) {}

  const BigInt& size() const noexcept { return size_; }

private:
  BigInt size_;
};

inline std::uint64_t pow2(int bits) {
  if (bits < 0 || bits > kMaxAlphabetBits)
    throw SizeRefusal("alphabet exceeds representable width",
                      BigInt(1) << (bits < 0 ? 0 : bits));
  return std::uint64_t{1} << bits;
}

}  // namespace necred
