#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace vc {

inline constexpr std::uint64_t kModulus = (std::uint64_t{1} << 61) - 1;

// Element of GF(2^61 - 1), always stored in canonical form [0, q).
class Fe {
 public:
  constexpr Fe() = default;
  // Reduces any 64-bit value.
  constexpr explicit Fe(std::uint64_t v) : v_(reduce64(v)) {}

  static constexpr Fe zero() { return Fe(); }
  static constexpr Fe one() { return Fe(1); }
  static constexpr Fe from_canonical(std::uint64_t v) {
    Fe f;
    f.v_ = v;
    return f;
  }

  constexpr std::uint64_t value() const { return v_; }

  friend constexpr Fe operator+(Fe a, Fe b) {
    std::uint64_t s = a.v_ + b.v_;
    s = (s & kModulus) + (s >> 61);
    return from_canonical(s == kModulus ? 0 : s);
  }
  friend constexpr Fe operator-(Fe a, Fe b) {
    return from_canonical(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + kModulus - b.v_);
  }
  friend constexpr Fe operator-(Fe a) { return from_canonical(a.v_ == 0 ? 0 : kModulus - a.v_); }
  friend constexpr Fe operator*(Fe a, Fe b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a.v_) * b.v_;
    std::uint64_t lo = static_cast<std::uint64_t>(p) & kModulus;
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t s = lo + hi;
    s = (s & kModulus) + (s >> 61);
    return from_canonical(s == kModulus ? 0 : s);
  }
  constexpr Fe& operator+=(Fe b) { return *this = *this + b; }
  constexpr Fe& operator-=(Fe b) { return *this = *this - b; }
  constexpr Fe& operator*=(Fe b) { return *this = *this * b; }
  friend constexpr bool operator==(Fe a, Fe b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(Fe a, Fe b) { return a.v_ != b.v_; }

  constexpr bool is_zero() const { return v_ == 0; }
  Fe pow(std::uint64_t e) const;
  // Throws std::domain_error("no inverse of zero") for zero.
  Fe inv() const;

 private:
  static constexpr std::uint64_t reduce64(std::uint64_t v) {
    v = (v & kModulus) + (v >> 61);
    return v >= kModulus ? v - kModulus : v;
  }
  std::uint64_t v_ = 0;
};

inline constexpr Fe add(Fe a, Fe b) { return a + b; }
inline constexpr Fe sub(Fe a, Fe b) { return a - b; }
inline constexpr Fe mul(Fe a, Fe b) { return a * b; }
inline constexpr Fe neg(Fe a) { return -a; }
inline Fe inv(Fe a) { return a.inv(); }

// Maps a signed integer with |d| < q to d mod q; throws std::out_of_range otherwise.
Fe encode_signed(std::int64_t d);

// Signed view of a field element: values above q/2 are returned as negatives.
std::int64_t decode_signed(Fe a);

using Rng = std::mt19937_64;

Fe random_element(Rng& rng);
Fe random_nonzero(Rng& rng);
std::vector<Fe> random_vector(Rng& rng, std::size_t n);

// Little-endian 8-byte canonical encoding.
void append_le(std::vector<std::uint8_t>& out, Fe a);
// Throws std::invalid_argument if the encoded value is not canonical.
Fe load_le(std::span<const std::uint8_t, 8> bytes);

std::ostream& operator<<(std::ostream& os, Fe a);

}  // namespace vc
