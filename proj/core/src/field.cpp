#include "vc/field.hpp"

#include <ostream>
#include <stdexcept>

namespace vc {

Fe Fe::pow(std::uint64_t e) const {
  Fe base = *this;
  Fe acc = Fe::one();
  while (e != 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

Fe Fe::inv() const {
  if (is_zero()) throw std::domain_error("no inverse of zero");
  return pow(kModulus - 2);
}

Fe encode_signed(std::int64_t d) {
  // |INT64_MIN| does not fit, and is far above q anyway.
  if (d == INT64_MIN) throw std::out_of_range("encode_signed: |d| >= q");
  std::uint64_t mag = static_cast<std::uint64_t>(d < 0 ? -d : d);
  if (mag >= kModulus) throw std::out_of_range("encode_signed: |d| >= q");
  Fe m = Fe::from_canonical(mag);
  return d < 0 ? -m : m;
}

std::int64_t decode_signed(Fe a) {
  if (a.value() > kModulus / 2) return -static_cast<std::int64_t>(kModulus - a.value());
  return static_cast<std::int64_t>(a.value());
}

Fe random_element(Rng& rng) {
  for (;;) {
    std::uint64_t x = rng() >> 3;
    if (x < kModulus) return Fe::from_canonical(x);
  }
}

Fe random_nonzero(Rng& rng) {
  for (;;) {
    std::uint64_t x = rng() >> 3;
    if (x != 0 && x < kModulus) return Fe::from_canonical(x);
  }
}

std::vector<Fe> random_vector(Rng& rng, std::size_t n) {
  std::vector<Fe> v(n);
  for (auto& x : v) x = random_element(rng);
  return v;
}

void append_le(std::vector<std::uint8_t>& out, Fe a) {
  std::uint64_t v = a.value();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

Fe load_le(std::span<const std::uint8_t, 8> bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if (v >= kModulus) throw std::invalid_argument("non-canonical field element");
  return Fe::from_canonical(v);
}

std::ostream& operator<<(std::ostream& os, Fe a) { return os << a.value(); }

}  // namespace vc
