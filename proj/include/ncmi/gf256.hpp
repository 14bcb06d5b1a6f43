#pragma once

#include <array>
#include <cstdint>

#include "ncmi/core.hpp"

namespace ncmi {

class InverseOfZero : public Error {
 public:
  InverseOfZero() : Error("GF(256): zero has no multiplicative inverse") {}
};

namespace gf256_detail {

// x^8 + x^4 + x^3 + x + 1
inline constexpr unsigned kReduction = 0x11B;

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

// 0x03 generates the multiplicative group modulo 0x11B.
constexpr Tables make_tables() {
  Tables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    x ^= x << 1;  // multiply by 0x03
    if (x & 0x100) x ^= kReduction;
  }
  for (unsigned i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

inline constexpr Tables kTables = make_tables();

}  // namespace gf256_detail

struct FieldElement {
  std::uint8_t value = 0;

  constexpr bool is_zero() const { return value == 0; }
  constexpr auto operator<=>(const FieldElement&) const = default;

  friend constexpr FieldElement operator+(FieldElement a, FieldElement b) {
    return FieldElement{static_cast<std::uint8_t>(a.value ^ b.value)};
  }
  // Characteristic 2: subtraction is addition.
  friend constexpr FieldElement operator-(FieldElement a, FieldElement b) { return a + b; }

  friend constexpr FieldElement operator*(FieldElement a, FieldElement b) {
    if (a.value == 0 || b.value == 0) return FieldElement{0};
    const auto& t = gf256_detail::kTables;
    return FieldElement{t.exp[t.log[a.value] + t.log[b.value]]};
  }

  FieldElement& operator+=(FieldElement o) { return *this = *this + o; }
  FieldElement& operator*=(FieldElement o) { return *this = *this * o; }
};

inline constexpr FieldElement kZero{0};
inline constexpr FieldElement kOne{1};

inline FieldElement inverse(FieldElement a) {
  if (a.is_zero()) throw InverseOfZero();
  const auto& t = gf256_detail::kTables;
  return FieldElement{t.exp[255 - t.log[a.value]]};
}

inline FieldElement divide(FieldElement a, FieldElement b) { return a * inverse(b); }

}  // namespace ncmi
