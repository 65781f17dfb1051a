#pragma once

#include <cstdint>
#include <string>

#include "orbdiam/errors.hpp"

namespace orbdiam {

using Residue = std::uint32_t;

// Largest supported prime. Products of two residues stay well inside 64 bits
// and every index over F_p^d fits the 32-bit Index type (see space.hpp).
inline constexpr std::uint32_t kMaxPrime = 65521;

constexpr bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2) {
    if (n % f == 0) return false;
  }
  return true;
}

// Arithmetic context for F_p. Elements are bare residues in [0, p); the modulus
// lives here rather than in every scalar.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw InvalidArgument("modulus " + std::to_string(p) + " is not prime");
    if (p > kMaxPrime) throw InvalidArgument("prime " + std::to_string(p) + " exceeds supported maximum");
  }

  std::uint32_t p() const noexcept { return p_; }

  Residue reduce(std::int64_t x) const noexcept {
    auto r = x % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Residue>(r);
  }

  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
  }

  Residue pow(Residue a, std::uint64_t e) const noexcept {
    Residue result = 1 % p_;
    while (e) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  Residue inv(Residue a) const {
    if (a % p_ == 0) throw InvalidArgument("zero has no inverse in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
  }

  // i! mod p; zero once i >= p.
  Residue factorial(std::uint32_t i) const noexcept {
    Residue f = 1 % p_;
    for (std::uint32_t j = 2; j <= i; ++j) f = mul(f, j % p_);
    return f;
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

// x(x-1)...(x-i+1) / i! evaluated in F_p. Requires i < p so that i! is a unit.
inline Residue binom_mod_p(const PrimeField& field, Residue x, std::uint32_t i) {
  if (i >= field.p()) {
    throw InvalidArgument("binomial index " + std::to_string(i) + " must be below p=" + std::to_string(field.p()));
  }
  Residue numerator = 1 % field.p();
  for (std::uint32_t j = 0; j < i; ++j) {
    numerator = field.mul(numerator, field.sub(x % field.p(), j % field.p()));
  }
  return field.mul(numerator, field.inv(field.factorial(i)));
}

}  // namespace orbdiam
