#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbdiam/errors.hpp"
#include "orbdiam/field.hpp"
#include "orbdiam/group.hpp"
#include "orbdiam/linalg.hpp"

namespace orbdiam {

// Expected properties of a generated instance.
struct FamilySpec {
  std::string name;
  std::uint32_t p = 0;
  std::size_t d = 0;
  std::uint64_t extra = 0;
  bool irreducible = true;
  bool p_divides_order = true;
  std::optional<std::uint32_t> diameter;
  std::optional<std::uint64_t> group_order;
};

namespace detail {

inline FpMatrix permutation_like(std::uint32_t p, std::size_t d, Residue wrap_sign) {
  // e_i -> e_{i+1}, e_{d-1} -> wrap_sign * e_0
  std::vector<Residue> e(d * d, 0);
  for (std::size_t i = 0; i + 1 < d; ++i) e[i * d + i + 1] = 1;
  e[(d - 1) * d + 0] = wrap_sign;
  return FpMatrix(p, d, std::move(e));
}

inline Residue primitive_root(std::uint32_t p) {
  const PrimeField f(p);
  for (Residue g = 1; g < p; ++g) {
    std::uint32_t order = 1;
    Residue x = g;
    while (x != 1) {
      x = f.mul(x, g);
      ++order;
    }
    if (order == p - 1) return g;
  }
  throw InvalidArgument("no primitive root");
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    out.push_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

// C_2 wr C_p on F_p^p: one sign change and the cyclic coordinate shift.
inline AffineInstance wreath_c2_cp(std::uint32_t p) {
  if (!is_prime(p) || p == 2) throw InvalidArgument("wreath family needs an odd prime, got " + std::to_string(p));
  const PrimeField f(p);
  std::vector<Residue> flip(p * p, 0);
  for (std::size_t i = 0; i < p; ++i) flip[i * p + i] = 1;
  flip[0] = f.neg(1);
  return AffineInstance{"wreath_c2_c" + std::to_string(p), p, p,
                        {FpMatrix(p, p, std::move(flip)), detail::permutation_like(p, p, 1)}};
}

// SL(d, p): the transvection Id + E_12 and a signed d-cycle of determinant 1.
inline AffineInstance sl_natural(std::size_t d, std::uint32_t p) {
  if (d < 2) throw InvalidArgument("sl family needs d >= 2");
  if (!is_prime(p)) throw InvalidArgument("sl family needs prime p");
  const PrimeField f(p);
  std::vector<Residue> t(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) t[i * d + i] = 1;
  t[1] = 1;
  const Residue sign = (d % 2 == 0) ? f.neg(1) : 1;
  return AffineInstance{"sl_" + std::to_string(d) + "_" + std::to_string(p), p, d,
                        {FpMatrix(p, d, std::move(t)), detail::permutation_like(p, d, sign)}};
}

// GL(d, p): SL generators plus diag(g, 1, ..., 1) for a primitive root g.
inline AffineInstance gl_natural(std::size_t d, std::uint32_t p) {
  AffineInstance inst = sl_natural(d, p);
  inst.label = "gl_" + std::to_string(d) + "_" + std::to_string(p);
  std::vector<Residue> diag(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) diag[i * d + i] = 1;
  diag[0] = detail::primitive_root(p);
  inst.generators.emplace_back(p, d, std::move(diag));
  return inst;
}

// Companion matrix of x^d = c_0 + c_1 x + ... + c_{d-1} x^{d-1}, acting on
// row vectors by multiplication by x in the basis 1, x, ..., x^{d-1}.
inline FpMatrix companion_matrix(std::uint32_t p, const std::vector<Residue>& c) {
  const std::size_t d = c.size();
  std::vector<Residue> e(d * d, 0);
  for (std::size_t i = 0; i + 1 < d; ++i) e[i * d + i + 1] = 1;
  for (std::size_t j = 0; j < d; ++j) e[(d - 1) * d + j] = c[j];
  return FpMatrix(p, d, std::move(e));
}

// First companion matrix (coefficients c read as a base-p number, c_0 least
// significant) whose order is p^d - 1.
inline FpMatrix singer_cycle(std::size_t d, std::uint32_t p) {
  if (!is_prime(p) || d == 0) throw InvalidArgument("singer cycle needs prime p and d >= 1");
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < d; ++i) n *= p;
  const std::uint64_t order = n - 1;
  const auto factors = detail::prime_factors(order);
  const FpMatrix id = FpMatrix::identity(p, d);
  std::vector<Residue> c(d);
  for (std::uint64_t rank = 1; rank < n; ++rank) {
    std::uint64_t r = rank;
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = static_cast<Residue>(r % p);
      r /= p;
    }
    if (c[0] == 0) continue;
    const FpMatrix m = companion_matrix(p, c);
    if (!mat_pow(m, order).is_identity()) continue;
    bool primitive = true;
    for (auto q : factors) {
      if (mat_pow(m, order / q) == id) {
        primitive = false;
        break;
      }
    }
    if (primitive) return m;
  }
  throw InvalidArgument("no primitive companion matrix found");
}

// Cyclic group generated by the power-th power of a Singer cycle; power = 1
// gives the full Singer group of order p^d - 1. Never divisible by p.
inline AffineInstance singer_control(std::size_t d, std::uint32_t p, std::uint64_t power = 1) {
  if (power == 0) throw InvalidArgument("singer power must be positive");
  const FpMatrix gen = mat_pow(singer_cycle(d, p), power);
  std::string label = "singer_" + std::to_string(d) + "_" + std::to_string(p);
  if (power != 1) label += "_pow" + std::to_string(power);
  return AffineInstance{label, p, d, {gen}};
}

// Symmetric square of SL(2, p) acting on F_p^3 (the image is PSL(2, p) =
// Omega(3, p)). Its unipotent elements have nilpotency degree 3.
inline FpMatrix sym_square_of(const FpMatrix& m) {
  if (m.dim() != 2) throw DimensionMismatch("sym_square_of needs a 2x2 matrix");
  const PrimeField f(m.p());
  const Residue a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const Residue two = 2 % m.p();
  return FpMatrix(m.p(), 3,
                  {f.mul(a, a), f.mul(two, f.mul(a, b)), f.mul(b, b),
                   f.mul(a, c), f.add(f.mul(a, d), f.mul(b, c)), f.mul(b, d),
                   f.mul(c, c), f.mul(two, f.mul(c, d)), f.mul(d, d)});
}

inline AffineInstance sym_square(std::uint32_t p) {
  if (!is_prime(p) || p == 2) throw InvalidArgument("sym_square family needs an odd prime");
  const AffineInstance base = sl_natural(2, p);
  AffineInstance inst{"sym2_sl2_" + std::to_string(p), p, 3, {}};
  for (const auto& g : base.generators) inst.generators.push_back(sym_square_of(g));
  return inst;
}

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

inline std::uint64_t sl_order(std::size_t d, std::uint32_t p) {
  std::uint64_t order = ipow(p, d * (d - 1) / 2);
  for (std::size_t i = 2; i <= d; ++i) order *= ipow(p, i) - 1;
  return order;
}

// Builds a family member by name: wreath (p), sl / gl (d, p), singer (d, p,
// extra = power), sym2 (p).
inline AffineInstance make_family(const std::string& name, std::uint32_t p, std::size_t d, std::uint64_t extra = 1) {
  if (name == "wreath") return wreath_c2_cp(p);
  if (name == "sl") return sl_natural(d, p);
  if (name == "gl") return gl_natural(d, p);
  if (name == "singer") return singer_control(d, p, extra == 0 ? 1 : extra);
  if (name == "sym2") return sym_square(p);
  throw InvalidArgument("unknown family '" + name + "' (expected wreath, sl, gl, singer or sym2)");
}

inline FamilySpec describe_family(const std::string& name, std::uint32_t p, std::size_t d, std::uint64_t extra = 1) {
  FamilySpec s{name, p, d, extra, true, true, std::nullopt, std::nullopt};
  if (name == "wreath") {
    s.d = p;
    s.diameter = p * (p - 1) / 2;
    s.group_order = ipow(2, p) * p;
  } else if (name == "sl") {
    s.diameter = 1;
    s.group_order = sl_order(d, p);
  } else if (name == "gl") {
    s.diameter = 1;
    s.group_order = sl_order(d, p) * (p - 1);
  } else if (name == "singer") {
    s.p_divides_order = false;
    if (extra <= 1) {
      s.diameter = 1;
      s.group_order = ipow(p, d) - 1;
    }
  } else if (name == "sym2") {
    s.d = 3;
    s.group_order = static_cast<std::uint64_t>(p) * (static_cast<std::uint64_t>(p) * p - 1) / 2;
  } else {
    throw InvalidArgument("unknown family '" + name + "'");
  }
  return s;
}

}  // namespace orbdiam
