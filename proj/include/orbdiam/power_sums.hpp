#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbdiam/errors.hpp"
#include "orbdiam/field.hpp"
#include "orbdiam/space.hpp"

namespace orbdiam {

// x_1^i + ... + x_m^i = rhs[i-1] for i = 1..k over F_p.
struct PowerSumSystem {
  std::uint32_t p = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::vector<Residue> rhs;

  void validate() const {
    if (!is_prime(p)) throw InvalidArgument("power-sum system: p=" + std::to_string(p) + " is not prime");
    if (k == 0 || m == 0) throw InvalidArgument("power-sum system needs k >= 1 and m >= 1");
    if (rhs.size() != k) throw DimensionMismatch("power-sum system: rhs has " + std::to_string(rhs.size()) + " entries, k=" + std::to_string(k));
    for (auto b : rhs) {
      if (b >= p) throw InvalidArgument("power-sum system: rhs entry not reduced mod p");
    }
  }
};

struct PowerSumSolution {
  std::vector<Residue> values;
};

// Upper bound on table entries and on the prefix scan in solve().
inline constexpr std::uint64_t kDefaultSearchBudget = std::uint64_t{1} << 24;

// (sum x_j, sum x_j^2, ..., sum x_j^k).
inline std::vector<Residue> power_sums(const PrimeField& f, std::size_t k, std::span<const Residue> xs) {
  std::vector<Residue> sums(k, 0);
  for (auto x : xs) {
    Residue pw = 1 % f.p();
    for (std::size_t i = 0; i < k; ++i) {
      pw = f.mul(pw, x);
      sums[i] = f.add(sums[i], pw);
    }
  }
  return sums;
}

inline bool verify(const PowerSumSystem& sys, const PowerSumSolution& sol) {
  if (sol.values.size() != sys.m) return false;
  for (auto x : sol.values)
    if (x >= sys.p) return false;
  return power_sums(PrimeField(sys.p), sys.k, sol.values) == sys.rhs;
}

namespace detail {

inline std::uint64_t checked_power(std::uint64_t base, std::size_t e, std::uint64_t budget, const char* what) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > budget / base) throw SearchBudgetExceeded(std::string(what) + " exceeds search budget");
    r *= base;
  }
  return r;
}

// Tuple number `rank` in lexicographic order, most significant coordinate first.
inline void unrank(std::uint64_t rank, std::uint32_t p, std::span<Residue> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Residue>(rank % p);
    rank /= p;
  }
}

}  // namespace detail

// Lexicographically first solution, or nullopt after an exhaustive search.
// Meet in the middle: power-sum vectors of every suffix tuple are indexed
// (keeping the first suffix per vector), then prefixes are scanned in order.
// Throws SearchBudgetExceeded when either half is too large.
inline std::optional<PowerSumSolution> solve(const PowerSumSystem& sys,
                                             std::uint64_t budget = kDefaultSearchBudget) {
  sys.validate();
  const PrimeField f(sys.p);
  const std::size_t left = sys.m / 2;
  const std::size_t right = sys.m - left;
  const std::uint64_t right_count = detail::checked_power(sys.p, right, budget, "suffix table");
  const std::uint64_t left_count = detail::checked_power(sys.p, left, budget, "prefix scan");
  // Keys are power-sum vectors read as base-p numbers.
  const std::uint64_t key_space = detail::checked_power(sys.p, sys.k, std::uint64_t{1} << 62, "key space");

  auto key_of = [&](const std::vector<Residue>& sums) {
    std::uint64_t key = 0;
    for (auto s : sums) key = key * sys.p + s;
    return key;
  };

  constexpr std::uint64_t kNone = ~std::uint64_t{0};
  const bool dense = key_space <= (std::uint64_t{1} << 22);
  std::vector<std::uint64_t> dense_table;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_table;
  if (dense) dense_table.assign(key_space, kNone);

  std::vector<Residue> tuple(right);
  for (std::uint64_t r = 0; r < right_count; ++r) {
    detail::unrank(r, sys.p, tuple);
    const auto key = key_of(power_sums(f, sys.k, tuple));
    if (dense) {
      if (dense_table[key] == kNone) dense_table[key] = r;
    } else {
      sparse_table.try_emplace(key, r);
    }
  }

  std::vector<Residue> prefix(left);
  std::vector<Residue> need(sys.k);
  for (std::uint64_t l = 0; l < left_count; ++l) {
    detail::unrank(l, sys.p, prefix);
    const auto sums = power_sums(f, sys.k, prefix);
    for (std::size_t i = 0; i < sys.k; ++i) need[i] = f.sub(sys.rhs[i], sums[i]);
    const auto key = key_of(need);
    std::uint64_t hit = kNone;
    if (dense) {
      hit = dense_table[key];
    } else if (auto it = sparse_table.find(key); it != sparse_table.end()) {
      hit = it->second;
    }
    if (hit == kNone) continue;
    PowerSumSolution sol;
    sol.values = prefix;
    sol.values.resize(sys.m);
    detail::unrank(hit, sys.p, std::span<Residue>(sol.values).subspan(left));
    return sol;
  }
  return std::nullopt;
}

// Number of unknowns used for a unipotent element of nilpotency degree k:
// max{1, ceil(4(k-1) ln(k-1))}.
inline std::size_t theorem_unknowns(std::size_t k) {
  if (k < 2) throw InvalidArgument("nilpotency degree must be at least 2");
  const double e = static_cast<double>(k - 1);
  const auto m = static_cast<std::size_t>(std::ceil(4.0 * e * std::log(e)));
  return std::max<std::size_t>(1, m);
}

// The (k-1)-equation system with rhs (0, ..., 0, alpha * (k-1)!).
inline PowerSumSystem theorem_rhs(std::size_t k, Residue alpha, std::uint32_t p) {
  if (k < 2 || k >= p) {
    throw InvalidArgument("theorem_rhs: need 2 <= k < p, got k=" + std::to_string(k) + ", p=" + std::to_string(p));
  }
  const PrimeField f(p);
  PowerSumSystem sys;
  sys.p = p;
  sys.k = k - 1;
  sys.m = theorem_unknowns(k);
  sys.rhs.assign(k - 1, 0);
  sys.rhs.back() = f.mul(alpha % p, f.factorial(static_cast<std::uint32_t>(k - 1)));
  return sys;
}

// ceil(4(k-1) ln(k-1)) <= 4d^2 for every 2 <= k <= d.
inline void check_unknowns_bound(std::size_t d) {
  for (std::size_t k = 2; k <= d; ++k) {
    if (theorem_unknowns(k) > 4 * d * d) {
      throw TheoremViolation("unknown count for k=" + std::to_string(k) + " exceeds 4d^2");
    }
  }
}

struct FrontierRow {
  std::uint32_t p = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  bool all_solvable = false;
  std::optional<std::vector<Residue>> counterexample;  // lexicographically first unsolvable rhs
};

// For m = 1..m_max, whether every rhs in F_p^k is solvable with m unknowns.
// The solvable set for m unknowns is the m-fold sumset of the moment curve
// {(x, x^2, ..., x^k)}, grown one summand at a time; this decides every rhs
// exhaustively.
inline std::vector<FrontierRow> solvability_frontier(std::uint32_t p, std::size_t k, std::size_t m_max,
                                                     std::uint64_t budget = kDefaultSearchBudget) {
  if (!is_prime(p)) throw InvalidArgument("frontier: p is not prime");
  if (k == 0 || m_max == 0) throw InvalidArgument("frontier: need k >= 1 and m_max >= 1");
  const std::uint64_t space_size = detail::checked_power(p, k, budget, "rhs space");
  if (space_size * p > budget * 16) throw SearchBudgetExceeded("frontier step cost exceeds budget");
  const PrimeField f(p);

  // Key = b_1 p^(k-1) + ... + b_k so ascending keys are lexicographic in rhs.
  auto key_of = [&](std::span<const Residue> b) {
    std::uint64_t key = 0;
    for (auto x : b) key = key * p + x;
    return static_cast<Index>(key);
  };
  auto rhs_of = [&](Index key) {
    std::vector<Residue> b(k);
    detail::unrank(key, p, b);
    return b;
  };

  std::vector<std::vector<Residue>> curve;
  for (Residue x = 0; x < p; ++x) {
    const Residue xs[1] = {x};
    curve.push_back(power_sums(f, k, xs));
  }

  IndexedSet reachable(space_size);
  for (const auto& c : curve) reachable.insert(key_of(c));
  std::vector<FrontierRow> rows;
  for (std::size_t m = 1;; ++m) {
    FrontierRow row{p, k, m, reachable.full(), std::nullopt};
    if (!row.all_solvable) {
      for (std::uint64_t key = 0; key < space_size; ++key) {
        if (!reachable.contains(static_cast<Index>(key))) {
          row.counterexample = rhs_of(static_cast<Index>(key));
          break;
        }
      }
    }
    rows.push_back(std::move(row));
    if (m == m_max) break;
    IndexedSet grown(space_size);
    std::vector<Residue> b(k);
    reachable.for_each([&](Index key) {
      const auto base = rhs_of(key);
      for (const auto& c : curve) {
        for (std::size_t i = 0; i < k; ++i) b[i] = f.add(base[i], c[i]);
        grown.insert(key_of(b));
      }
    });
    reachable = std::move(grown);
  }
  return rows;
}

inline std::string frontier_csv(const std::vector<FrontierRow>& rows) {
  std::ostringstream out;
  out << "p,k,m,all_solvable,counterexample_rhs_or_empty\n";
  for (const auto& r : rows) {
    out << r.p << ',' << r.k << ',' << r.m << ',' << (r.all_solvable ? "true" : "false") << ',';
    if (r.counterexample) {
      for (std::size_t i = 0; i < r.counterexample->size(); ++i) {
        if (i) out << ';';
        out << (*r.counterexample)[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace orbdiam
