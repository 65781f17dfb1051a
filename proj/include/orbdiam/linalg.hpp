#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orbdiam/errors.hpp"
#include "orbdiam/field.hpp"

namespace orbdiam {

// Row vector over F_p.
class FpVector {
 public:
  FpVector(std::uint32_t p, std::vector<Residue> coords) : p_(p), coords_(std::move(coords)) {
    for (auto c : coords_) {
      if (c >= p_) throw InvalidArgument("vector entry " + std::to_string(c) + " not reduced mod " + std::to_string(p_));
    }
  }

  static FpVector zero(std::uint32_t p, std::size_t d) { return FpVector(p, std::vector<Residue>(d, 0)); }

  static FpVector unit(std::uint32_t p, std::size_t d, std::size_t i) {
    std::vector<Residue> c(d, 0);
    c.at(i) = 1 % p;
    return FpVector(p, std::move(c));
  }

  std::uint32_t p() const noexcept { return p_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  Residue operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Residue>& coords() const noexcept { return coords_; }

  bool is_zero() const noexcept {
    for (auto c : coords_)
      if (c) return false;
    return true;
  }

  friend bool operator==(const FpVector&, const FpVector&) = default;

 private:
  std::uint32_t p_;
  std::vector<Residue> coords_;
};

// Square matrix over F_p, row-major. Acts on row vectors from the right.
class FpMatrix {
 public:
  FpMatrix(std::uint32_t p, std::size_t d, std::vector<Residue> entries)
      : p_(p), d_(d), entries_(std::move(entries)) {
    if (entries_.size() != d_ * d_) {
      throw DimensionMismatch("expected " + std::to_string(d_ * d_) + " entries, got " + std::to_string(entries_.size()));
    }
    for (auto e : entries_) {
      if (e >= p_) throw InvalidArgument("matrix entry " + std::to_string(e) + " not reduced mod " + std::to_string(p_));
    }
  }

  // Reduces arbitrary integers; convenient for literals with negative entries.
  static FpMatrix from_rows(std::uint32_t p, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    const PrimeField field(p);
    std::vector<Residue> e;
    std::size_t d = rows.size();
    for (const auto& row : rows) {
      if (row.size() != d) throw DimensionMismatch("non-square matrix literal");
      for (auto x : row) e.push_back(field.reduce(x));
    }
    return FpMatrix(p, d, std::move(e));
  }

  static FpMatrix identity(std::uint32_t p, std::size_t d) { return scalar(p, d, 1 % p); }

  static FpMatrix scalar(std::uint32_t p, std::size_t d, Residue c) {
    std::vector<Residue> e(d * d, 0);
    for (std::size_t i = 0; i < d; ++i) e[i * d + i] = c;
    return FpMatrix(p, d, std::move(e));
  }

  static FpMatrix zero(std::uint32_t p, std::size_t d) { return FpMatrix(p, d, std::vector<Residue>(d * d, 0)); }

  std::uint32_t p() const noexcept { return p_; }
  std::size_t dim() const noexcept { return d_; }
  Residue operator()(std::size_t i, std::size_t j) const { return entries_[i * d_ + j]; }
  const std::vector<Residue>& entries() const noexcept { return entries_; }

  FpVector row(std::size_t i) const {
    return FpVector(p_, std::vector<Residue>(entries_.begin() + i * d_, entries_.begin() + (i + 1) * d_));
  }

  bool is_zero() const noexcept {
    for (auto e : entries_)
      if (e) return false;
    return true;
  }

  bool is_identity() const noexcept { return *this == identity(p_, d_); }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
  friend auto operator<=>(const FpMatrix& a, const FpMatrix& b) { return a.entries_ <=> b.entries_; }

 private:
  std::uint32_t p_;
  std::size_t d_;
  std::vector<Residue> entries_;
};

struct FpMatrixHash {
  std::size_t operator()(const FpMatrix& m) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto e : m.entries()) {
      h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

namespace detail {

inline void require_compatible(const FpMatrix& a, const FpMatrix& b, const char* op) {
  if (a.p() != b.p()) throw ModulusMismatch(op);
  if (a.dim() != b.dim()) throw DimensionMismatch(op);
}

inline void require_compatible(const FpVector& v, const FpMatrix& a, const char* op) {
  if (v.p() != a.p()) throw ModulusMismatch(op);
  if (v.dim() != a.dim()) throw DimensionMismatch(op);
}

inline void require_compatible(const FpVector& a, const FpVector& b, const char* op) {
  if (a.p() != b.p()) throw ModulusMismatch(op);
  if (a.dim() != b.dim()) throw DimensionMismatch(op);
}

}  // namespace detail

// v * A with the row-vector convention.
inline FpVector vec_act(const FpVector& v, const FpMatrix& a) {
  detail::require_compatible(v, a, "vec_act");
  const std::size_t d = a.dim();
  const std::uint64_t p = a.p();
  std::vector<Residue> out(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < d; ++i) acc += static_cast<std::uint64_t>(v[i]) * a(i, j);
    out[j] = static_cast<Residue>(acc % p);
  }
  return FpVector(a.p(), std::move(out));
}

inline FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b) {
  detail::require_compatible(a, b, "mat_mul");
  const std::size_t d = a.dim();
  const std::uint64_t p = a.p();
  std::vector<Residue> out(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t l = 0; l < d; ++l) acc += static_cast<std::uint64_t>(a(i, l)) * b(l, j);
      out[i * d + j] = static_cast<Residue>(acc % p);
    }
  }
  return FpMatrix(a.p(), d, std::move(out));
}

inline FpMatrix mat_add(const FpMatrix& a, const FpMatrix& b) {
  detail::require_compatible(a, b, "mat_add");
  const PrimeField f(a.p());
  std::vector<Residue> out(a.entries().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.add(a.entries()[i], b.entries()[i]);
  return FpMatrix(a.p(), a.dim(), std::move(out));
}

inline FpMatrix mat_sub(const FpMatrix& a, const FpMatrix& b) {
  detail::require_compatible(a, b, "mat_sub");
  const PrimeField f(a.p());
  std::vector<Residue> out(a.entries().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.sub(a.entries()[i], b.entries()[i]);
  return FpMatrix(a.p(), a.dim(), std::move(out));
}

inline FpMatrix mat_scale(const FpMatrix& a, Residue c) {
  const PrimeField f(a.p());
  std::vector<Residue> out(a.entries().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.mul(a.entries()[i], c % a.p());
  return FpMatrix(a.p(), a.dim(), std::move(out));
}

inline FpMatrix mat_pow(FpMatrix a, std::uint64_t x) {
  FpMatrix result = FpMatrix::identity(a.p(), a.dim());
  while (x) {
    if (x & 1) result = mat_mul(result, a);
    x >>= 1;
    if (x) a = mat_mul(a, a);
  }
  return result;
}

inline FpVector vec_add(const FpVector& a, const FpVector& b) {
  detail::require_compatible(a, b, "vec_add");
  const PrimeField f(a.p());
  std::vector<Residue> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.add(a[i], b[i]);
  return FpVector(a.p(), std::move(out));
}

inline FpVector vec_sub(const FpVector& a, const FpVector& b) {
  detail::require_compatible(a, b, "vec_sub");
  const PrimeField f(a.p());
  std::vector<Residue> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.sub(a[i], b[i]);
  return FpVector(a.p(), std::move(out));
}

inline FpVector vec_scale(const FpVector& a, Residue c) {
  const PrimeField f(a.p());
  std::vector<Residue> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.mul(a[i], c % a.p());
  return FpVector(a.p(), std::move(out));
}

// Least k >= 1 with (A - Id)^k = 0. Throws NotNilpotent if (A - Id)^d != 0.
inline std::size_t nilpotency_degree(const FpMatrix& a) {
  const FpMatrix n = mat_sub(a, FpMatrix::identity(a.p(), a.dim()));
  if (n.is_zero()) return 1;
  FpMatrix power = n;
  for (std::size_t k = 2; k <= a.dim(); ++k) {
    power = mat_mul(power, n);
    if (power.is_zero()) return k;
  }
  throw NotNilpotent("(A - Id)^d is nonzero; matrix is not unipotent");
}

// A^x == sum_{i<k} C(x, i) (A - Id)^i, with x taken mod p.
inline bool binomial_expansion_check(const FpMatrix& a, std::uint64_t x, std::size_t k) {
  const PrimeField field(a.p());
  const std::size_t d = a.dim();
  const FpMatrix n = mat_sub(a, FpMatrix::identity(a.p(), d));
  const auto xr = static_cast<Residue>(x % a.p());
  FpMatrix sum = FpMatrix::zero(a.p(), d);
  FpMatrix n_power = FpMatrix::identity(a.p(), d);
  for (std::size_t i = 0; i < k; ++i) {
    sum = mat_add(sum, mat_scale(n_power, binom_mod_p(field, xr, static_cast<std::uint32_t>(i))));
    n_power = mat_mul(n_power, n);
  }
  return mat_pow(a, x) == sum;
}

// Incremental row-echelon basis of a subspace of F_p^d. Rows are kept with
// distinct pivot columns and unit pivots, so membership tests are a single
// reduction pass.
class SpanBasis {
 public:
  SpanBasis(std::uint32_t p, std::size_t d) : field_(p), d_(d) {}

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t dim() const noexcept { return d_; }
  bool full() const noexcept { return rows_.size() == d_; }

  // Reduces v against the basis; returns the residual.
  std::vector<Residue> reduce(std::vector<Residue> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t col = pivots_[r];
      const Residue c = v[col];
      if (c == 0) continue;
      for (std::size_t j = 0; j < d_; ++j) v[j] = field_.sub(v[j], field_.mul(c, rows_[r][j]));
    }
    return v;
  }

  bool contains(std::span<const Residue> v) const {
    auto r = reduce(std::vector<Residue>(v.begin(), v.end()));
    for (auto x : r)
      if (x) return false;
    return true;
  }

  // Adds v if it is independent of the current rows. Returns true on growth.
  bool insert(std::span<const Residue> v) {
    if (v.size() != d_) throw DimensionMismatch("SpanBasis::insert");
    auto r = reduce(std::vector<Residue>(v.begin(), v.end()));
    std::size_t pivot = d_;
    for (std::size_t j = 0; j < d_; ++j) {
      if (r[j]) {
        pivot = j;
        break;
      }
    }
    if (pivot == d_) return false;
    const Residue scale = field_.inv(r[pivot]);
    for (auto& x : r) x = field_.mul(x, scale);
    // Keep earlier rows reduced at the new pivot.
    for (auto& row : rows_) {
      const Residue c = row[pivot];
      if (c == 0) continue;
      for (std::size_t j = 0; j < d_; ++j) row[j] = field_.sub(row[j], field_.mul(c, r[j]));
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(pivot);
    return true;
  }

 private:
  PrimeField field_;
  std::size_t d_;
  std::vector<std::vector<Residue>> rows_;
  std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const FpMatrix& a) {
  SpanBasis basis(a.p(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) basis.insert(a.row(i).coords());
  return basis.rank();
}

inline std::size_t rank_of(std::span<const FpVector> vectors) {
  if (vectors.empty()) return 0;
  SpanBasis basis(vectors.front().p(), vectors.front().dim());
  for (const auto& v : vectors) basis.insert(v.coords());
  return basis.rank();
}

// Gauss-Jordan inverse; std::nullopt when singular.
inline std::optional<FpMatrix> inverse(const FpMatrix& a) {
  const PrimeField f(a.p());
  const std::size_t d = a.dim();
  std::vector<std::vector<Residue>> aug(d, std::vector<Residue>(2 * d, 0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) aug[i][j] = a(i, j);
    aug[i][d + i] = 1 % a.p();
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    while (pivot < d && aug[pivot][col] == 0) ++pivot;
    if (pivot == d) return std::nullopt;
    std::swap(aug[pivot], aug[col]);
    const Residue s = f.inv(aug[col][col]);
    for (auto& x : aug[col]) x = f.mul(x, s);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      const Residue c = aug[r][col];
      for (std::size_t j = 0; j < 2 * d; ++j) aug[r][j] = f.sub(aug[r][j], f.mul(c, aug[col][j]));
    }
  }
  std::vector<Residue> out;
  out.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i) out.insert(out.end(), aug[i].begin() + d, aug[i].end());
  return FpMatrix(a.p(), d, std::move(out));
}

inline bool is_invertible(const FpMatrix& a) { return rank(a) == a.dim(); }

// Stacks vectors as the rows of a square matrix.
inline FpMatrix matrix_from_rows(std::span<const FpVector> rows) {
  if (rows.empty()) throw DimensionMismatch("matrix_from_rows: no rows");
  const std::size_t d = rows.front().dim();
  if (rows.size() != d) throw DimensionMismatch("matrix_from_rows: need exactly d rows");
  std::vector<Residue> e;
  e.reserve(d * d);
  for (const auto& r : rows) {
    detail::require_compatible(r, rows.front(), "matrix_from_rows");
    e.insert(e.end(), r.coords().begin(), r.coords().end());
  }
  return FpMatrix(rows.front().p(), d, std::move(e));
}

}  // namespace orbdiam
