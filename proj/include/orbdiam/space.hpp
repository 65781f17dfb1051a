#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orbdiam/errors.hpp"
#include "orbdiam/field.hpp"
#include "orbdiam/linalg.hpp"

namespace orbdiam {

// Vectors of F_p^d are interned as index = sum_i v_i * p^i.
using Index = std::uint32_t;

// Coordinates packed into fixed-width bit fields of a 64-bit word, used for
// branch-free coordinate-wise addition in the hot loops.
using Packed = std::uint64_t;

// Largest |V| = p^d accepted. Bitmaps over V stay below 256 MiB.
inline constexpr std::uint64_t kMaxSpaceSize = std::uint64_t{1} << 31;

class VectorSpace {
 public:
  VectorSpace(std::uint32_t p, std::size_t d) : field_(p), d_(d) {
    if (d == 0) throw InvalidArgument("dimension must be positive");
    std::uint64_t size = 1;
    powers_.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
      powers_.push_back(static_cast<Index>(size));
      size *= p;
      if (size > kMaxSpaceSize) {
        throw CapExceeded("p^d exceeds the supported space size 2^31 (p=" + std::to_string(p) +
                          ", d=" + std::to_string(d) + ")");
      }
    }
    size_ = size;

    // Field width: one spare bit above p so that a sum of two residues plus
    // the bias 2^(w-1) - p sets the top bit exactly when the sum is >= p.
    width_ = static_cast<unsigned>(std::bit_width(p)) + 1;
    if (width_ * d_ > 64) throw CapExceeded("packed representation does not fit 64 bits");
    for (std::size_t i = 0; i < d_; ++i) {
      const unsigned shift = static_cast<unsigned>(i) * width_;
      high_bits_ |= Packed{1} << (shift + width_ - 1);
      bias_ |= ((Packed{1} << (width_ - 1)) - p) << shift;
    }
    field_mask_ = (Packed{1} << width_) - 1;

    // Unpacking goes through per-chunk lookup tables of at most 2^16 entries.
    const std::size_t fields_per_chunk = std::max<std::size_t>(1, 16 / width_);
    for (std::size_t first = 0; first < d_; first += fields_per_chunk) {
      const std::size_t count = std::min(fields_per_chunk, d_ - first);
      Chunk chunk{static_cast<unsigned>(first) * width_, static_cast<unsigned>(count) * width_, {}};
      chunk.table.assign(std::size_t{1} << chunk.bits, 0);
      for (std::size_t key = 0; key < chunk.table.size(); ++key) {
        Index idx = 0;
        bool valid = true;
        for (std::size_t f = 0; f < count; ++f) {
          const auto digit = static_cast<Index>((key >> (f * width_)) & field_mask_);
          if (digit >= p) valid = false;
          idx += digit * powers_[first + f];
        }
        chunk.table[key] = valid ? idx : 0;
      }
      chunks_.push_back(std::move(chunk));
    }
  }

  std::uint32_t p() const noexcept { return field_.p(); }
  std::size_t dim() const noexcept { return d_; }
  std::uint64_t size() const noexcept { return size_; }
  const PrimeField& field() const noexcept { return field_; }

  Index encode(std::span<const Residue> coords) const {
    if (coords.size() != d_) throw DimensionMismatch("encode");
    Index idx = 0;
    for (std::size_t i = 0; i < d_; ++i) idx += coords[i] * powers_[i];
    return idx;
  }

  Index index_of(const FpVector& v) const {
    if (v.p() != p()) throw ModulusMismatch("index_of");
    return encode(v.coords());
  }

  std::vector<Residue> decode(Index idx) const {
    std::vector<Residue> out(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      out[i] = idx % p();
      idx /= p();
    }
    return out;
  }

  FpVector vector_at(Index idx) const { return FpVector(p(), decode(idx)); }

  Packed pack(Index idx) const noexcept {
    Packed out = 0;
    for (std::size_t i = 0; i < d_; ++i) {
      out |= Packed{idx % p()} << (i * width_);
      idx /= p();
    }
    return out;
  }

  Packed pack(std::span<const Residue> coords) const noexcept {
    Packed out = 0;
    for (std::size_t i = 0; i < d_; ++i) out |= Packed{coords[i]} << (i * width_);
    return out;
  }

  Index unpack(Packed v) const noexcept {
    Index idx = 0;
    for (const auto& c : chunks_) idx += c.table[(v >> c.shift) & ((Packed{1} << c.bits) - 1)];
    return idx;
  }

  Residue digit(Packed v, std::size_t i) const noexcept {
    return static_cast<Residue>((v >> (i * width_)) & field_mask_);
  }

  // Coordinate-wise a + b mod p.
  Packed add(Packed a, Packed b) const noexcept {
    const Packed s = a + b;
    const Packed over = ((s + bias_) & high_bits_) >> (width_ - 1);
    return s - over * p();
  }

  Index add(Index a, Index b) const noexcept { return unpack(add(pack(a), pack(b))); }

  Index negate(Index a) const {
    auto c = decode(a);
    for (auto& x : c) x = field_.neg(x);
    return encode(c);
  }

  Index scale(Index a, Residue s) const {
    auto c = decode(a);
    for (auto& x : c) x = field_.mul(x, s);
    return encode(c);
  }

 private:
  struct Chunk {
    unsigned shift;
    unsigned bits;
    std::vector<Index> table;
  };

  PrimeField field_;
  std::size_t d_;
  std::uint64_t size_ = 1;
  std::vector<Index> powers_;
  unsigned width_ = 0;
  Packed high_bits_ = 0;
  Packed bias_ = 0;
  Packed field_mask_ = 0;
  std::vector<Chunk> chunks_;
};

// v -> vA on packed vectors: sum of precomputed multiples of the rows of A.
class LinearMap {
 public:
  LinearMap(const VectorSpace& space, const FpMatrix& a) : space_(&space) {
    if (a.p() != space.p()) throw ModulusMismatch("LinearMap");
    if (a.dim() != space.dim()) throw DimensionMismatch("LinearMap");
    const auto p = space.p();
    table_.resize(space.dim() * p);
    for (std::size_t i = 0; i < space.dim(); ++i) {
      const FpVector row = a.row(i);
      for (Residue c = 0; c < p; ++c) table_[i * p + c] = space.pack(vec_scale(row, c).coords());
    }
  }

  Packed apply(Packed v) const noexcept {
    const auto p = space_->p();
    Packed out = 0;
    for (std::size_t i = 0; i < space_->dim(); ++i) out = space_->add(out, table_[i * p + space_->digit(v, i)]);
    return out;
  }

  Index apply(Index v) const noexcept { return space_->unpack(apply(space_->pack(v))); }

 private:
  const VectorSpace* space_;
  std::vector<Packed> table_;
};

// Membership bitmap over [0, p^d).
class IndexedSet {
 public:
  explicit IndexedSet(std::uint64_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  std::uint64_t universe() const noexcept { return universe_; }
  std::uint64_t count() const noexcept { return count_; }
  bool full() const noexcept { return count_ == universe_; }

  bool contains(Index i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }

  // Returns true if i was newly inserted.
  bool insert(Index i) noexcept {
    auto& w = words_[i >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (w & bit) return false;
    w |= bit;
    ++count_;
    return true;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const auto b = static_cast<unsigned>(std::countr_zero(bits));
        f(static_cast<Index>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  std::vector<Index> members() const {
    std::vector<Index> out;
    out.reserve(count_);
    for_each([&](Index i) { out.push_back(i); });
    return out;
  }

  friend bool operator==(const IndexedSet& a, const IndexedSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  std::uint64_t universe_;
  std::vector<std::uint64_t> words_;
  std::uint64_t count_ = 0;
};

}  // namespace orbdiam
