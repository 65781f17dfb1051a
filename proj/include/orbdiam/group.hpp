#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbdiam/errors.hpp"
#include "orbdiam/field.hpp"
#include "orbdiam/linalg.hpp"
#include "orbdiam/space.hpp"

namespace orbdiam {

inline constexpr std::uint64_t kDefaultClosureCap = 1'000'000;

// An affine primitive group VG given by the linear part G = <generators>
// acting on V = F_p^d.
struct AffineInstance {
  std::string label;
  std::uint32_t p = 0;
  std::size_t d = 0;
  std::vector<FpMatrix> generators;

  // Throws InvalidArgument / DimensionMismatch / CapExceeded on a malformed
  // instance. Singular generators are rejected since they do not generate a group.
  void validate() const {
    if (!is_prime(p)) throw InvalidArgument("p=" + std::to_string(p) + " is not prime");
    if (p > kMaxPrime) throw InvalidArgument("p exceeds supported maximum");
    if (d == 0) throw InvalidArgument("d must be at least 1");
    VectorSpace probe(p, d);
    if (generators.empty()) throw InvalidArgument("at least one generator is required");
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const auto& g = generators[i];
      if (g.p() != p) throw ModulusMismatch("generator " + std::to_string(i));
      if (g.dim() != d) throw DimensionMismatch("generator " + std::to_string(i) + " is not d x d");
      if (!is_invertible(g)) throw InvalidArgument("generator " + std::to_string(i) + " is singular");
    }
  }
};

// Elements of <generators> in breadth-first order over words. Element 0 is
// the identity; parent/letter record the BFS tree so each element has a
// reproducible shortest word.
struct GroupClosure {
  std::uint32_t p = 0;
  std::size_t d = 0;
  std::vector<FpMatrix> generators;
  std::vector<FpMatrix> elements;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> letter;

  std::uint64_t order() const noexcept { return elements.size(); }

  // Generator indices whose left-to-right product is elements[i].
  std::vector<std::size_t> word(std::size_t i) const {
    std::vector<std::size_t> w;
    while (i != 0) {
      w.push_back(letter[i]);
      i = parent[i];
    }
    std::reverse(w.begin(), w.end());
    return w;
  }
};

inline GroupClosure close_group(const AffineInstance& inst, std::uint64_t cap = kDefaultClosureCap) {
  inst.validate();
  GroupClosure g;
  g.p = inst.p;
  g.d = inst.d;
  g.generators = inst.generators;
  std::unordered_map<FpMatrix, std::size_t, FpMatrixHash> seen;
  auto push = [&](FpMatrix m, std::size_t parent, std::size_t letter) {
    if (seen.contains(m)) return;
    if (g.elements.size() >= cap) {
      throw CapExceeded("group closure exceeds cap of " + std::to_string(cap) + " elements");
    }
    seen.emplace(m, g.elements.size());
    g.elements.push_back(std::move(m));
    g.parent.push_back(parent);
    g.letter.push_back(letter);
  };
  push(FpMatrix::identity(inst.p, inst.d), 0, 0);
  for (std::size_t head = 0; head < g.elements.size(); ++head) {
    for (std::size_t j = 0; j < inst.generators.size(); ++j) {
      push(mat_mul(g.elements[head], inst.generators[j]), head, j);
    }
  }
  return g;
}

// Least n >= 1 with A^n = Id. Bounded by p^d, the largest element order in GL(d, p).
inline std::uint64_t element_order(const FpMatrix& a) {
  const FpMatrix id = FpMatrix::identity(a.p(), a.dim());
  std::uint64_t limit = 1;
  for (std::size_t i = 0; i < a.dim() && limit < (std::uint64_t{1} << 40); ++i) limit *= a.p();
  FpMatrix power = a;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (power == id) return n;
    power = mat_mul(power, a);
  }
  throw InvalidArgument("matrix has no finite order (singular?)");
}

// Some element of order exactly p, or nullopt iff p does not divide |G|.
// Generators are tried before the closure scan.
inline std::optional<FpMatrix> find_order_p_element(const GroupClosure& g, std::uint32_t p) {
  if (g.order() % p != 0) return std::nullopt;
  auto reduce = [&](const FpMatrix& a) -> std::optional<FpMatrix> {
    const auto n = element_order(a);
    if (n % p != 0) return std::nullopt;
    return mat_pow(a, n / p);
  };
  for (const auto& gen : g.generators) {
    if (auto r = reduce(gen)) return r;
  }
  for (const auto& e : g.elements) {
    if (auto r = reduce(e)) return r;
  }
  // Cauchy's theorem makes this unreachable.
  throw InvalidArgument("p divides |G| but no element of order p was found");
}

inline constexpr std::uint32_t kZeroOrbit = std::numeric_limits<std::uint32_t>::max();

struct Orbit {
  std::uint32_t id = 0;
  Index representative = 0;  // smallest index in the orbit
  std::vector<Index> members;  // ascending

  std::size_t size() const noexcept { return members.size(); }
};

// Partition of V \ {0} into G-orbits, ordered by representative index.
struct OrbitPartition {
  VectorSpace space;
  std::vector<std::uint32_t> orbit_of;  // kZeroOrbit for the zero vector
  std::vector<Orbit> orbits;

  explicit OrbitPartition(VectorSpace s) : space(std::move(s)) {}
};

inline OrbitPartition orbits_on_V(const AffineInstance& inst) {
  inst.validate();
  OrbitPartition part{VectorSpace(inst.p, inst.d)};
  const auto& space = part.space;
  std::vector<LinearMap> maps;
  maps.reserve(inst.generators.size());
  for (const auto& g : inst.generators) maps.emplace_back(space, g);

  constexpr std::uint32_t kUnseen = kZeroOrbit - 1;
  part.orbit_of.assign(space.size(), kUnseen);
  part.orbit_of[0] = kZeroOrbit;
  std::vector<Index> queue;
  for (std::uint64_t start = 1; start < space.size(); ++start) {
    if (part.orbit_of[start] != kUnseen) continue;
    const auto id = static_cast<std::uint32_t>(part.orbits.size());
    Orbit orbit;
    orbit.id = id;
    orbit.representative = static_cast<Index>(start);
    queue.assign(1, static_cast<Index>(start));
    part.orbit_of[start] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Packed v = space.pack(queue[head]);
      for (const auto& m : maps) {
        const Index w = space.unpack(m.apply(v));
        if (part.orbit_of[w] == kUnseen) {
          part.orbit_of[w] = id;
          queue.push_back(w);
        }
      }
    }
    orbit.members = queue;
    std::sort(orbit.members.begin(), orbit.members.end());
    part.orbits.push_back(std::move(orbit));
  }
  return part;
}

inline bool orbit_spans(const VectorSpace& space, const Orbit& orbit) {
  SpanBasis basis(space.p(), space.dim());
  for (auto idx : orbit.members) {
    basis.insert(space.decode(idx));
    if (basis.full()) return true;
  }
  return false;
}

// G is irreducible iff every nonzero orbit spans V: the span of an orbit is
// a G-invariant subspace, and any invariant subspace contains whole orbits.
inline bool is_irreducible(const OrbitPartition& part) {
  return std::all_of(part.orbits.begin(), part.orbits.end(),
                     [&](const Orbit& o) { return orbit_spans(part.space, o); });
}

inline bool is_irreducible(const AffineInstance& inst) { return is_irreducible(orbits_on_V(inst)); }

struct SpanningTranslates {
  std::vector<std::size_t> element_ids;  // indices into GroupClosure::elements
  std::vector<FpMatrix> elements;
  std::vector<FpVector> images;  // u * g_i, a basis of V
};

// Greedy scan of the closure in enumeration order, keeping elements whose
// image of u enlarges the span.
inline SpanningTranslates spanning_translates(const GroupClosure& g, const FpVector& u) {
  if (u.is_zero()) throw SpanFailure("spanning_translates needs a nonzero vector");
  SpanningTranslates out;
  SpanBasis basis(g.p, g.d);
  for (std::size_t i = 0; i < g.elements.size() && !basis.full(); ++i) {
    FpVector img = vec_act(u, g.elements[i]);
    if (basis.insert(img.coords())) {
      out.element_ids.push_back(i);
      out.elements.push_back(g.elements[i]);
      out.images.push_back(std::move(img));
    }
  }
  if (!basis.full()) throw SpanFailure("translates of u span only a rank " + std::to_string(basis.rank()) + " subspace");
  return out;
}

}  // namespace orbdiam
