#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbdiam/errors.hpp"
#include "orbdiam/group.hpp"
#include "orbdiam/parallel.hpp"
#include "orbdiam/space.hpp"

namespace orbdiam {

// { s + t : s in S, t in T }.
inline IndexedSet sumset_add(const VectorSpace& space, const IndexedSet& s, const IndexedSet& t) {
  IndexedSet out(space.size());
  std::vector<Packed> right;
  right.reserve(t.count());
  t.for_each([&](Index i) { right.push_back(space.pack(i)); });
  s.for_each([&](Index i) {
    const Packed a = space.pack(i);
    for (Packed b : right) out.insert(space.unpack(space.add(a, b)));
  });
  return out;
}

// Step bound d(p-1): every spanning connection set reaches V within it.
inline std::uint32_t trivial_diameter_bound(std::uint32_t p, std::size_t d) {
  return static_cast<std::uint32_t>(d * (p - 1));
}

// Least m with m * (C u {0}) = V, iterating S_{m+1} = S_m u (F_m + C) where
// F_m holds the indices first reached at step m.
inline std::uint32_t sumset_diameter(const VectorSpace& space, std::span<const Index> connection) {
  std::vector<Packed> conn;
  conn.reserve(connection.size());
  for (auto c : connection) conn.push_back(space.pack(c));

  const std::uint32_t limit = trivial_diameter_bound(space.p(), space.dim());
  IndexedSet reached(space.size());
  reached.insert(0);
  std::vector<Packed> frontier{0};
  std::vector<Packed> next;
  std::uint32_t m = 0;
  while (!reached.full()) {
    if (frontier.empty() || m == limit) {
      throw NonSpanning("sumset stalled at " + std::to_string(reached.count()) + " of " +
                        std::to_string(space.size()) + " vectors after " + std::to_string(m) + " steps");
    }
    ++m;
    next.clear();
    for (Packed f : frontier) {
      for (Packed c : conn) {
        const Packed s = space.add(f, c);
        if (reached.insert(space.unpack(s))) next.push_back(s);
      }
    }
    frontier.swap(next);
  }
  return m;
}

// Eccentricity of 0 in the Cayley digraph Cay(V, C), by a plain FIFO BFS
// over coordinate vectors. Shares no arithmetic with the packed code paths.
inline std::uint32_t bfs_eccentricity(const VectorSpace& space, std::span<const Index> connection) {
  const PrimeField& f = space.field();
  std::vector<std::vector<Residue>> conn;
  conn.reserve(connection.size());
  for (auto c : connection) conn.push_back(space.decode(c));

  constexpr std::uint32_t kUnreached = ~std::uint32_t{0};
  std::vector<std::uint32_t> dist(space.size(), kUnreached);
  std::deque<Index> queue{0};
  dist[0] = 0;
  std::uint32_t ecc = 0;
  std::uint64_t seen = 1;
  while (!queue.empty()) {
    const Index u = queue.front();
    queue.pop_front();
    const auto coords = space.decode(u);
    std::vector<Residue> w(coords.size());
    for (const auto& c : conn) {
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = f.add(coords[i], c[i]);
      const Index t = space.encode(w);
      if (dist[t] == kUnreached) {
        dist[t] = dist[u] + 1;
        ecc = std::max(ecc, dist[t]);
        ++seen;
        queue.push_back(t);
      }
    }
  }
  if (seen != space.size()) {
    throw NonSpanning("Cayley digraph reaches only " + std::to_string(seen) + " of " + std::to_string(space.size()) +
                      " vectors");
  }
  return ecc;
}

// Same quantity as sumset_diameter for a G-invariant connection set, computed
// on the orbit quotient. Every layer S_m is a union of G-orbits, and the
// orbits met by R + C for an orbit R are exactly those met by rep(R) + C, so
// each orbit needs expanding from its representative only, once.
inline std::uint32_t layered_diameter(const OrbitPartition& part, std::span<const Index> connection) {
  const auto& space = part.space;
  std::vector<Packed> conn;
  conn.reserve(connection.size());
  for (auto c : connection) conn.push_back(space.pack(c));

  const std::uint32_t limit = trivial_diameter_bound(space.p(), space.dim());
  std::vector<char> reached(part.orbits.size(), 0);
  std::size_t remaining = part.orbits.size();
  std::vector<Packed> frontier{0};
  std::vector<Packed> next;
  std::uint32_t m = 0;
  while (remaining > 0) {
    if (frontier.empty() || m == limit) {
      throw NonSpanning("orbit layers stalled with " + std::to_string(remaining) + " orbits unreached after " +
                        std::to_string(m) + " steps");
    }
    ++m;
    next.clear();
    for (Packed rep : frontier) {
      for (Packed c : conn) {
        const auto id = part.orbit_of[space.unpack(space.add(rep, c))];
        if (id == kZeroOrbit || reached[id]) continue;
        reached[id] = 1;
        next.push_back(space.pack(part.orbits[id].representative));
        if (--remaining == 0) break;
      }
      if (remaining == 0) break;
    }
    frontier.swap(next);
  }
  return m;
}

// O u (-O) as a sorted index list.
inline std::vector<Index> symmetrized(const VectorSpace& space, std::span<const Index> members) {
  std::vector<Index> out(members.begin(), members.end());
  for (auto i : members) out.push_back(space.negate(i));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::uint32_t directed_orbit_diameter(const VectorSpace& space, const Orbit& orbit) {
  return sumset_diameter(space, orbit.members);
}

inline std::uint32_t directed_orbit_diameter_bfs(const VectorSpace& space, const Orbit& orbit) {
  return bfs_eccentricity(space, orbit.members);
}

inline std::uint32_t undirected_orbit_diameter(const VectorSpace& space, const Orbit& orbit) {
  return sumset_diameter(space, symmetrized(space, orbit.members));
}

enum class DiameterMethod { layered, sumset, bfs };

inline const char* to_string(DiameterMethod m) {
  switch (m) {
    case DiameterMethod::layered: return "layered";
    case DiameterMethod::sumset: return "sumset";
    case DiameterMethod::bfs: return "bfs";
  }
  return "?";
}

struct DiameterOptions {
  bool undirected = false;
  DiameterMethod method = DiameterMethod::layered;
  unsigned threads = 1;
  std::uint64_t cap = kDefaultClosureCap;
};

struct OrbitDiameter {
  std::uint32_t orbit_id = 0;
  Index representative = 0;
  std::uint64_t size = 0;
  std::uint32_t directed = 0;
  std::optional<std::uint32_t> undirected;
};

struct DiameterReport {
  std::string label;
  std::uint32_t p = 0;
  std::size_t d = 0;
  std::uint64_t group_order = 0;
  DiameterMethod method = DiameterMethod::layered;
  std::vector<OrbitDiameter> per_orbit;
  std::uint32_t overall_directed = 0;
  std::optional<std::uint32_t> overall_undirected;
};

inline DiameterReport instance_diameter(const AffineInstance& inst, const GroupClosure& closure,
                                        const OrbitPartition& part, const DiameterOptions& opt = {}) {
  if (!is_irreducible(part)) throw ReducibleInstance("instance '" + inst.label + "' is reducible");
  DiameterReport report;
  report.label = inst.label;
  report.p = inst.p;
  report.d = inst.d;
  report.group_order = closure.order();
  report.method = opt.method;
  report.per_orbit.resize(part.orbits.size());

  auto compute = [&](std::span<const Index> conn) -> std::uint32_t {
    switch (opt.method) {
      case DiameterMethod::layered: return layered_diameter(part, conn);
      case DiameterMethod::sumset: return sumset_diameter(part.space, conn);
      case DiameterMethod::bfs: return bfs_eccentricity(part.space, conn);
    }
    return 0;
  };

  parallel_for(part.orbits.size(), opt.threads, [&](std::size_t i) {
    const Orbit& o = part.orbits[i];
    OrbitDiameter& row = report.per_orbit[i];
    row.orbit_id = o.id;
    row.representative = o.representative;
    row.size = o.size();
    row.directed = compute(o.members);
    if (opt.undirected) row.undirected = compute(symmetrized(part.space, o.members));
  });

  for (const auto& row : report.per_orbit) {
    report.overall_directed = std::max(report.overall_directed, row.directed);
    if (row.undirected) report.overall_undirected = std::max(report.overall_undirected.value_or(0), *row.undirected);
  }
  return report;
}

inline DiameterReport instance_diameter(const AffineInstance& inst, const DiameterOptions& opt = {}) {
  const GroupClosure closure = close_group(inst, opt.cap);
  const OrbitPartition part = orbits_on_V(inst);
  return instance_diameter(inst, closure, part, opt);
}

}  // namespace orbdiam
