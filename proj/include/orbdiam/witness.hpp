#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "orbdiam/diameter.hpp"
#include "orbdiam/errors.hpp"
#include "orbdiam/group.hpp"
#include "orbdiam/linalg.hpp"
#include "orbdiam/parallel.hpp"
#include "orbdiam/power_sums.hpp"
#include "orbdiam/space.hpp"

namespace orbdiam {

enum class Branch { unipotent, trivial };

inline const char* to_string(Branch b) { return b == Branch::unipotent ? "unipotent" : "trivial"; }

inline std::uint64_t headline_bound(std::size_t d) { return 9ull * d * d * d; }

// ---------------------------------------------------------------------------
// Unipotent branch
// ---------------------------------------------------------------------------

// Exponents x_1..x_m for every alpha in F_p with
//   sum_j A^{x_j} = m Id + alpha (A - Id)^{k-1}.
// They depend only on A, so one table serves every orbit.
struct LineExponents {
  FpMatrix element;
  std::size_t k = 0;
  std::size_t m = 0;
  std::vector<std::vector<Residue>> per_alpha;
  std::vector<FpMatrix> powers;  // A^x for x in [0, p)
};

inline LineExponents line_exponents(const FpMatrix& a, std::uint64_t budget = kDefaultSearchBudget) {
  const std::size_t k = nilpotency_degree(a);
  if (k < 2) throw InvalidArgument("line construction needs A != Id");
  LineExponents out{a, k, theorem_unknowns(k), {}, {}};
  const std::uint32_t p = a.p();
  out.per_alpha.reserve(p);
  for (Residue alpha = 0; alpha < p; ++alpha) {
    const PowerSumSystem sys = theorem_rhs(k, alpha, p);
    auto sol = solve(sys, budget);
    if (!sol) {
      throw TheoremViolation("power-sum system for k=" + std::to_string(k) + ", alpha=" + std::to_string(alpha) +
                             ", p=" + std::to_string(p) + " has no solution with m=" + std::to_string(sys.m));
    }
    out.per_alpha.push_back(std::move(sol->values));
  }
  out.powers.reserve(p);
  FpMatrix power = FpMatrix::identity(p, a.dim());
  for (std::uint32_t x = 0; x < p; ++x) {
    out.powers.push_back(power);
    power = mat_mul(power, a);
  }
  if (!power.is_identity()) throw InvalidArgument("A^p != Id; element does not have order p");
  return out;
}

// sum_j C(x_j, i) for i = 0..k-1.
inline std::vector<Residue> binomial_sums(const PrimeField& f, std::span<const Residue> xs, std::size_t k) {
  std::vector<Residue> out(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (auto x : xs) out[i] = f.add(out[i], binom_mod_p(f, x, static_cast<std::uint32_t>(i)));
  }
  return out;
}

// sum_j A^{x_j} == m Id + alpha (A - Id)^{k-1}.
inline bool line_matrix_identity_holds(const LineExponents& ex, Residue alpha) {
  const auto p = ex.element.p();
  const auto d = ex.element.dim();
  FpMatrix lhs = FpMatrix::zero(p, d);
  for (auto x : ex.per_alpha.at(alpha)) lhs = mat_add(lhs, ex.powers[x]);
  const FpMatrix top = mat_pow(mat_sub(ex.element, FpMatrix::identity(p, d)), ex.k - 1);
  const FpMatrix rhs = mat_add(FpMatrix::scalar(p, d, static_cast<Residue>(ex.m % p)), mat_scale(top, alpha));
  return lhs == rhs;
}

// First orbit member v (ascending index) with v (A - Id)^{k-1} != 0.
inline FpVector pick_witness_vector(const VectorSpace& space, const Orbit& orbit, const FpMatrix& a, std::size_t k) {
  const FpMatrix top = mat_pow(mat_sub(a, FpMatrix::identity(a.p(), a.dim())), k - 1);
  if (top.is_zero()) throw InvalidArgument("(A - Id)^{k-1} is zero; k is not the nilpotency degree");
  for (auto idx : orbit.members) {
    FpVector v = space.vector_at(idx);
    if (!vec_act(v, top).is_zero()) return v;
  }
  throw SpanFailure("orbit lies in ker (A - Id)^{k-1}; orbit does not span V");
}

// For every alpha, m members of one orbit summing to base + alpha * direction.
struct LineWitness {
  std::uint32_t orbit_id = 0;
  FpVector v;
  FpVector base;       // m * v
  FpVector direction;  // v (A - Id)^{k-1}, nonzero
  std::size_t k = 0;
  std::size_t m = 0;
  std::vector<std::vector<Index>> per_alpha;
};

inline LineWitness build_line_witness(const VectorSpace& space, const Orbit& orbit, const LineExponents& ex) {
  const auto p = space.p();
  FpVector v = pick_witness_vector(space, orbit, ex.element, ex.k);
  const FpMatrix top = mat_pow(mat_sub(ex.element, FpMatrix::identity(p, space.dim())), ex.k - 1);
  FpVector direction = vec_act(v, top);
  FpVector base = vec_scale(v, static_cast<Residue>(ex.m % p));

  std::vector<Index> images(p);
  for (std::uint32_t x = 0; x < p; ++x) images[x] = space.index_of(vec_act(v, ex.powers[x]));

  LineWitness w{orbit.id, v, base, direction, ex.k, ex.m, {}};
  w.per_alpha.reserve(p);
  for (Residue alpha = 0; alpha < p; ++alpha) {
    std::vector<Index> summands;
    summands.reserve(ex.m);
    for (auto x : ex.per_alpha[alpha]) summands.push_back(images[x]);
    Index sum = 0;
    for (auto s : summands) sum = space.add(sum, s);
    const FpVector expected = vec_add(base, vec_scale(direction, alpha));
    if (sum != space.index_of(expected)) {
      throw TheoremViolation("line summands for alpha=" + std::to_string(alpha) + " miss b + alpha u");
    }
    w.per_alpha.push_back(std::move(summands));
  }
  return w;
}

inline LineWitness build_line_witness(const VectorSpace& space, const Orbit& orbit, const FpMatrix& a) {
  return build_line_witness(space, orbit, line_exponents(a));
}

// Translates g_1..g_d of the line b + F_p u whose directions u g_i form a
// basis, with the per-alpha summand lists already pushed through each g_i.
struct LineCertificate {
  SpanningTranslates translates;
  FpMatrix basis_inverse;  // inverse of the matrix with rows u g_i
  FpVector base_sum;       // sum_i b g_i
  std::vector<std::vector<std::vector<Index>>> translated;  // [i][alpha]
};

inline LineCertificate span_line(const VectorSpace& space, const LineWitness& w, const GroupClosure& g) {
  SpanningTranslates tr = spanning_translates(g, w.direction);
  auto inv = inverse(matrix_from_rows(tr.images));
  if (!inv) throw SpanFailure("translated directions are dependent");
  FpVector base_sum = FpVector::zero(space.p(), space.dim());
  std::vector<std::vector<std::vector<Index>>> translated;
  for (const auto& gi : tr.elements) {
    base_sum = vec_add(base_sum, vec_act(w.base, gi));
    const LinearMap map(space, gi);
    std::vector<std::vector<Index>> lists;
    lists.reserve(w.per_alpha.size());
    for (const auto& summands : w.per_alpha) {
      std::vector<Index> moved;
      moved.reserve(summands.size());
      for (auto s : summands) moved.push_back(map.apply(s));
      lists.push_back(std::move(moved));
    }
    translated.push_back(std::move(lists));
  }
  return LineCertificate{std::move(tr), std::move(*inv), std::move(base_sum), std::move(translated)};
}

// An explicit list of orbit members summing to a target.
struct DecompositionWitness {
  FpVector target;
  std::uint32_t orbit_id = 0;
  Branch branch = Branch::trivial;
  std::vector<Index> summands;
  bool verified = false;

  std::size_t length() const noexcept { return summands.size(); }
};

// Writes w - sum_i b g_i = sum_i lambda_i u g_i and takes the alpha = lambda_i
// list through g_i for each i. Length is always d * m.
inline DecompositionWitness decompose_target(const VectorSpace& space, const FpVector& target,
                                             const LineCertificate& cert, const LineWitness& w) {
  const FpVector lambda = vec_act(vec_sub(target, cert.base_sum), cert.basis_inverse);
  DecompositionWitness out{target, w.orbit_id, Branch::unipotent, {}, false};
  out.summands.reserve(space.dim() * w.m);
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const auto& list = cert.translated[i][lambda[i]];
    out.summands.insert(out.summands.end(), list.begin(), list.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Small-p branch: the line F_p v through zero.
// ---------------------------------------------------------------------------

struct TrivialPlan {
  std::uint32_t orbit_id = 0;
  FpVector v;
  SpanningTranslates translates;
  FpMatrix basis_inverse;
  // [i][lambda] -> (orbit member c * v g_i, copies j) with j * c = lambda and
  // j minimal. c = 1 is always admissible, so copies <= p - 1.
  std::vector<std::vector<std::pair<Index, std::uint32_t>>> cheapest;
};

inline TrivialPlan make_trivial_plan(const OrbitPartition& part, const Orbit& orbit, const GroupClosure& g) {
  const auto& space = part.space;
  const PrimeField& f = space.field();
  const auto p = space.p();
  FpVector v = space.vector_at(orbit.representative);
  SpanningTranslates tr = spanning_translates(g, v);
  auto inv = inverse(matrix_from_rows(tr.images));
  if (!inv) throw SpanFailure("translates of v are dependent");

  std::vector<std::vector<std::pair<Index, std::uint32_t>>> cheapest;
  for (const auto& img : tr.images) {
    std::vector<std::pair<Index, std::uint32_t>> row(p, {0, p});
    row[0] = {0, 0};
    for (Residue c = 1; c < p; ++c) {
      const Index member = space.index_of(vec_scale(img, c));
      if (part.orbit_of[member] != orbit.id) continue;
      for (std::uint32_t j = 1; j < p; ++j) {
        const Residue lambda = f.mul(j, c);
        if (j < row[lambda].second) row[lambda] = {member, j};
      }
    }
    cheapest.push_back(std::move(row));
  }
  return TrivialPlan{orbit.id, std::move(v), std::move(tr), std::move(*inv), std::move(cheapest)};
}

inline DecompositionWitness decompose_target_trivial(const VectorSpace& space, const FpVector& target,
                                                     const TrivialPlan& plan) {
  if (target.p() != space.p() || target.dim() != space.dim()) throw DimensionMismatch("decompose_target_trivial");
  const FpVector lambda = vec_act(target, plan.basis_inverse);
  DecompositionWitness out{target, plan.orbit_id, Branch::trivial, {}, false};
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const auto [member, copies] = plan.cheapest[i][lambda[i]];
    out.summands.insert(out.summands.end(), copies, member);
  }
  return out;
}

inline DecompositionWitness decompose_target_trivial(const OrbitPartition& part, const FpVector& target,
                                                     const Orbit& orbit, const GroupClosure& g) {
  return decompose_target_trivial(part.space, target, make_trivial_plan(part, orbit, g));
}

// Checks sum, orbit membership and length; sets w.verified.
inline bool verify_witness(const OrbitPartition& part, DecompositionWitness& w, std::uint64_t length_bound) {
  const auto& space = part.space;
  Packed sum = 0;
  bool ok = w.length() <= length_bound;
  for (auto s : w.summands) {
    if (part.orbit_of[s] != w.orbit_id) ok = false;
    sum = space.add(sum, space.pack(s));
  }
  ok = ok && space.unpack(sum) == space.index_of(w.target);
  w.verified = ok;
  return ok;
}

// ---------------------------------------------------------------------------
// Whole-instance certification
// ---------------------------------------------------------------------------

enum class BranchChoice { automatic, unipotent, trivial };

inline constexpr std::uint64_t kExhaustiveTargetLimit = 100'000;

struct TargetPolicy {
  enum class Mode { automatic, all, sample };
  Mode mode = Mode::automatic;
  std::size_t samples = 256;
};

struct CertifyOptions {
  BranchChoice branch = BranchChoice::automatic;
  TargetPolicy targets;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  std::uint64_t cap = kDefaultClosureCap;
  std::uint64_t search_budget = kDefaultSearchBudget;
};

struct OrbitCertificate {
  std::uint32_t orbit_id = 0;
  Index representative = 0;
  std::uint64_t size = 0;
  std::uint64_t targets_checked = 0;
  std::uint64_t max_length = 0;
};

struct CertificationReport {
  std::string label;
  std::uint32_t p = 0;
  std::size_t d = 0;
  std::uint64_t group_order = 0;
  Branch branch = Branch::trivial;
  FpMatrix element = FpMatrix::identity(2, 1);  // the order-p element used
  std::size_t k = 0;
  std::optional<std::size_t> m;  // unipotent branch only
  std::uint64_t bound = 0;         // 9 d^3
  std::uint64_t branch_bound = 0;  // d m or d (p - 1)
  bool exhaustive = false;
  std::uint64_t targets_per_orbit = 0;
  std::vector<OrbitCertificate> per_orbit;
  std::uint64_t max_length = 0;
  bool verified = false;
  std::optional<DecompositionWitness> longest;
};

// Order-p element of least nilpotency degree. Starts from find_order_p_element
// and scans the closure only when that element is not already a transvection.
inline FpMatrix select_unipotent_element(const GroupClosure& g) {
  auto first = find_order_p_element(g, g.p);
  if (!first) throw NotApplicable("p does not divide |G|");
  FpMatrix best = *first;
  std::size_t best_k = nilpotency_degree(best);
  const FpMatrix id = FpMatrix::identity(g.p, g.d);
  for (std::size_t i = 0; i < g.elements.size() && best_k > 2; ++i) {
    const FpMatrix n = mat_sub(g.elements[i], id);
    if (n.is_zero()) continue;
    FpMatrix power = n;
    for (std::size_t k = 2; k < best_k && k <= g.p; ++k) {
      power = mat_mul(power, n);
      if (power.is_zero()) {
        best = g.elements[i];
        best_k = k;
        break;
      }
    }
  }
  return best;
}

inline std::vector<Index> certification_targets(const VectorSpace& space, const TargetPolicy& policy,
                                                std::uint64_t seed, bool& exhaustive) {
  using Mode = TargetPolicy::Mode;
  exhaustive = policy.mode == Mode::all || (policy.mode == Mode::automatic && space.size() <= kExhaustiveTargetLimit);
  std::vector<Index> targets;
  if (exhaustive) {
    targets.resize(space.size());
    for (std::uint64_t i = 0; i < space.size(); ++i) targets[i] = static_cast<Index>(i);
    return targets;
  }
  const auto p = space.p();
  const auto d = space.dim();
  std::vector<Residue> all_top(d, p - 1), all_one(d, 1 % p);
  targets.push_back(0);
  targets.push_back(space.encode(all_top));
  targets.push_back(space.encode(all_one));
  for (std::size_t i = 0; i < d; ++i) targets.push_back(space.index_of(FpVector::unit(p, d, i)));
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < policy.samples; ++s) targets.push_back(static_cast<Index>(rng() % space.size()));
  std::vector<Index> unique;
  for (auto t : targets) {
    if (std::find(unique.begin(), unique.end(), t) == unique.end()) unique.push_back(t);
  }
  return unique;
}

inline CertificationReport certify_instance(const AffineInstance& inst, const GroupClosure& g,
                                            const OrbitPartition& part, const CertifyOptions& opt = {}) {
  if (!is_irreducible(part)) throw ReducibleInstance("instance '" + inst.label + "' is reducible");
  if (g.order() % inst.p != 0) throw NotApplicable("p=" + std::to_string(inst.p) + " does not divide |G|=" + std::to_string(g.order()));
  check_unknowns_bound(inst.d);

  const auto& space = part.space;
  CertificationReport rep;
  rep.label = inst.label;
  rep.p = inst.p;
  rep.d = inst.d;
  rep.group_order = g.order();
  rep.bound = headline_bound(inst.d);
  rep.element = select_unipotent_element(g);
  rep.k = nilpotency_degree(rep.element);

  const bool large_p = inst.p >= 9 * inst.d * inst.d;
  switch (opt.branch) {
    case BranchChoice::automatic:
      rep.branch = (rep.k < inst.p && (large_p || rep.k == 2)) ? Branch::unipotent : Branch::trivial;
      break;
    case BranchChoice::unipotent: rep.branch = Branch::unipotent; break;
    case BranchChoice::trivial: rep.branch = Branch::trivial; break;
  }

  std::optional<LineExponents> ex;
  if (rep.branch == Branch::unipotent) {
    ex = line_exponents(rep.element, opt.search_budget);
    for (Residue alpha = 0; alpha < inst.p; ++alpha) {
      if (!line_matrix_identity_holds(*ex, alpha)) {
        throw TheoremViolation("matrix line identity fails at alpha=" + std::to_string(alpha));
      }
    }
    rep.m = ex->m;
    rep.branch_bound = inst.d * ex->m;
    if (rep.branch_bound > 4 * inst.d * inst.d * inst.d) throw TheoremViolation("d m exceeds 4 d^3");
  } else {
    rep.branch_bound = trivial_diameter_bound(inst.p, inst.d);
  }
  const std::uint64_t limit = std::min(rep.bound, rep.branch_bound);

  const std::vector<Index> targets = certification_targets(space, opt.targets, opt.seed, rep.exhaustive);
  rep.targets_per_orbit = targets.size();
  rep.per_orbit.resize(part.orbits.size());
  std::vector<std::optional<DecompositionWitness>> longest(part.orbits.size());

  parallel_for(part.orbits.size(), opt.threads, [&](std::size_t oi) {
    const Orbit& orbit = part.orbits[oi];
    OrbitCertificate& row = rep.per_orbit[oi];
    row.orbit_id = orbit.id;
    row.representative = orbit.representative;
    row.size = orbit.size();

    auto check = [&](DecompositionWitness w) {
      if (!verify_witness(part, w, limit)) {
        throw TheoremViolation("decomposition of target " + std::to_string(space.index_of(w.target)) + " in orbit " +
                               std::to_string(orbit.id) + " failed verification (length " +
                               std::to_string(w.length()) + ", bound " + std::to_string(limit) + ")");
      }
      ++row.targets_checked;
      if (!longest[oi] || w.length() > longest[oi]->length()) {
        row.max_length = w.length();
        longest[oi] = std::move(w);
      }
    };

    if (rep.branch == Branch::unipotent) {
      const LineWitness line = build_line_witness(space, orbit, *ex);
      const LineCertificate cert = span_line(space, line, g);
      for (auto t : targets) check(decompose_target(space, space.vector_at(t), cert, line));
    } else {
      const TrivialPlan plan = make_trivial_plan(part, orbit, g);
      for (auto t : targets) check(decompose_target_trivial(space, space.vector_at(t), plan));
    }
  });

  for (std::size_t i = 0; i < part.orbits.size(); ++i) {
    rep.max_length = std::max(rep.max_length, rep.per_orbit[i].max_length);
    if (longest[i] && (!rep.longest || longest[i]->length() > rep.longest->length())) rep.longest = longest[i];
  }
  rep.verified = true;
  return rep;
}

inline CertificationReport certify_instance(const AffineInstance& inst, const CertifyOptions& opt = {}) {
  const GroupClosure g = close_group(inst, opt.cap);
  const OrbitPartition part = orbits_on_V(inst);
  return certify_instance(inst, g, part, opt);
}

}  // namespace orbdiam
