#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "orbdiam/families.hpp"
#include "orbdiam/group.hpp"

using namespace orbdiam;

namespace {

std::vector<oracle::Mat> oracle_gens(const AffineInstance& inst) {
  std::vector<oracle::Mat> out;
  for (const auto& g : inst.generators) out.push_back(oracle::to_mat(g));
  return out;
}

}  // namespace

TEST(CloseGroup, OrdersMatchFixpointOracle) {
  for (const auto& inst : {wreath_c2_cp(3), sl_natural(2, 3), sl_natural(2, 5), gl_natural(2, 3), sl_natural(3, 2),
                           singer_control(2, 3), sym_square(5)}) {
    const auto g = close_group(inst);
    EXPECT_EQ(g.order(), oracle::closure(oracle_gens(inst), inst.p).size()) << inst.label;
  }
  EXPECT_EQ(close_group(wreath_c2_cp(3)).order(), 24u);
  EXPECT_EQ(close_group(sl_natural(2, 3)).order(), 24u);
}

TEST(CloseGroup, WordsReproduceElements) {
  const auto inst = gl_natural(2, 5);
  const auto g = close_group(inst);
  EXPECT_TRUE(g.elements.front().is_identity());
  for (std::size_t i = 0; i < g.order(); i += 7) {
    FpMatrix acc = FpMatrix::identity(inst.p, inst.d);
    for (auto letter : g.word(i)) acc = mat_mul(acc, inst.generators[letter]);
    EXPECT_EQ(acc, g.elements[i]);
  }
}

TEST(CloseGroup, CapExceeded) { EXPECT_THROW(close_group(gl_natural(2, 11), 100), CapExceeded); }

TEST(AffineInstance, RejectsSingularGenerator) {
  AffineInstance inst{"bad", 5, 2, {FpMatrix::from_rows(5, {{1, 2}, {2, 4}})}};
  EXPECT_THROW(inst.validate(), InvalidArgument);
}

TEST(ElementOrder, Examples) {
  EXPECT_EQ(element_order(FpMatrix::identity(5, 2)), 1u);
  EXPECT_EQ(element_order(FpMatrix::from_rows(5, {{1, 1}, {0, 1}})), 5u);
  EXPECT_EQ(element_order(FpMatrix::from_rows(7, {{2, 0}, {0, 2}})), 3u);
}

TEST(FindOrderP, PresentAndAbsent) {
  const auto diag = close_group(AffineInstance{"diag", 7, 2, {FpMatrix::from_rows(7, {{3, 0}, {0, 5}})}});
  EXPECT_FALSE(find_order_p_element(diag, 7).has_value());

  const auto wreath = close_group(wreath_c2_cp(5));
  const auto a = find_order_p_element(wreath, 5);
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(element_order(*a), 5u);
}

TEST(FindOrderP, ExistsIffPDividesOrder) {
  for (const auto& inst : {sl_natural(2, 5), singer_control(2, 3), singer_control(2, 5), sym_square(7),
                           gl_natural(2, 3)}) {
    const auto g = close_group(inst);
    const auto a = find_order_p_element(g, inst.p);
    EXPECT_EQ(a.has_value(), g.order() % inst.p == 0) << inst.label;
    if (a) {
      EXPECT_EQ(element_order(*a), inst.p);
    }
  }
}

TEST(Orbits, Examples) {
  const auto gl = orbits_on_V(gl_natural(2, 3));
  ASSERT_EQ(gl.orbits.size(), 1u);
  EXPECT_EQ(gl.orbits[0].size(), 8u);

  const auto inst = wreath_c2_cp(3);
  const auto part = orbits_on_V(inst);
  const Index e1 = part.space.index_of(FpVector::unit(3, 3, 0));
  EXPECT_EQ(part.orbits[part.orbit_of[e1]].size(), 6u);
  const auto expected = oracle::orbit({1, 0, 0}, oracle_gens(inst), 3);
  EXPECT_EQ(part.orbits[part.orbit_of[e1]].size(), expected.size());
}

TEST(Orbits, PartitionInvariants) {
  for (const auto& inst : {wreath_c2_cp(3), wreath_c2_cp(5), sl_natural(3, 3), singer_control(2, 7, 3), sym_square(7)}) {
    const auto g = close_group(inst);
    const auto part = orbits_on_V(inst);
    std::uint64_t total = 0;
    for (const auto& o : part.orbits) {
      total += o.size();
      EXPECT_EQ(g.order() % o.size(), 0u) << inst.label;
      EXPECT_EQ(o.representative, o.members.front());
      EXPECT_TRUE(std::is_sorted(o.members.begin(), o.members.end()));
      for (auto m : o.members) EXPECT_EQ(part.orbit_of[m], o.id);
    }
    EXPECT_EQ(total + 1, part.space.size()) << inst.label;
    EXPECT_EQ(part.orbit_of[0], kZeroOrbit);
  }
}

TEST(Irreducibility, Examples) {
  EXPECT_TRUE(is_irreducible(wreath_c2_cp(3)));
  EXPECT_TRUE(is_irreducible(singer_control(2, 3)));
  EXPECT_TRUE(is_irreducible(sym_square(7)));
  // The cyclic coordinate shift alone fixes the all-ones line.
  AffineInstance perm{"c3", 3, 3, {FpMatrix::from_rows(3, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})}};
  EXPECT_FALSE(is_irreducible(perm));
  AffineInstance upper{"borel", 5, 2, {FpMatrix::from_rows(5, {{1, 1}, {0, 1}})}};
  EXPECT_FALSE(is_irreducible(upper));
}

TEST(SpanningTranslates, ImagesFormBasis) {
  for (const auto& inst : {wreath_c2_cp(5), sl_natural(3, 3), sym_square(11)}) {
    const auto g = close_group(inst);
    const FpVector u = FpVector::unit(inst.p, inst.d, 0);
    const auto tr = spanning_translates(g, u);
    ASSERT_EQ(tr.images.size(), inst.d);
    oracle::Mat rows;
    for (std::size_t i = 0; i < inst.d; ++i) {
      EXPECT_EQ(tr.images[i], vec_act(u, tr.elements[i]));
      EXPECT_EQ(tr.elements[i], g.elements[tr.element_ids[i]]);
      rows.emplace_back(tr.images[i].coords().begin(), tr.images[i].coords().end());
    }
    EXPECT_EQ(oracle::rank(rows, inst.p), inst.d) << inst.label;
  }
}
