#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "orbdiam/space.hpp"

using namespace orbdiam;

TEST(VectorSpace, EncodeDecodeRoundTrip) {
  const VectorSpace space(3, 2);
  EXPECT_EQ(space.size(), 9u);
  for (Index i = 0; i < space.size(); ++i) EXPECT_EQ(space.encode(space.decode(i)), i);
  EXPECT_EQ(space.index_of(FpVector(3, {1, 2})), 1u + 2u * 3u);
}

TEST(VectorSpace, RejectsOversizedSpaces) {
  EXPECT_THROW(VectorSpace(2, 40), CapExceeded);
  EXPECT_THROW(VectorSpace(65521, 3), CapExceeded);
}

class PackedArithmetic : public ::testing::TestWithParam<std::pair<std::uint32_t, std::size_t>> {};

TEST_P(PackedArithmetic, AddMatchesCoordinateOracle) {
  const auto [p, d] = GetParam();
  const VectorSpace space(p, d);
  std::mt19937_64 rng(p * 131 + d);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = static_cast<Index>(rng() % space.size());
    const auto b = static_cast<Index>(rng() % space.size());
    EXPECT_EQ(space.unpack(space.pack(a)), a);
    const auto da = space.decode(a), db = space.decode(b);
    oracle::Vec va(da.begin(), da.end()), vb(db.begin(), db.end());
    const auto expected = oracle::add(va, vb, p);
    std::vector<Residue> coords(expected.begin(), expected.end());
    EXPECT_EQ(space.add(a, b), space.encode(coords));
    EXPECT_EQ(space.add(a, space.negate(a)), 0u);
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, PackedArithmetic,
                         ::testing::Values(std::make_pair(2u, 1u), std::make_pair(2u, 21u), std::make_pair(3u, 5u),
                                           std::make_pair(5u, 3u), std::make_pair(7u, 7u), std::make_pair(11u, 4u),
                                           std::make_pair(89u, 3u), std::make_pair(251u, 3u),
                                           std::make_pair(65521u, 1u)));

TEST(LinearMap, MatchesVecAct) {
  std::mt19937_64 rng(17);
  for (std::uint32_t p : {3u, 7u, 13u}) {
    const std::size_t d = 3;
    std::vector<Residue> e(d * d);
    for (auto& x : e) x = static_cast<Residue>(rng() % p);
    const FpMatrix a(p, d, e);
    const VectorSpace space(p, d);
    const LinearMap map(space, a);
    for (Index i = 0; i < space.size(); ++i) {
      EXPECT_EQ(space.unpack(map.apply(space.pack(i))), space.index_of(vec_act(space.vector_at(i), a)));
    }
  }
}

TEST(IndexedSet, InsertCountFull) {
  IndexedSet s(70);
  EXPECT_TRUE(s.insert(3));
  EXPECT_FALSE(s.insert(3));
  EXPECT_TRUE(s.insert(69));
  EXPECT_EQ(s.count(), 2u);
  EXPECT_EQ(s.members(), (std::vector<Index>{3, 69}));
  for (Index i = 0; i < 70; ++i) s.insert(i);
  EXPECT_TRUE(s.full());
}
