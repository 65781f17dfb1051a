#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "orbdiam/power_sums.hpp"

using namespace orbdiam;

namespace {

oracle::Vec to_oracle(const std::vector<Residue>& v) { return oracle::Vec(v.begin(), v.end()); }

}  // namespace

TEST(PowerSums, Values) {
  const PrimeField f(7);
  const std::vector<Residue> xs{1, 2, 3};
  EXPECT_EQ(power_sums(f, 3, xs), (std::vector<Residue>{6, 14 % 7, 36 % 7}));
}

TEST(Solve, P37K2M6) {
  const PowerSumSystem sys{37, 2, 6, {0, 4}};
  const auto sol = solve(sys);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->values.size(), 6u);
  EXPECT_TRUE(verify(sys, *sol));
  const auto expected = oracle::first_power_sum_solution(37, 2, 6, {0, 4});
  ASSERT_TRUE(expected.has_value());
  EXPECT_EQ(to_oracle(sol->values), *expected);
}

TEST(Solve, LexFirstMatchesDfsOracleExhaustively) {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    for (std::size_t k = 1; k <= 2; ++k) {
      for (std::size_t m = 1; m <= 3; ++m) {
        for (Residue b1 = 0; b1 < p; ++b1) {
          for (Residue b2 = 0; b2 < (k == 2 ? p : 1); ++b2) {
            std::vector<Residue> rhs{b1};
            if (k == 2) rhs.push_back(b2);
            const PowerSumSystem sys{p, k, m, rhs};
            const auto got = solve(sys);
            const auto want = oracle::first_power_sum_solution(p, k, m, to_oracle(rhs));
            ASSERT_EQ(got.has_value(), want.has_value()) << "p=" << p << " k=" << k << " m=" << m;
            if (got) {
              EXPECT_EQ(to_oracle(got->values), *want);
            }
          }
        }
      }
    }
  }
}

TEST(Solve, NoSolutionIsDistinctFromBudget) {
  // With one unknown, x = 1 forces x^2 = 1.
  EXPECT_FALSE(solve(PowerSumSystem{11, 2, 1, {1, 2}}).has_value());
  EXPECT_THROW(solve(PowerSumSystem{37, 2, 12, {0, 4}}, 1000), SearchBudgetExceeded);
}

TEST(Solve, ValidatesInput) {
  EXPECT_THROW(solve(PowerSumSystem{12, 1, 1, {0}}), InvalidArgument);
  EXPECT_THROW(solve(PowerSumSystem{11, 2, 1, {0}}), DimensionMismatch);
  EXPECT_THROW(solve(PowerSumSystem{11, 1, 1, {11}}), InvalidArgument);
}

TEST(Solve, ScalingSymmetry) {
  // x -> c x maps rhs (b_1, b_2) to (c b_1, c^2 b_2).
  const std::uint32_t p = 13;
  const PrimeField f(p);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const std::vector<Residue> rhs{static_cast<Residue>(rng() % p), static_cast<Residue>(rng() % p)};
    const auto c = static_cast<Residue>(1 + rng() % (p - 1));
    const std::vector<Residue> scaled{f.mul(c, rhs[0]), f.mul(f.mul(c, c), rhs[1])};
    const auto a = solve(PowerSumSystem{p, 2, 2, rhs});
    const auto b = solve(PowerSumSystem{p, 2, 2, scaled});
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      PowerSumSolution moved{a->values};
      for (auto& x : moved.values) x = f.mul(c, x);
      EXPECT_TRUE(verify(PowerSumSystem{p, 2, 2, scaled}, moved));
    }
  }
}

TEST(TheoremSystem, UnknownCounts) {
  EXPECT_EQ(theorem_unknowns(2), 1u);
  EXPECT_EQ(theorem_unknowns(3), 6u);  // ceil(8 ln 2)
  EXPECT_EQ(theorem_unknowns(4), 14u); // ceil(12 ln 3)
  EXPECT_THROW(theorem_unknowns(1), InvalidArgument);
  for (std::size_t d = 2; d <= 12; ++d) EXPECT_NO_THROW(check_unknowns_bound(d));
}

TEST(TheoremSystem, RightHandSides) {
  const auto k2 = theorem_rhs(2, 5, 11);
  EXPECT_EQ(k2.k, 1u);
  EXPECT_EQ(k2.m, 1u);
  EXPECT_EQ(k2.rhs, (std::vector<Residue>{5}));
  const auto k3 = theorem_rhs(3, 7, 89);
  EXPECT_EQ(k3.k, 2u);
  EXPECT_EQ(k3.m, 6u);
  EXPECT_EQ(k3.rhs, (std::vector<Residue>{0, 14}));
  EXPECT_THROW(theorem_rhs(3, 1, 3), InvalidArgument);
}

TEST(Frontier, LinearCaseAlwaysSolvable) {
  const auto rows = solvability_frontier(11, 1, 3);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_TRUE(r.all_solvable);
}

TEST(Frontier, P37K2ReachesFullSolvability) {
  const auto rows = solvability_frontier(37, 2, 7);
  EXPECT_FALSE(rows.front().all_solvable);
  EXPECT_TRUE(rows[5].all_solvable);  // m = 6
  EXPECT_TRUE(rows.back().all_solvable);
}

TEST(Frontier, AgreesWithPerRhsSolve) {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    const auto rows = solvability_frontier(p, 2, 4);
    for (const auto& row : rows) {
      bool all = true;
      std::optional<std::vector<Residue>> first_bad;
      for (Residue b1 = 0; b1 < p && !first_bad; ++b1)
        for (Residue b2 = 0; b2 < p; ++b2) {
          if (!solve(PowerSumSystem{p, 2, row.m, {b1, b2}})) {
            all = false;
            first_bad = std::vector<Residue>{b1, b2};
            break;
          }
        }
      EXPECT_EQ(row.all_solvable, all) << "p=" << p << " m=" << row.m;
      EXPECT_EQ(row.counterexample, first_bad) << "p=" << p << " m=" << row.m;
    }
  }
}

TEST(Frontier, CsvFormat) {
  const auto rows = solvability_frontier(5, 2, 2);
  const auto csv = frontier_csv(rows);
  EXPECT_EQ(csv.rfind("p,k,m,all_solvable,counterexample_rhs_or_empty\n", 0), 0u);
  EXPECT_NE(csv.find("5,2,1,false,0;1\n"), std::string::npos);
}
