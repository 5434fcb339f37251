#include <gtest/gtest.h>

#include "torsionlab/errors.hpp"
#include "torsionlab/exactla.hpp"
#include "torsionlab/oracle.hpp"
#include "torsionlab/rng.hpp"

using namespace torsionlab;

namespace {

SparseIntMatrix random_matrix(std::size_t rows, std::size_t cols, long bound, CounterRng& rng) {
  std::vector<std::vector<long>> dense(rows, std::vector<long>(cols));
  for (auto& row : dense) {
    for (auto& x : row) x = static_cast<long>(rng.below(2 * bound + 1)) - bound;
  }
  if (rows == 0) return SparseIntMatrix(0);
  return SparseIntMatrix::from_dense(dense);
}

std::vector<mpz_class> factors(std::initializer_list<long> values) {
  std::vector<mpz_class> out;
  for (const long v : values) out.emplace_back(v);
  return out;
}

void expect_matches_minors(const SparseIntMatrix& m) {
  const SmithForm snf = smith_normal_form(m);
  const auto expected = oracle::invariant_factors_from_minors(oracle::to_dense(m));
  ASSERT_EQ(snf.invariant_factors, expected);
  for (std::size_t i = 1; i < snf.rank(); ++i) {
    ASSERT_TRUE(mpz_divisible_p(snf.invariant_factors[i].get_mpz_t(),
                                snf.invariant_factors[i - 1].get_mpz_t()));
  }
  ASSERT_EQ(rank_rational(m), snf.rank());
}

const mpz_class kPrimes[] = {2, 3, 5, 7, 11, 13};

}  // namespace

TEST(Oracle, LaplaceDeterminant) {
  EXPECT_EQ(oracle::laplace_determinant({{2, 0}, {0, 3}}), 6);
  EXPECT_EQ(oracle::laplace_determinant({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}), -3);
  EXPECT_EQ(oracle::laplace_determinant({}), 1);
}

TEST(Smith, Examples) {
  EXPECT_EQ(smith_normal_form(SparseIntMatrix::from_dense({{2, 0}, {0, 3}})).invariant_factors,
            factors({1, 6}));
  EXPECT_TRUE(smith_normal_form(SparseIntMatrix::from_dense({{0}})).invariant_factors.empty());
  EXPECT_TRUE(smith_normal_form(SparseIntMatrix(4)).invariant_factors.empty());
  EXPECT_EQ(smith_normal_form(SparseIntMatrix::from_dense({{2, 4}, {6, 8}})).invariant_factors,
            factors({2, 4}));
  EXPECT_EQ(smith_normal_form(SparseIntMatrix::from_dense({{4, 0}, {0, 6}})).invariant_factors,
            factors({2, 12}));
}

TEST(Smith, MatchesMinorOracle5x5) {
  CounterRng rng(101, 0);
  for (int t = 0; t < 200; ++t) expect_matches_minors(random_matrix(5, 5, 3, rng));
}

TEST(Smith, MatchesMinorOracleUpTo6x6) {
  CounterRng rng(102, 0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t rows = 1 + rng.below(6);
    const std::size_t cols = 1 + rng.below(6);
    expect_matches_minors(random_matrix(rows, cols, 4, rng));
  }
}

TEST(Smith, MatchesMinorOracleOnSparseMatrices) {
  // Mostly-zero entries exercise pivots whose rows or columns empty out early.
  CounterRng rng(103, 0);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::vector<long>> dense(6, std::vector<long>(6, 0));
    for (auto& row : dense) {
      for (auto& x : row) {
        if (rng.below(3) == 0) x = static_cast<long>(rng.below(9)) - 4;
      }
    }
    expect_matches_minors(SparseIntMatrix::from_dense(dense));
  }
}

TEST(Smith, LargeEntriesStayExact) {
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 100);
  const auto m = SparseIntMatrix::from_triplets(2, 2, {{0, 0, big}, {1, 1, big * 3}});
  EXPECT_EQ(smith_normal_form(m).invariant_factors, (std::vector<mpz_class>{big, big * 3}));
}

TEST(Smith, BudgetGuardrail) {
  const auto m = SparseIntMatrix::from_dense({{1, 2}, {3, 4}});
  EXPECT_THROW(smith_normal_form(m, ExactOptions{2}), BudgetError);
  EXPECT_NO_THROW(smith_normal_form(m, ExactOptions{100}));
}

TEST(Cokernel, Examples) {
  const CokernelSummary empty = cokernel(SparseIntMatrix(100));
  EXPECT_EQ(empty.free_rank, 100u);
  EXPECT_FALSE(empty.has_torsion());
  EXPECT_EQ(empty.torsion_order, 1);

  const CokernelSummary two = cokernel(SparseIntMatrix::from_dense({{2}}));
  EXPECT_EQ(two.free_rank, 0u);
  EXPECT_EQ(two.torsion_factors, factors({2}));
  EXPECT_EQ(two.torsion_order, 2);

  const CokernelSummary mixed = cokernel(SparseIntMatrix::from_dense({{2, 0}, {0, 3}, {0, 0}}));
  EXPECT_EQ(mixed.free_rank, 1u);
  EXPECT_EQ(mixed.torsion_factors, factors({6}));
}

TEST(Cokernel, FreeRankPlusRankIsRows) {
  CounterRng rng(104, 0);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_matrix(1 + rng.below(8), rng.below(8), 2, rng);
    const CokernelSummary c = cokernel(m);
    EXPECT_EQ(c.free_rank + rank_rational(m), m.n_rows());
    mpz_class order = 1;
    for (const auto& d : c.torsion_factors) {
      EXPECT_GT(d, 1);
      order *= d;
    }
    EXPECT_EQ(order, c.torsion_order);
  }
}

TEST(Cokernel, TransposeHasSameTorsion) {
  for (std::uint64_t t = 0; t < 150; ++t) {
    const std::size_t k = 3 + t % 2;
    const std::size_t n = 6 + t % 15;
    const std::uint64_t m = std::min<std::uint64_t>(30, edge_space_size(n, k));
    const Hypergraph h = sample_gnm(n, k, 5 + t % (m - 4), 105, t);
    const auto pattern = t % 3 == 0 ? SignPattern::all_ones : SignPattern::alternating;
    const auto a = incidence_matrix(h, pattern);
    EXPECT_EQ(cokernel(a).torsion_factors, cokernel(transpose(a)).torsion_factors);
  }
}

TEST(Cokernel, IncidenceTorsionOrderBound) {
  // Columns of norm sqrt(k): torsion_order^2 <= k^n.
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t k = 3 + t % 3;
    const std::size_t n = 8 + t % 10;
    const Hypergraph h = sample_gnm(n, k, n + t % 7, 106, t);
    const CokernelSummary c = cokernel(incidence_matrix(h, SignPattern::alternating));
    mpz_class bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), k, n);
    EXPECT_LE(c.torsion_order * c.torsion_order, bound);
  }
}

TEST(Cokernel, EvenKAlternatingHasFreeRank) {
  for (std::uint64_t t = 0; t < 60; ++t) {
    const std::size_t k = 2 + 2 * (t % 2);
    const std::size_t n = 6 + t % 6;
    const Hypergraph h = sample_gnm(n, k, edge_space_size(n, k) * (t % 5) / 4, 107, t);
    EXPECT_GE(cokernel(incidence_matrix(h, SignPattern::alternating)).free_rank, 1u);
  }
}

TEST(RankRational, Examples) {
  const Hypergraph one(5, 3, {{1, 2, 4}});
  EXPECT_EQ(rank_rational(incidence_matrix(one, SignPattern::alternating)), 1u);

  const Hypergraph all(4, 3, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}});
  const auto m = incidence_matrix(all, SignPattern::alternating);
  ASSERT_NE(oracle::laplace_determinant(oracle::to_dense(m)), 0);
  EXPECT_EQ(rank_rational(m), 4u);

  EXPECT_EQ(rank_rational(SparseIntMatrix(3)), 0u);
  EXPECT_EQ(rank_rational(SparseIntMatrix::from_dense({{1, 2}, {2, 4}})), 1u);
}

TEST(RankRational, EqualsTransposeRank) {
  CounterRng rng(108, 0);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_matrix(1 + rng.below(8), 1 + rng.below(8), 1, rng);
    EXPECT_EQ(rank_rational(m), rank_rational(transpose(m)));
  }
}

TEST(RankModQ, Examples) {
  const auto two = SparseIntMatrix::from_dense({{2}});
  EXPECT_EQ(rank_mod_q(two, 2), 0u);
  EXPECT_EQ(rank_mod_q(two, 3), 1u);
  EXPECT_THROW(rank_mod_q(two, 1), ParameterError);
  EXPECT_THROW(rank_mod_q(two, 0), ParameterError);
  EXPECT_THROW(rank_mod_q(two, -5), ParameterError);
}

TEST(RankModQ, ArbitraryPrecisionPrime) {
  mpz_class mersenne;
  mpz_ui_pow_ui(mersenne.get_mpz_t(), 2, 89);
  mersenne -= 1;  // prime
  const auto m = SparseIntMatrix::from_triplets(2, 2, {{0, 0, mersenne}, {1, 1, 5}, {0, 1, 1}});
  EXPECT_EQ(rank_mod_q(m, mersenne), 1u);
  EXPECT_EQ(rank_mod_q(m, 5), 1u);
  EXPECT_EQ(rank_mod_q(m, 7), 2u);
  const auto scaled = SparseIntMatrix::from_triplets(1, 1, {{0, 0, mersenne * 2}});
  EXPECT_EQ(rank_mod_q(scaled, mersenne), 0u);
  EXPECT_EQ(rank_mod_q(scaled, 3), 1u);
}

TEST(RankModQ, GapIffPrimeDividesAFactor) {
  CounterRng rng(109, 0);
  for (int t = 0; t < 150; ++t) {
    const auto m = random_matrix(1 + rng.below(6), 1 + rng.below(6), 4, rng);
    const SmithForm snf = smith_normal_form(m);
    for (const mpz_class& q : kPrimes) {
      const std::size_t r = rank_mod_q(m, q);
      ASSERT_LE(r, snf.rank());
      bool divides = false;
      for (const auto& d : snf.invariant_factors) divides |= mpz_divisible_p(d.get_mpz_t(), q.get_mpz_t()) != 0;
      ASSERT_EQ(r < snf.rank(), divides);
      // Over the field, the rank is the number of factors not divisible by q.
      std::size_t units = 0;
      for (const auto& d : snf.invariant_factors) units += mpz_divisible_p(d.get_mpz_t(), q.get_mpz_t()) == 0;
      ASSERT_EQ(r, units);
    }
  }
}

TEST(KernelBasisModQ, VectorsAreInKernel) {
  CounterRng rng(110, 0);
  for (int t = 0; t < 50; ++t) {
    const auto m = random_matrix(1 + rng.below(5), 1 + rng.below(7), 3, rng);
    for (const std::uint64_t q : {2u, 3u, 7u}) {
      const auto basis = kernel_basis_mod_q(m, q);
      EXPECT_EQ(basis.size(), m.n_cols() - rank_mod_q(m, q));
      for (const auto& x : basis) {
        ASSERT_EQ(x.size(), m.n_cols());
        for (std::size_t i = 0; i < m.n_rows(); ++i) {
          mpz_class dot = 0;
          for (std::size_t j = 0; j < m.n_cols(); ++j) dot += m.at(i, j) * mpz_class(std::to_string(x[j]));
          ASSERT_EQ(mpz_class(dot % q), 0);
        }
      }
    }
  }
}
