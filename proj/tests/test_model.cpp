#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "torsionlab/errors.hpp"
#include "torsionlab/model.hpp"
#include "torsionlab/rng.hpp"

using namespace torsionlab;

namespace {

std::vector<std::vector<Vertex>> edges_of(const Hypergraph& h) {
  std::vector<std::vector<Vertex>> out;
  for (std::size_t j = 0; j < h.edge_count(); ++j) {
    const auto e = h.edge(j);
    out.emplace_back(e.begin(), e.end());
  }
  return out;
}

// Peels vertices of degree < 2 in an order drawn from rng; returns the
// surviving edge set (original labels) and the surviving vertex set.
std::pair<std::set<std::vector<Vertex>>, std::set<Vertex>> peel_randomly(const Hypergraph& h,
                                                                         CounterRng& rng) {
  std::set<std::vector<Vertex>> edges;
  for (const auto& e : edges_of(h)) edges.insert(e);
  std::set<Vertex> vertices;
  for (Vertex v = 1; v <= h.n(); ++v) vertices.insert(v);
  for (;;) {
    std::vector<Vertex> low;
    for (const Vertex v : vertices) {
      std::size_t deg = 0;
      for (const auto& e : edges) deg += std::count(e.begin(), e.end(), v);
      if (deg < 2) low.push_back(v);
    }
    if (low.empty()) break;
    const Vertex v = low[rng.below(low.size())];
    vertices.erase(v);
    std::erase_if(edges, [v](const std::vector<Vertex>& e) {
      return std::find(e.begin(), e.end(), v) != e.end();
    });
  }
  return {edges, vertices};
}

}  // namespace

TEST(SampleGnp, ProbabilityOneGivesAllEdges) {
  const Hypergraph h = sample_gnp(3, 3, mpq_class(1), 7, 0);
  ASSERT_EQ(h.edge_count(), 1u);
  EXPECT_EQ(edges_of(h), (std::vector<std::vector<Vertex>>{{1, 2, 3}}));
}

TEST(SampleGnp, ProbabilityZeroGivesNoEdges) {
  EXPECT_EQ(sample_gnp(5, 3, mpq_class(0), 7, 0).edge_count(), 0u);
}

TEST(SampleGnp, MeanEdgeCountMatchesBinomial) {
  // Binomial(C(20,3) = 1140, 1/10): mean 114, variance 102.6.
  const int trials = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double m = double(sample_gnp(20, 3, mpq_class(1, 10), 42, t).edge_count());
    sum += m;
    sum_sq += m * m;
  }
  const double mean = sum / trials;
  const double var = sum_sq / trials - mean * mean;
  EXPECT_LE(std::abs(mean - 114.0), 3.0 * std::sqrt(102.6 / trials));
  // Sample variance of 10^4 draws: relative standard error about 1.4%.
  EXPECT_NEAR(var, 102.6, 102.6 * 0.07);
}

TEST(SampleGnp, EdgesAreDistinctAndCanonical) {
  const Hypergraph h = sample_gnp(30, 4, mpq_class(1, 100), 1, 2);
  // Re-validating through the checked constructor must succeed.
  EXPECT_NO_THROW(Hypergraph(h.n(), h.k(), edges_of(h)));
}

TEST(SampleGnp, RejectsBadParameters) {
  EXPECT_THROW(sample_gnp(5, 3, mpq_class(3, 2), 0, 0), ParameterError);
  EXPECT_THROW(sample_gnp(5, 3, mpq_class(-1, 2), 0, 0), ParameterError);
  EXPECT_THROW(sample_gnp(2, 3, mpq_class(1, 2), 0, 0), ParameterError);
  EXPECT_THROW(sample_gnp(5, 1, mpq_class(1, 2), 0, 0), ParameterError);
}

TEST(SampleGnm, FullEdgeCountGivesEveryEdge) {
  const Hypergraph h = sample_gnm(4, 3, 4, 9, 0);
  auto edges = edges_of(h);
  std::sort(edges.begin(), edges.end());
  EXPECT_EQ(edges, (std::vector<std::vector<Vertex>>{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}));
}

TEST(SampleGnm, ZeroEdges) { EXPECT_EQ(sample_gnm(100, 3, 0, 9, 0).edge_count(), 0u); }

TEST(SampleGnm, RejectsTooManyEdges) {
  EXPECT_THROW(sample_gnm(4, 3, 5, 0, 0), ParameterError);
}

TEST(SampleGnm, ExactCountOverManyShapes) {
  for (std::size_t n = 3; n <= 9; ++n) {
    for (std::size_t k = 2; k <= n; ++k) {
      const std::uint64_t space = edge_space_size(n, k);
      for (const std::uint64_t m : {std::uint64_t{0}, space / 3, space / 2 + 1, space}) {
        const Hypergraph h = sample_gnm(n, k, m, n * 31 + k, m);
        ASSERT_EQ(h.edge_count(), m);
        ASSERT_NO_THROW(Hypergraph(n, k, edges_of(h)));
      }
    }
  }
}

TEST(SampleGnm, PairsOfEdgesAreUniform) {
  // H_3(6, 2): C(C(6,3), 2) = 190 equally likely unordered pairs.
  const int per_cell = 100;
  const int trials = 190 * per_cell;
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> counts;
  for (int t = 0; t < trials; ++t) {
    const Hypergraph h = sample_gnm(6, 3, 2, 2024, t);
    std::uint64_t a = colex_rank(h.edge(0));
    std::uint64_t b = colex_rank(h.edge(1));
    if (a > b) std::swap(a, b);
    ++counts[{a, b}];
  }
  ASSERT_EQ(counts.size(), 190u);
  double chi_sq = 0.0;
  for (const auto& [pair, c] : counts) chi_sq += (c - per_cell) * (c - per_cell) / double(per_cell);
  // 99.99% quantile of chi-square with 189 degrees of freedom.
  EXPECT_LT(chi_sq, 269.99);
}

TEST(SampleGnm, FirstEdgePositionIsUniform) {
  // The edge order is a uniform random order: the first edge of H_3(5, 10)
  // is uniform over all C(5,3) = 10 edges.
  const int trials = 10000;
  std::vector<int> counts(10, 0);
  for (int t = 0; t < trials; ++t) ++counts[colex_rank(sample_gnm(5, 3, 10, 77, t).edge(0))];
  double chi_sq = 0.0;
  for (const int c : counts) chi_sq += (c - 1000.0) * (c - 1000.0) / 1000.0;
  EXPECT_LT(chi_sq, 33.72);  // 99.99% quantile, 9 degrees of freedom
}

TEST(Sampling, DeterministicInSeedAndTrial) {
  const auto a = sample_gnm(40, 3, 60, 5, 11);
  const auto b = sample_gnm(40, 3, 60, 5, 11);
  const auto c = sample_gnm(40, 3, 60, 5, 12);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  std::ostringstream sa, sb;
  write_hypergraph(sa, sample_gnp(25, 3, mpq_class(1, 20), 3, 4));
  write_hypergraph(sb, sample(25, 3, RandomSpec{EdgeProbability{mpq_class(1, 20)}, 3, 4}));
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Colex, RankIsABijection) {
  std::vector<Vertex> e(3);
  for (std::uint64_t r = 0; r < edge_space_size(9, 3); ++r) {
    colex_unrank(r, 3, e);
    ASSERT_TRUE(e[0] >= 1 && e[0] < e[1] && e[1] < e[2] && e[2] <= 9);
    ASSERT_EQ(colex_rank(e), r);
  }
  std::vector<Vertex> big(5);
  CounterRng rng(1, 1);
  const std::uint64_t space = edge_space_size(2000, 5);
  for (int t = 0; t < 1000; ++t) {
    const std::uint64_t r = rng.below(space);
    colex_unrank(r, 5, big);
    ASSERT_EQ(colex_rank(big), r);
  }
}

TEST(Colex, OverflowIsAParameterError) {
  EXPECT_THROW(edge_space_size(100000, 30), ParameterError);
}

TEST(Hypergraph, ValidatingConstructor) {
  EXPECT_THROW(Hypergraph(4, 3, {{1, 2}}), ParameterError);
  EXPECT_THROW(Hypergraph(4, 3, {{1, 2, 5}}), ParameterError);
  EXPECT_THROW(Hypergraph(4, 3, {{2, 1, 3}}), ParameterError);
  EXPECT_THROW(Hypergraph(4, 3, {{1, 1, 3}}), ParameterError);
  EXPECT_THROW(Hypergraph(4, 3, {{1, 2, 3}, {1, 2, 3}}), ParameterError);
  EXPECT_THROW(Hypergraph(4, 1), ParameterError);
}

TEST(TwoCore, SingleEdgePeelsCompletely) {
  const Hypergraph h(3, 3, {{1, 2, 3}});
  const CoreResult r = two_core(h);
  EXPECT_EQ(r.core.n(), 0u);
  EXPECT_EQ(r.core.edge_count(), 0u);
  // Vertex 1 leaves with the edge; 2 and 3 are then isolated.
  EXPECT_EQ(r.isolated_removals, 2u);
}

TEST(TwoCore, CompleteFourVertexGraphIsItsOwnCore) {
  const Hypergraph h(4, 3, {{1, 2, 3}, {2, 3, 4}, {1, 2, 4}, {1, 3, 4}});
  const CoreResult r = two_core(h);
  EXPECT_EQ(r.core, h);
  EXPECT_EQ(r.isolated_removals, 0u);
  EXPECT_EQ(r.original_labels, (std::vector<Vertex>{1, 2, 3, 4}));
}

TEST(TwoCore, IndependentOfPeelingOrder) {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const Hypergraph h = sample_gnm(12, 3, 40, 99, trial);
    const CoreResult r = two_core(h);
    std::set<std::vector<Vertex>> core_edges;
    for (std::size_t j = 0; j < r.core.edge_count(); ++j) {
      std::vector<Vertex> e;
      for (const Vertex v : r.core.edge(j)) e.push_back(r.original_labels[v - 1]);
      core_edges.insert(e);
    }
    const std::set<Vertex> core_vertices(r.original_labels.begin(), r.original_labels.end());
    for (std::uint64_t schedule = 0; schedule < 20; ++schedule) {
      CounterRng rng(trial, schedule);
      const auto [edges, vertices] = peel_randomly(h, rng);
      ASSERT_EQ(edges, core_edges);
      ASSERT_EQ(vertices, core_vertices);
    }
  }
}

TEST(TwoCore, Idempotent) {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Hypergraph h = sample_gnm(30, 3, 45, 4, trial);
    const CoreResult once = two_core(h);
    const CoreResult twice = two_core(once.core);
    EXPECT_EQ(twice.core, once.core);
    EXPECT_EQ(twice.isolated_removals, 0u);
  }
}

TEST(TwoCore, CoreKeepsProcessOrder) {
  const Hypergraph h(6, 3, {{2, 3, 4}, {1, 5, 6}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}});
  const CoreResult r = two_core(h);
  EXPECT_EQ(edges_of(r.core), (std::vector<std::vector<Vertex>>{{2, 3, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}}));
  EXPECT_EQ(r.isolated_removals, 1u);  // 5 leaves with {1,5,6}, then 6 is isolated
}

TEST(DegreeProfile, Examples) {
  EXPECT_EQ(degree_profile(Hypergraph(4, 3)), (std::vector<std::size_t>{0, 0, 0, 0}));
  EXPECT_EQ(degree_profile(Hypergraph(5, 3, {{1, 2, 3}})),
            (std::vector<std::size_t>{1, 1, 1, 0, 0}));
  for (std::uint64_t t = 0; t < 10; ++t) {
    const Hypergraph h = sample_gnm(20, 4, 30 + t, 8, t);
    const auto d = degree_profile(h);
    EXPECT_EQ(std::accumulate(d.begin(), d.end(), std::size_t{0}), 4 * h.edge_count());
  }
}

TEST(HypergraphText, RoundTripIsExact) {
  const Hypergraph h = sample_gnm(50, 3, 70, 13, 1);
  std::ostringstream first;
  write_hypergraph(first, h);
  std::istringstream in(first.str());
  const Hypergraph back = read_hypergraph(in);
  EXPECT_EQ(back, h);
  std::ostringstream second;
  write_hypergraph(second, back);
  EXPECT_EQ(first.str(), second.str());
}

TEST(HypergraphText, RejectsMalformedInput) {
  for (const char* text : {"", "3 3", "3 3 1\n1 2", "3 3 1\n1 2 4\n", "3 3 1\n3 2 1\n",
                           "3 3 1\n1 2 3\n9", "4 3 2\n1 2 3\n1 2 3\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_hypergraph(in), ParameterError) << text;
  }
}
