#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace torsionlab {

/// 1-based vertex label.
using Vertex = std::uint32_t;

/// k-uniform hypergraph on [n]. Edges are strictly increasing k-tuples kept
/// in process order; the edge list is stored flat, k labels per edge.
class Hypergraph {
 public:
  Hypergraph() = default;

  /// Empty hypergraph on [n].
  Hypergraph(std::size_t n, std::size_t k);

  /// Validates every invariant: k >= 2, labels in [1, n], strictly increasing
  /// within each edge, no duplicate edges. Throws ParameterError otherwise.
  Hypergraph(std::size_t n, std::size_t k, const std::vector<std::vector<Vertex>>& edges);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t edge_count() const { return k_ == 0 ? 0 : flat_.size() / k_; }

  std::span<const Vertex> edge(std::size_t j) const {
    return {flat_.data() + j * k_, k_};
  }

  /// Prefix of the process: the first m edges.
  Hypergraph prefix(std::size_t m) const;

  bool operator==(const Hypergraph&) const = default;

 private:
  friend class HypergraphBuilder;

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<Vertex> flat_;
};

/// Appends edges that the caller already knows are canonical and distinct.
/// Used by samplers and peeling, where validation would only repeat work.
class HypergraphBuilder {
 public:
  HypergraphBuilder(std::size_t n, std::size_t k, std::size_t reserve_edges = 0);
  void push(std::span<const Vertex> sorted_edge);
  Hypergraph finish() &&;

 private:
  Hypergraph graph_;
};

/// H_k(n, p) with p an exact rational, or H_k(n, m).
struct EdgeProbability {
  mpq_class p;
};
struct EdgeCount {
  std::uint64_t m;
};

struct RandomSpec {
  std::variant<EdgeProbability, EdgeCount> mode;
  std::uint64_t seed = 0;
  std::uint64_t trial_id = 0;
};

/// C(n, k), or throws ParameterError if it does not fit in 64 bits.
std::uint64_t edge_space_size(std::size_t n, std::size_t k);

/// Colexicographic rank of a sorted k-subset of [n] and its inverse.
std::uint64_t colex_rank(std::span<const Vertex> sorted_edge);
void colex_unrank(std::uint64_t rank, std::size_t k, std::span<Vertex> out);

Hypergraph sample_gnp(std::size_t n, std::size_t k, const mpq_class& p, std::uint64_t seed,
                      std::uint64_t trial_id);
Hypergraph sample_gnm(std::size_t n, std::size_t k, std::uint64_t m, std::uint64_t seed,
                      std::uint64_t trial_id);
Hypergraph sample(std::size_t n, std::size_t k, const RandomSpec& spec);

struct CoreResult {
  Hypergraph core;  // relabelled onto its surviving vertices, order kept
  std::size_t isolated_removals = 0;
  std::vector<Vertex> original_labels;  // core vertex v -> original_labels[v - 1]
};

/// 2-core by repeated deletion of vertices of degree < 2. Deleting a vertex
/// of degree 1 also deletes its edge; isolated_removals counts the vertices
/// that had degree 0 when deleted.
CoreResult two_core(const Hypergraph& h);

/// degrees[v - 1] = number of edges containing v.
std::vector<std::size_t> degree_profile(const Hypergraph& h);

/// "n k m" header, then one edge per line in process order.
void write_hypergraph(std::ostream& out, const Hypergraph& h);
Hypergraph read_hypergraph(std::istream& in);

}  // namespace torsionlab
