#include "torsionlab/model.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include "torsionlab/errors.hpp"
#include "torsionlab/rng.hpp"

namespace torsionlab {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// C(c, i), saturating at 2^64 - 1.
std::uint64_t binom_sat(std::uint64_t c, std::uint64_t i) {
  if (i > c) return 0;
  i = std::min(i, c - i);
  unsigned __int128 acc = 1;
  for (std::uint64_t j = 0; j < i; ++j) {
    acc = acc * (c - j) / (j + 1);
    if (acc > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(acc);
}

void check_shape(std::size_t n, std::size_t k) {
  if (k < 2) throw ParameterError("uniformity k must be at least 2");
  if (k > n) throw ParameterError("uniformity k must not exceed n");
}

// Bernoulli(p) for an exact rational p, by comparing a uniform 64-bit word
// against the binary expansion of p. Ties (probability 2^-64) continue into
// the next 64 bits of the expansion.
class ExactBernoulli {
 public:
  explicit ExactBernoulli(const mpq_class& p) : den_(p.get_den()) {
    if (p <= 0) {
      fixed_ = false;
      return;
    }
    if (p >= 1) {
      fixed_ = true;
      return;
    }
    mpz_class scaled = mpz_class(p.get_num()) << 64;
    mpz_class head;
    mpz_fdiv_qr(head.get_mpz_t(), rem_.get_mpz_t(), scaled.get_mpz_t(), den_.get_mpz_t());
    head_ = to_u64(head);
  }

  bool operator()(CounterRng& rng) const {
    if (fixed_) return *fixed_;
    const std::uint64_t u = rng();
    if (u != head_) return u < head_;
    mpz_class rem = rem_;
    for (;;) {
      if (rem == 0) return false;
      mpz_class scaled = rem << 64;
      mpz_class chunk;
      mpz_fdiv_qr(chunk.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), den_.get_mpz_t());
      const std::uint64_t next = to_u64(chunk);
      const std::uint64_t w = rng();
      if (w != next) return w < next;
    }
  }

 private:
  static std::uint64_t to_u64(const mpz_class& z) {
    mpz_class hi = z >> 32;
    mpz_class lo = z - (hi << 32);
    return (static_cast<std::uint64_t>(hi.get_ui()) << 32) | lo.get_ui();
  }

  mpz_class den_;
  mpz_class rem_;
  std::uint64_t head_ = 0;
  std::optional<bool> fixed_;
};

// Binomial(trials, p). Exact Bernoulli counting up to kExactBinomialLimit
// trials; beyond that the standard library sampler with p rounded to double.
constexpr std::uint64_t kExactBinomialLimit = std::uint64_t{1} << 26;

std::uint64_t sample_binomial(std::uint64_t trials, const mpq_class& p, CounterRng& rng) {
  if (p <= 0) return 0;
  if (p >= 1) return trials;
  if (trials <= kExactBinomialLimit) {
    const ExactBernoulli coin(p);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) hits += coin(rng) ? 1 : 0;
    return hits;
  }
  std::binomial_distribution<std::uint64_t> dist(trials, p.get_d());
  return dist(rng);
}

// m distinct ranks in [0, space), as a uniformly random ordered sequence.
std::vector<std::uint64_t> sample_distinct_ranks(std::uint64_t space, std::uint64_t m,
                                                 CounterRng& rng) {
  std::vector<std::uint64_t> out;
  out.reserve(m);
  if (m <= space / 2) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(m * 2);
    while (out.size() < m) {
      const std::uint64_t r = rng.below(space);
      if (seen.insert(r).second) out.push_back(r);
    }
    return out;
  }
  std::vector<std::uint64_t> pool(space);
  std::iota(pool.begin(), pool.end(), std::uint64_t{0});
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t j = i + rng.below(space - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return pool;
}

Hypergraph edges_from_ranks(std::size_t n, std::size_t k, const std::vector<std::uint64_t>& ranks) {
  HypergraphBuilder builder(n, k, ranks.size());
  std::vector<Vertex> edge(k);
  for (const std::uint64_t r : ranks) {
    colex_unrank(r, k, edge);
    builder.push(edge);
  }
  return std::move(builder).finish();
}

}  // namespace

Hypergraph::Hypergraph(std::size_t n, std::size_t k) : n_(n), k_(k) {
  if (k < 2) throw ParameterError("uniformity k must be at least 2");
}

Hypergraph::Hypergraph(std::size_t n, std::size_t k,
                       const std::vector<std::vector<Vertex>>& edges)
    : Hypergraph(n, k) {
  flat_.reserve(edges.size() * k);
  for (const auto& e : edges) {
    if (e.size() != k) throw ParameterError("edge does not have exactly k vertices");
    for (std::size_t i = 0; i < k; ++i) {
      if (e[i] < 1 || e[i] > n) throw ParameterError("edge vertex outside [1, n]");
      if (i > 0 && e[i] <= e[i - 1]) throw ParameterError("edge vertices not strictly increasing");
    }
    flat_.insert(flat_.end(), e.begin(), e.end());
  }
  std::vector<std::vector<Vertex>> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParameterError("duplicate edge");
  }
}

Hypergraph Hypergraph::prefix(std::size_t m) const {
  if (m > edge_count()) throw ParameterError("prefix longer than edge list");
  Hypergraph out(n_, k_);
  out.flat_.assign(flat_.begin(), flat_.begin() + static_cast<std::ptrdiff_t>(m * k_));
  return out;
}

HypergraphBuilder::HypergraphBuilder(std::size_t n, std::size_t k, std::size_t reserve_edges)
    : graph_(n, k) {
  graph_.flat_.reserve(reserve_edges * k);
}

void HypergraphBuilder::push(std::span<const Vertex> sorted_edge) {
  graph_.flat_.insert(graph_.flat_.end(), sorted_edge.begin(), sorted_edge.end());
}

Hypergraph HypergraphBuilder::finish() && { return std::move(graph_); }

std::uint64_t edge_space_size(std::size_t n, std::size_t k) {
  const std::uint64_t c = binom_sat(n, k);
  if (c == kSaturated) throw ParameterError("C(n, k) does not fit in 64 bits");
  return c;
}

std::uint64_t colex_rank(std::span<const Vertex> sorted_edge) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < sorted_edge.size(); ++i) {
    r += binom_sat(sorted_edge[i] - 1, i + 1);
  }
  return r;
}

void colex_unrank(std::uint64_t rank, std::size_t k, std::span<Vertex> out) {
  // Largest c with C(c, i) <= rank, for i = k down to 1; c strictly decreases.
  std::uint64_t hi = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t i = k; i >= 1; --i) {
    std::uint64_t lo = i - 1;  // C(i - 1, i) = 0 <= rank
    std::uint64_t top = hi;
    while (lo < top) {
      const std::uint64_t mid = lo + (top - lo + 1) / 2;
      if (binom_sat(mid, i) <= rank) {
        lo = mid;
      } else {
        top = mid - 1;
      }
    }
    out[i - 1] = static_cast<Vertex>(lo + 1);
    rank -= binom_sat(lo, i);
    hi = lo == 0 ? 0 : lo - 1;
  }
}

Hypergraph sample_gnp(std::size_t n, std::size_t k, const mpq_class& p, std::uint64_t seed,
                      std::uint64_t trial_id) {
  check_shape(n, k);
  if (p < 0 || p > 1) throw ParameterError("edge probability p must lie in [0, 1]");
  const std::uint64_t space = edge_space_size(n, k);
  CounterRng rng(seed, trial_id);
  const std::uint64_t m = sample_binomial(space, p, rng);
  return edges_from_ranks(n, k, sample_distinct_ranks(space, m, rng));
}

Hypergraph sample_gnm(std::size_t n, std::size_t k, std::uint64_t m, std::uint64_t seed,
                      std::uint64_t trial_id) {
  check_shape(n, k);
  const std::uint64_t space = edge_space_size(n, k);
  if (m > space) throw ParameterError("edge count m exceeds C(n, k)");
  CounterRng rng(seed, trial_id);
  return edges_from_ranks(n, k, sample_distinct_ranks(space, m, rng));
}

Hypergraph sample(std::size_t n, std::size_t k, const RandomSpec& spec) {
  return std::visit(
      [&](const auto& mode) -> Hypergraph {
        using Mode = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<Mode, EdgeProbability>) {
          return sample_gnp(n, k, mode.p, spec.seed, spec.trial_id);
        } else {
          return sample_gnm(n, k, mode.m, spec.seed, spec.trial_id);
        }
      },
      spec.mode);
}

CoreResult two_core(const Hypergraph& h) {
  const std::size_t n = h.n();
  const std::size_t m = h.edge_count();
  std::vector<std::vector<std::size_t>> incident(n);
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t j = 0; j < m; ++j) {
    for (const Vertex v : h.edge(j)) {
      incident[v - 1].push_back(j);
      ++degree[v - 1];
    }
  }

  std::vector<char> vertex_alive(n, 1);
  std::vector<char> edge_alive(m, 1);
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> pending;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] < 2) pending.push(v);
  }

  CoreResult result;
  while (!pending.empty()) {
    const std::size_t v = pending.top();
    pending.pop();
    if (!vertex_alive[v]) continue;
    vertex_alive[v] = 0;
    if (degree[v] == 0) {
      ++result.isolated_removals;
      continue;
    }
    for (const std::size_t j : incident[v]) {
      if (!edge_alive[j]) continue;
      edge_alive[j] = 0;
      for (const Vertex u : h.edge(j)) {
        const std::size_t ui = u - 1;
        --degree[ui];
        if (vertex_alive[ui] && degree[ui] < 2) pending.push(ui);
      }
      break;
    }
  }

  std::vector<Vertex> relabel(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (vertex_alive[v]) {
      result.original_labels.push_back(static_cast<Vertex>(v + 1));
      relabel[v] = static_cast<Vertex>(result.original_labels.size());
    }
  }
  HypergraphBuilder builder(result.original_labels.size(), h.k());
  std::vector<Vertex> mapped(h.k());
  for (std::size_t j = 0; j < m; ++j) {
    if (!edge_alive[j]) continue;
    const auto e = h.edge(j);
    for (std::size_t i = 0; i < e.size(); ++i) mapped[i] = relabel[e[i] - 1];
    builder.push(mapped);
  }
  result.core = std::move(builder).finish();
  return result;
}

std::vector<std::size_t> degree_profile(const Hypergraph& h) {
  std::vector<std::size_t> degree(h.n(), 0);
  for (std::size_t j = 0; j < h.edge_count(); ++j) {
    for (const Vertex v : h.edge(j)) ++degree[v - 1];
  }
  return degree;
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << h.n() << ' ' << h.k() << ' ' << h.edge_count() << '\n';
  for (std::size_t j = 0; j < h.edge_count(); ++j) {
    const auto e = h.edge(j);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i > 0) out << ' ';
      out << e[i];
    }
    out << '\n';
  }
}

Hypergraph read_hypergraph(std::istream& in) {
  long long n = -1, k = -1, m = -1;
  if (!(in >> n >> k >> m) || n < 0 || k < 2 || m < 0) {
    throw ParameterError("hypergraph header must be \"n k m\" with n >= 0, k >= 2, m >= 0");
  }
  std::vector<std::vector<Vertex>> edges(static_cast<std::size_t>(m),
                                         std::vector<Vertex>(static_cast<std::size_t>(k)));
  for (auto& e : edges) {
    for (auto& v : e) {
      long long x = 0;
      if (!(in >> x)) throw ParameterError("hypergraph file truncated");
      if (x < 1 || x > n) throw ParameterError("edge vertex outside [1, n]");
      v = static_cast<Vertex>(x);
    }
  }
  std::string extra;
  if (in >> extra) throw ParameterError("trailing data after hypergraph edges");
  return Hypergraph(static_cast<std::size_t>(n), static_cast<std::size_t>(k), edges);
}

}  // namespace torsionlab
