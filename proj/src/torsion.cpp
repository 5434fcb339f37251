#include "torsionlab/torsion.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

constexpr std::uint32_t kTrialDivisionBound = 1'000'000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<char> composite(kTrialDivisionBound, 0);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < kTrialDivisionBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j < kTrialDivisionBound; j += i) composite[j] = 1;
    }
    return out;
  }();
  return primes;
}

bool probably_prime(const mpz_class& v) { return mpz_probab_prime_p(v.get_mpz_t(), 30) > 0; }

void check_subset(const SparseIntMatrix& m, std::span<const std::size_t> subset) {
  for (const std::size_t j : subset) {
    if (j >= m.n_cols()) throw ParameterError("column subset index out of range");
  }
}

bool has_unit_singleton_row(const SparseIntMatrix& ms) {
  std::vector<std::size_t> count(ms.n_rows(), 0);
  std::vector<char> unit(ms.n_rows(), 0);
  for (std::size_t j = 0; j < ms.n_cols(); ++j) {
    for (const auto& e : ms.column(j).entries()) {
      ++count[e.index];
      unit[e.index] = mpz_cmpabs_ui(e.value.get_mpz_t(), 1) == 0;
    }
  }
  for (std::size_t i = 0; i < ms.n_rows(); ++i) {
    if (count[i] == 1 && unit[i]) return true;
  }
  return false;
}

// Dynamic bitset over column indices, for superset pruning.
using ColumnMask = std::vector<std::uint64_t>;

ColumnMask to_mask(std::span<const std::size_t> subset, std::size_t n_cols) {
  ColumnMask mask((n_cols + 63) / 64, 0);
  for (const std::size_t j : subset) mask[j / 64] |= std::uint64_t{1} << (j % 64);
  return mask;
}

bool contains(const ColumnMask& outer, const ColumnMask& inner) {
  for (std::size_t w = 0; w < outer.size(); ++w) {
    if ((inner[w] & ~outer[w]) != 0) return false;
  }
  return true;
}

// Advances a sorted combination of `size` indices from [0, n); false when done.
bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t size = comb.size();
  std::size_t i = size;
  while (i > 0) {
    --i;
    if (comb[i] < n - size + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t j = 0; j < k; ++j) {
    acc = acc * (n - j) / (j + 1);
    if (acc > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(acc);
}

void check_residues(const ResidueVector& v) {
  if (v.q < 2) throw ParameterError("modulus q must be at least 2");
  if (v.q > (std::uint64_t{1} << 62)) throw ParameterError("modulus q must be below 2^62");
  for (const auto x : v.values) {
    if (x >= v.q) throw ParameterError("residue outside [0, q)");
  }
}

}  // namespace

CocycleReport detect_torsion_cocycle(const SparseIntMatrix& m, std::span<const std::size_t> subset,
                                     const SmithKernel& smith) {
  check_subset(m, subset);
  const SparseIntMatrix ms = restrict_columns(m, subset);
  const SmithForm form = smith(ms);

  CocycleReport report;
  report.subset.assign(subset.begin(), subset.end());
  report.rank_rational = rank_rational(ms);
  report.full_column_rank = report.rank_rational == subset.size();
  report.no_unit_singleton_row = !has_unit_singleton_row(ms);

  const auto largest = std::max_element(form.invariant_factors.begin(), form.invariant_factors.end());
  if (largest != form.invariant_factors.end() && *largest > 1) {
    report.is_torsion_cocycle = true;
    report.witness_prime = smallest_prime_factor(*largest);
    report.composite_witness = !report.witness_prime.has_value();
    if (report.witness_prime) report.rank_mod_witness = rank_mod_q(ms, *report.witness_prime);
  }
  return report;
}

std::vector<CocycleReport> find_minimal_torsion_cocycles(const SparseIntMatrix& m,
                                                         const CocycleSearchOptions& options,
                                                         const SmithKernel& smith) {
  const std::size_t n = m.n_cols();
  if (options.max_subset_size > n) {
    throw ParameterError("max_subset_size exceeds the number of columns");
  }
  std::vector<CocycleReport> found;
  std::vector<ColumnMask> found_masks;
  std::vector<std::size_t> completed;
  std::uint64_t examined = 0;
  for (std::size_t size = 1; size <= options.max_subset_size; ++size) {
    std::vector<std::size_t> comb(size);
    for (std::size_t i = 0; i < size; ++i) comb[i] = i;
    do {
      if (++examined > options.max_subsets) {
        throw CocycleBudgetError("torsion cocycle search exceeded " +
                                     std::to_string(options.max_subsets) + " subsets",
                                 completed);
      }
      const ColumnMask mask = to_mask(comb, n);
      const bool pruned = std::any_of(found_masks.begin(), found_masks.end(),
                                      [&](const ColumnMask& f) { return contains(mask, f); });
      if (pruned) continue;
      CocycleReport report = detect_torsion_cocycle(m, comb, smith);
      if (report.is_torsion_cocycle) {
        found_masks.push_back(mask);
        found.push_back(std::move(report));
      }
    } while (next_combination(comb, n));
    completed.push_back(size);
  }
  return found;
}

bool check_small_obstruction(const Hypergraph& h, std::span<const Vertex> w) {
  std::vector<char> in_w(h.n() + 1, 0);
  std::size_t w_size = 0;
  for (const Vertex v : w) {
    if (v < 1 || v > h.n()) throw ParameterError("vertex outside [1, n]");
    if (!in_w[v]) ++w_size;
    in_w[v] = 1;
  }
  std::size_t meeting = 0;
  for (std::size_t j = 0; j < h.edge_count(); ++j) {
    std::size_t hits = 0;
    for (const Vertex v : h.edge(j)) hits += in_w[v] ? 1 : 0;
    if (hits == 1) return false;
    if (hits > 0) ++meeting;
  }
  return meeting >= w_size;
}

std::size_t ResidueVector::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](std::uint64_t x) { return x != 0; }));
}

std::uint64_t count_bad_vectors(const ResidueVector& v, std::size_t k,
                                const EnumerationBudget& budget) {
  check_residues(v);
  const std::size_t n = v.values.size();
  if (k < 1 || k > n) throw ParameterError("need 1 <= k <= length(v)");
  if (binomial_capped(n, k, budget.max_items) > budget.max_items) {
    throw BudgetError("C(n, k) exceeds the enumeration budget");
  }
  const std::uint64_t q = v.q;
  std::uint64_t bad = 0;
  // Position `depth` of w carries sign (-1)^depth.
  auto recurse = [&](auto&& self, std::size_t start, std::size_t depth, std::uint64_t dot) -> void {
    if (depth == k) {
      if (dot != 0) ++bad;
      return;
    }
    for (std::size_t i = start; i + (k - depth) <= n; ++i) {
      const std::uint64_t x = v.values[i];
      const std::uint64_t next = depth % 2 == 0 ? (dot + x) % q : (dot + q - x) % q;
      self(self, i + 1, depth + 1, next);
    }
  };
  recurse(recurse, 0, 0, 0);
  return bad;
}

BalancedProfile epsilon_balanced(const ResidueVector& v, const mpq_class& epsilon) {
  check_residues(v);
  if (epsilon <= 0 || epsilon >= 1) throw ParameterError("epsilon must lie in (0, 1)");
  std::map<std::uint64_t, std::size_t> multiplicity;
  for (const auto x : v.values) {
    if (x != 0) ++multiplicity[x];
  }
  BalancedProfile profile;
  profile.epsilon = epsilon;
  for (const auto& [residue, count] : multiplicity) {
    profile.support_size += count;
    profile.max_multiplicity = std::max(profile.max_multiplicity, count);
  }
  profile.balanced = mpq_class(profile.max_multiplicity) <= epsilon * profile.support_size;
  return profile;
}

mpq_class epsilon_limit(std::size_t k) {
  mpz_class factorial = 1;
  for (std::size_t i = 2; i < k; ++i) factorial *= static_cast<unsigned long>(i);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), k, k);
  mpq_class out(factorial, power);
  out.canonicalize();
  return out;
}

mpq_class gamma_bound(std::size_t k, const mpq_class& epsilon) {
  if (k < 3) throw ParameterError("gamma bound needs k >= 3");
  if (epsilon <= 0 || epsilon >= epsilon_limit(k)) {
    throw ParameterError("epsilon must lie in (0, (k-1)!/k^k)");
  }
  mpz_class factorial = 1;
  for (std::size_t i = 2; i < k; ++i) factorial *= static_cast<unsigned long>(i);
  mpz_class k_pow_k;
  mpz_ui_pow_ui(k_pow_k.get_mpz_t(), k, k);
  mpq_class first = mpq_class(1, k_pow_k) - epsilon / mpq_class(factorial);
  mpq_class eps_pow = 1;
  for (std::size_t i = 0; i < k; ++i) eps_pow *= epsilon;
  mpq_class second = eps_pow / mpq_class(k_pow_k);
  first.canonicalize();
  second.canonicalize();
  return std::min(first, second);
}

KernelSupportProfile kernel_support_profile(const SparseIntMatrix& m, std::uint64_t q,
                                            const EnumerationBudget& budget) {
  const auto basis = kernel_basis_mod_q(m, q);
  KernelSupportProfile profile;
  profile.kernel_dim = basis.size();
  if (basis.empty()) return profile;

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (total > budget.max_items / q) {
      throw BudgetError("kernel enumeration over q^" + std::to_string(basis.size()) +
                        " vectors exceeds the budget (kernel_dim " +
                        std::to_string(basis.size()) + ")");
    }
    total *= q;
  }

  // Odometer over coefficient tuples; bumping digit d by one (with wraparound)
  // always adds basis[d] to the running vector.
  const std::size_t len = m.n_cols();
  std::vector<std::uint64_t> current(len, 0);
  std::vector<std::uint64_t> digits(basis.size(), 0);
  std::size_t support = 0;
  for (std::uint64_t step = 1; step < total; ++step) {
    std::size_t d = 0;
    for (;;) {
      for (std::size_t i = 0; i < len; ++i) {
        const std::uint64_t add = basis[d][i];
        if (add == 0) continue;
        const std::uint64_t before = current[i];
        const std::uint64_t after = (before + add) % q;
        current[i] = after;
        if (before == 0) ++support;
        if (after == 0) --support;
      }
      if (++digits[d] < q) break;
      digits[d] = 0;
      ++d;
    }
    profile.max_support = std::max(profile.max_support, support);
    if (profile.max_support == len) break;
  }
  return profile;
}

PartialFactorization partial_factor(const mpz_class& value) {
  PartialFactorization out;
  mpz_class rest = abs(value);
  if (rest <= 1) return out;
  bool passed_sqrt = false;
  for (const std::uint32_t p : small_primes()) {
    if (mpz_class(p) * p > rest) {
      passed_sqrt = true;
      break;
    }
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      out.small_primes.emplace_back(p);
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) rest /= p;
    }
  }
  if (rest > 1 && passed_sqrt && rest < kTrialDivisionBound) {
    out.small_primes.push_back(rest);
    rest = 1;
  } else if (rest > 1) {
    out.cofactor_is_prime = passed_sqrt || probably_prime(rest);
  }
  out.cofactor = rest;
  return out;
}

std::optional<mpz_class> smallest_prime_factor(const mpz_class& value) {
  const mpz_class v = abs(value);
  if (v <= 1) return std::nullopt;
  for (const std::uint32_t p : small_primes()) {
    if (mpz_class(p) * p > v) return v;
    if (mpz_divisible_ui_p(v.get_mpz_t(), p)) return mpz_class(p);
  }
  if (probably_prime(v)) return v;
  return std::nullopt;
}

}  // namespace torsionlab
