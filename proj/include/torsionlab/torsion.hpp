#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "torsionlab/errors.hpp"
#include "torsionlab/exactla.hpp"
#include "torsionlab/matrix.hpp"
#include "torsionlab/model.hpp"

namespace torsionlab {

/// Column subset S of a matrix and whether it is a torsion cocycle, i.e.
/// rank_Q(M_S) > rank_{Z/q}(M_S) for some prime q.
struct CocycleReport {
  std::vector<std::size_t> subset;
  bool is_torsion_cocycle = false;
  /// Smallest prime factor of the largest invariant factor of M_S. Absent when
  /// there is no torsion, or when that factor has no prime below the trial
  /// division bound and its cofactor is composite (composite_witness).
  std::optional<mpz_class> witness_prime;
  bool composite_witness = false;
  std::size_t rank_rational = 0;
  std::optional<std::size_t> rank_mod_witness;

  /// Structural conditions every minimal cocycle must meet.
  bool full_column_rank = false;    // rank_Q(M_S) == |S|
  bool no_unit_singleton_row = false;  // no row of M_S is a lone +-1
};

CocycleReport detect_torsion_cocycle(const SparseIntMatrix& m, std::span<const std::size_t> subset,
                                     const SmithKernel& smith = default_smith_kernel());

struct CocycleSearchOptions {
  std::size_t max_subset_size = 0;
  /// Maximum number of subsets examined before a BudgetError.
  std::uint64_t max_subsets = 5'000'000;
};

/// Thrown when the subset budget runs out; completed_sizes lists the subset
/// sizes that were fully searched.
class CocycleBudgetError : public BudgetError {
 public:
  CocycleBudgetError(const std::string& what, std::vector<std::size_t> completed)
      : BudgetError(what), completed_sizes(std::move(completed)) {}
  std::vector<std::size_t> completed_sizes;
};

/// All inclusion-minimal torsion cocycles with |S| <= max_subset_size, by
/// ascending size, skipping supersets of cocycles already found.
std::vector<CocycleReport> find_minimal_torsion_cocycles(
    const SparseIntMatrix& m, const CocycleSearchOptions& options,
    const SmithKernel& smith = default_smith_kernel());

/// True iff no edge meets w in exactly one vertex and at least |w| edges meet
/// w. The empty set returns true.
bool check_small_obstruction(const Hypergraph& h, std::span<const Vertex> w);

/// Residue vector over Z/qZ, entries in [0, q).
struct ResidueVector {
  std::vector<std::uint64_t> values;
  std::uint64_t q = 2;

  std::size_t support_size() const;
};

struct EnumerationBudget {
  std::uint64_t max_items = 50'000'000;
};

/// Number of alternating vectors w (k nonzeros 1, -1, 1, ...) in Z^n with
/// w . v != 0 mod q, by enumeration of all C(n, k) supports.
std::uint64_t count_bad_vectors(const ResidueVector& v, std::size_t k,
                                const EnumerationBudget& budget = {});

struct BalancedProfile {
  std::size_t support_size = 0;
  std::size_t max_multiplicity = 0;  // of any nonzero residue
  mpq_class epsilon;
  bool balanced = false;  // max_multiplicity <= epsilon * support_size
};

BalancedProfile epsilon_balanced(const ResidueVector& v, const mpq_class& epsilon);

/// min{1/k^k - eps/(k-1)!, eps^k/k^k}, for k >= 3 and 0 < eps < (k-1)!/k^k.
mpq_class gamma_bound(std::size_t k, const mpq_class& epsilon);

/// Upper end (exclusive) of the admissible epsilon range, (k-1)!/k^k.
mpq_class epsilon_limit(std::size_t k);

struct KernelSupportProfile {
  std::size_t kernel_dim = 0;
  std::size_t max_support = 0;
};

/// Exact maximum support over nonzero x with m x = 0 mod q, enumerating all
/// q^dim kernel vectors. q^dim above the budget is a BudgetError.
KernelSupportProfile kernel_support_profile(const SparseIntMatrix& m, std::uint64_t q,
                                            const EnumerationBudget& budget = {});

/// Prime factors found by trial division below 10^6, plus the leftover
/// cofactor (1 if fully factored).
struct PartialFactorization {
  std::vector<mpz_class> small_primes;  // ascending, distinct
  mpz_class cofactor = 1;
  bool cofactor_is_prime = false;
};

PartialFactorization partial_factor(const mpz_class& value);

/// Smallest prime dividing value > 1, when the partial factorization finds it.
std::optional<mpz_class> smallest_prime_factor(const mpz_class& value);

}  // namespace torsionlab
