#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "torsionlab/matrix.hpp"

namespace torsionlab {

/// Nonzero diagonal of the Smith normal form, d_1 | d_2 | ... | d_r, all > 0.
struct SmithForm {
  std::vector<mpz_class> invariant_factors;

  std::size_t rank() const { return invariant_factors.size(); }
  bool operator==(const SmithForm&) const = default;
};

/// coker = Z^free_rank + sum of Z/d Z over torsion_factors.
struct CokernelSummary {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion_factors;  // each > 1, divisibility chain
  mpz_class torsion_order = 1;

  bool has_torsion() const { return !torsion_factors.empty(); }
  bool operator==(const CokernelSummary&) const = default;
};

struct ExactOptions {
  /// Refuse inputs, or elimination fill, beyond this many stored entries.
  std::size_t max_entries = 20'000'000;
};

SmithForm smith_normal_form(const SparseIntMatrix& m, const ExactOptions& options = {});

using SmithKernel = std::function<SmithForm(const SparseIntMatrix&)>;

/// The default kernel, wrapped for callers that accept a substitute.
SmithKernel default_smith_kernel(const ExactOptions& options = {});

CokernelSummary cokernel_from_smith(std::size_t n_rows, const SmithForm& smith);
CokernelSummary cokernel(const SparseIntMatrix& m, const ExactOptions& options = {});

/// Rank over Q by fraction-free (Bareiss) elimination.
std::size_t rank_rational(const SparseIntMatrix& m);

/// Rank of the entrywise reduction mod a prime q. q < 2 is a ParameterError;
/// primality is the caller's responsibility (asserted in debug builds).
std::size_t rank_mod_q(const SparseIntMatrix& m, const mpz_class& q);

/// Basis of the right kernel {x : m x = 0} over Z/qZ, for q < 2^32 prime.
/// Each vector has length n_cols with residues in [0, q).
std::vector<std::vector<std::uint64_t>> kernel_basis_mod_q(const SparseIntMatrix& m,
                                                           std::uint64_t q);

}  // namespace torsionlab
