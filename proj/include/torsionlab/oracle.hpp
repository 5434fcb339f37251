#pragma once

// Brute-force reference computations. Deliberately naive and independent of
// the elimination code: determinants by Laplace expansion, invariant factors
// from gcds of all j x j minors. Only usable on small matrices.

#include <cstddef>
#include <vector>

#include <gmpxx.h>

#include "torsionlab/matrix.hpp"

namespace torsionlab::oracle {

using DenseMatrix = std::vector<std::vector<mpz_class>>;

DenseMatrix to_dense(const SparseIntMatrix& m);

mpz_class laplace_determinant(const DenseMatrix& square);

/// D_j = gcd of all j x j minors, for j = 1 .. min(rows, cols). D_j == 0 once
/// j exceeds the rank.
std::vector<mpz_class> determinantal_divisors(const DenseMatrix& a);

/// d_j = D_j / D_{j-1} for every j with D_j != 0.
std::vector<mpz_class> invariant_factors_from_minors(const DenseMatrix& a);

}  // namespace torsionlab::oracle
