#include "torsionlab/oracle.hpp"

#include <numeric>

namespace torsionlab::oracle {

namespace {

mpz_class laplace(const DenseMatrix& a, std::vector<std::size_t>& rows,
                  std::vector<std::size_t>& cols) {
  if (rows.empty()) return 1;
  if (rows.size() == 1) return a[rows[0]][cols[0]];
  const std::size_t top = rows.front();
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  mpz_class det = 0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const mpz_class& entry = a[top][cols[i]];
    if (entry == 0) continue;
    std::vector<std::size_t> sub_cols;
    sub_cols.reserve(cols.size() - 1);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c != i) sub_cols.push_back(cols[c]);
    }
    const mpz_class minor = laplace(a, sub_rows, sub_cols);
    if (i % 2 == 0) {
      det += entry * minor;
    } else {
      det -= entry * minor;
    }
  }
  return det;
}

bool next_subset(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t size = comb.size();
  for (std::size_t i = size; i-- > 0;) {
    if (comb[i] < n - size + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

DenseMatrix to_dense(const SparseIntMatrix& m) {
  DenseMatrix a(m.n_rows(), std::vector<mpz_class>(m.n_cols()));
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    for (const auto& e : m.column(j).entries()) a[e.index][j] = e.value;
  }
  return a;
}

mpz_class laplace_determinant(const DenseMatrix& square) {
  std::vector<std::size_t> rows(square.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::vector<std::size_t> cols = rows;
  return laplace(square, rows, cols);
}

std::vector<mpz_class> determinantal_divisors(const DenseMatrix& a) {
  const std::size_t n_rows = a.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : a.front().size();
  const std::size_t top = std::min(n_rows, n_cols);
  std::vector<mpz_class> out;
  for (std::size_t j = 1; j <= top; ++j) {
    mpz_class g = 0;
    std::vector<std::size_t> rows(j);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    do {
      std::vector<std::size_t> cols(j);
      std::iota(cols.begin(), cols.end(), std::size_t{0});
      do {
        std::vector<std::size_t> r = rows;
        std::vector<std::size_t> c = cols;
        const mpz_class minor = laplace(a, r, c);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), minor.get_mpz_t());
      } while (next_subset(cols, n_cols));
    } while (next_subset(rows, n_rows));
    out.push_back(g);
  }
  return out;
}

std::vector<mpz_class> invariant_factors_from_minors(const DenseMatrix& a) {
  std::vector<mpz_class> out;
  mpz_class previous = 1;
  for (const auto& d : determinantal_divisors(a)) {
    if (d == 0) break;
    out.push_back(d / previous);
    previous = d;
  }
  return out;
}

}  // namespace torsionlab::oracle
