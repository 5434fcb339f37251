#include "torsionlab/exactla.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <string>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

struct WorkEntry {
  std::uint32_t row;
  mpz_class value;
};
using WorkColumn = std::vector<WorkEntry>;

// Gcd-based elimination on a column-major working copy. Pivots are chosen by
// minimal absolute value over the whole active matrix, ties broken by the
// Markowitz count (row_count - 1) * (col_count - 1).
class SmithEliminator {
 public:
  SmithEliminator(const SparseIntMatrix& m, std::size_t max_entries)
      : max_entries_(max_entries), row_count_(m.n_rows(), 0) {
    columns_.reserve(m.n_cols());
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
      const auto& src = m.column(j).entries();
      if (src.empty()) continue;
      WorkColumn col;
      col.reserve(src.size());
      for (const auto& e : src) {
        col.push_back({e.index, e.value});
        ++row_count_[e.index];
      }
      nnz_ += col.size();
      active_.push_back(static_cast<std::uint32_t>(columns_.size()));
      columns_.push_back(std::move(col));
    }
    check_budget();
  }

  std::vector<mpz_class> diagonalize() {
    std::vector<mpz_class> diagonal;
    std::size_t row = 0;
    std::size_t col = 0;
    while (select_pivot(row, col)) {
      reduce_pivot(row, col);
      mpz_class d = abs(columns_[col].front().value);
      diagonal.push_back(std::move(d));
      --row_count_[row];
      --nnz_;
      columns_[col].clear();
      std::erase_if(active_, [this](std::uint32_t c) { return columns_[c].empty(); });
      check_budget();
    }
    return diagonal;
  }

 private:
  void check_budget() const {
    if (nnz_ > max_entries_) {
      throw BudgetError("Smith normal form working matrix exceeds " +
                        std::to_string(max_entries_) + " entries");
    }
  }

  static const WorkEntry* find_row(const WorkColumn& col, std::uint32_t row) {
    const auto it = std::lower_bound(col.begin(), col.end(), row,
                                     [](const WorkEntry& e, std::uint32_t r) { return e.row < r; });
    return (it != col.end() && it->row == row) ? &*it : nullptr;
  }

  bool select_pivot(std::size_t& best_row, std::size_t& best_col) const {
    const mpz_class* best = nullptr;
    std::size_t best_cost = 0;
    for (const std::uint32_t c : active_) {
      const WorkColumn& col = columns_[c];
      const std::size_t col_weight = col.size() - 1;
      for (const auto& e : col) {
        const std::size_t cost = (row_count_[e.row] - 1) * col_weight;
        int cmp = best ? mpz_cmpabs(e.value.get_mpz_t(), best->get_mpz_t()) : -1;
        if (cmp < 0 || (cmp == 0 && cost < best_cost)) {
          best = &e.value;
          best_cost = cost;
          best_row = e.row;
          best_col = c;
          if (cost == 0 && mpz_cmpabs_ui(best->get_mpz_t(), 1) == 0) return true;
        }
      }
    }
    return best != nullptr;
  }

  // target -= factor * source
  void axpy(WorkColumn& target, const mpz_class& factor, const WorkColumn& source) {
    scratch_.clear();
    scratch_.reserve(target.size() + source.size());
    auto t = target.begin();
    auto s = source.begin();
    while (t != target.end() || s != source.end()) {
      if (s == source.end() || (t != target.end() && t->row < s->row)) {
        scratch_.push_back(std::move(*t));
        ++t;
      } else if (t == target.end() || s->row < t->row) {
        WorkEntry e{s->row, 0};
        mpz_submul(e.value.get_mpz_t(), factor.get_mpz_t(), s->value.get_mpz_t());
        ++row_count_[e.row];
        ++nnz_;
        scratch_.push_back(std::move(e));
        ++s;
      } else {
        mpz_submul(t->value.get_mpz_t(), factor.get_mpz_t(), s->value.get_mpz_t());
        if (t->value == 0) {
          --row_count_[t->row];
          --nnz_;
        } else {
          scratch_.push_back(std::move(*t));
        }
        ++t;
        ++s;
      }
    }
    target.swap(scratch_);
  }

  // Transforms the pivot's row and column until the pivot is their only entry.
  // Every restart strictly lowers the pivot's absolute value.
  void reduce_pivot(std::size_t& row, std::size_t& col) {
    const auto r = static_cast<std::uint32_t>(row);
    mpz_class quotient;
    for (;;) {
      mpz_class pivot = find_row(columns_[col], r)->value;
      bool row_rest = false;
      for (const std::uint32_t c : active_) {
        if (c == col) continue;
        const WorkEntry* hit = find_row(columns_[c], r);
        if (!hit) continue;
        mpz_tdiv_q(quotient.get_mpz_t(), hit->value.get_mpz_t(), pivot.get_mpz_t());
        if (quotient != 0) axpy(columns_[c], quotient, columns_[col]);
        if (find_row(columns_[c], r)) row_rest = true;
      }
      if (row_rest) {
        for (const std::uint32_t c : active_) {
          const WorkEntry* hit = find_row(columns_[c], r);
          if (hit && mpz_cmpabs(hit->value.get_mpz_t(), pivot.get_mpz_t()) < 0) {
            pivot = hit->value;
            col = c;
          }
        }
        continue;
      }

      // Row r is zero outside the pivot, so row operations touch only `col`.
      WorkColumn& pc = columns_[col];
      bool col_rest = false;
      std::size_t kept = 0;
      for (std::size_t idx = 0; idx < pc.size(); ++idx) {
        WorkEntry& e = pc[idx];
        if (e.row != r) {
          mpz_tdiv_r(e.value.get_mpz_t(), e.value.get_mpz_t(), pivot.get_mpz_t());
          if (e.value == 0) {
            --row_count_[e.row];
            --nnz_;
            continue;
          }
          col_rest = true;
        }
        if (kept != idx) pc[kept] = std::move(e);
        ++kept;
      }
      pc.resize(kept);
      if (!col_rest) return;
      for (const auto& e : pc) {
        if (mpz_cmpabs(e.value.get_mpz_t(), pivot.get_mpz_t()) < 0) {
          pivot = e.value;
          row = e.row;
        }
      }
      return reduce_pivot(row, col);
    }
  }

  std::size_t max_entries_;
  std::vector<std::size_t> row_count_;
  std::vector<WorkColumn> columns_;
  std::vector<std::uint32_t> active_;
  std::size_t nnz_ = 0;
  WorkColumn scratch_;
};

// Diagonal entries to invariant factors: (a, b) -> (gcd, lcm) pairwise.
std::vector<mpz_class> to_divisibility_chain(std::vector<mpz_class> diagonal) {
  std::size_t units = 0;
  std::vector<mpz_class> rest;
  for (auto& d : diagonal) {
    if (d == 1) {
      ++units;
    } else {
      rest.push_back(std::move(d));
    }
  }
  std::sort(rest.begin(), rest.end());
  mpz_class g;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    for (std::size_t j = i + 1; j < rest.size(); ++j) {
      mpz_gcd(g.get_mpz_t(), rest[i].get_mpz_t(), rest[j].get_mpz_t());
      if (g == rest[i]) continue;
      rest[j] = rest[j] / g * rest[i];
      rest[i] = g;
    }
  }
  std::vector<mpz_class> chain(units, mpz_class(1));
  for (auto& d : rest) {
    if (d == 1) {
      chain.insert(chain.begin(), mpz_class(1));
    } else {
      chain.push_back(std::move(d));
    }
  }
  return chain;
}

std::vector<std::vector<mpz_class>> to_dense(const SparseIntMatrix& m, bool transposed) {
  const std::size_t rows = transposed ? m.n_cols() : m.n_rows();
  const std::size_t cols = transposed ? m.n_rows() : m.n_cols();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    for (const auto& e : m.column(j).entries()) {
      if (transposed) {
        a[j][e.index] = e.value;
      } else {
        a[e.index][j] = e.value;
      }
    }
  }
  return a;
}

struct SmallField {
  std::uint64_t q;
  std::uint64_t reduce(const mpz_class& v) const {
    return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(q));
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % q; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + q - b; }
  std::uint64_t inv(std::uint64_t a) const {
    std::uint64_t result = 1;
    std::uint64_t base = a;
    for (std::uint64_t e = q - 2; e > 0; e >>= 1) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
    }
    return result;
  }
  static bool is_zero(std::uint64_t a) { return a == 0; }
};

struct BigField {
  mpz_class q;
  mpz_class reduce(const mpz_class& v) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
    return r;
  }
  mpz_class mul(const mpz_class& a, const mpz_class& b) const { return reduce(a * b); }
  mpz_class sub(const mpz_class& a, const mpz_class& b) const { return reduce(a - b); }
  mpz_class inv(const mpz_class& a) const {
    mpz_class r;
    mpz_invert(r.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
    return r;
  }
  static bool is_zero(const mpz_class& a) { return a == 0; }
};

// Reduced row echelon form in place; returns the pivot column of each pivot row.
template <typename Field, typename Elem>
std::vector<std::size_t> row_reduce(const Field& field, std::vector<std::vector<Elem>>& a,
                                    std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t p = rank;
    while (p < a.size() && Field::is_zero(a[p][c])) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    const Elem inv = field.inv(a[rank][c]);
    for (std::size_t x = c; x < cols; ++x) a[rank][x] = field.mul(a[rank][x], inv);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || Field::is_zero(a[r][c])) continue;
      const Elem factor = a[r][c];
      for (std::size_t x = c; x < cols; ++x) {
        if (!Field::is_zero(a[rank][x])) {
          a[r][x] = field.sub(a[r][x], field.mul(factor, a[rank][x]));
        }
      }
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

template <typename Field>
auto reduced_dense(const Field& field, const SparseIntMatrix& m) {
  using Elem = decltype(field.reduce(mpz_class{}));
  std::vector<std::vector<Elem>> a(m.n_rows(), std::vector<Elem>(m.n_cols()));
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    for (const auto& e : m.column(j).entries()) a[e.index][j] = field.reduce(e.value);
  }
  return a;
}

}  // namespace

SmithForm smith_normal_form(const SparseIntMatrix& m, const ExactOptions& options) {
  if (m.nnz() > options.max_entries) {
    throw BudgetError("matrix has more than " + std::to_string(options.max_entries) + " entries");
  }
  SmithEliminator elim(m, options.max_entries);
  return SmithForm{to_divisibility_chain(elim.diagonalize())};
}

SmithKernel default_smith_kernel(const ExactOptions& options) {
  return [options](const SparseIntMatrix& m) { return smith_normal_form(m, options); };
}

CokernelSummary cokernel_from_smith(std::size_t n_rows, const SmithForm& smith) {
  CokernelSummary out;
  out.free_rank = n_rows - smith.rank();
  for (const auto& d : smith.invariant_factors) {
    if (d > 1) {
      out.torsion_factors.push_back(d);
      out.torsion_order *= d;
    }
  }
  return out;
}

CokernelSummary cokernel(const SparseIntMatrix& m, const ExactOptions& options) {
  return cokernel_from_smith(m.n_rows(), smith_normal_form(m, options));
}

std::size_t rank_rational(const SparseIntMatrix& m) {
  // Fewer rows than columns keeps the elimination loop short.
  auto a = to_dense(m, m.n_rows() > m.n_cols());
  if (a.empty()) return 0;
  const std::size_t cols = a.front().size();
  mpz_class prev = 1;
  mpz_class t;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t p = rank;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    const mpz_class& pivot = a[rank][c];
    for (std::size_t r = rank + 1; r < a.size(); ++r) {
      const mpz_class lead = a[r][c];
      for (std::size_t x = c + 1; x < cols; ++x) {
        t = pivot * a[r][x];
        if (lead != 0) mpz_submul(t.get_mpz_t(), lead.get_mpz_t(), a[rank][x].get_mpz_t());
        mpz_divexact(a[r][x].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[r][c] = 0;
    }
    prev = pivot;
    ++rank;
  }
  return rank;
}

std::size_t rank_mod_q(const SparseIntMatrix& m, const mpz_class& q) {
  if (q < 2) throw ParameterError("modulus q must be a prime >= 2");
  assert(mpz_probab_prime_p(q.get_mpz_t(), 25) > 0);
  if (q < (mpz_class(1) << 32)) {
    const SmallField field{q.get_ui()};
    auto a = reduced_dense(field, m);
    return row_reduce(field, a, m.n_cols()).size();
  }
  const BigField field{q};
  auto a = reduced_dense(field, m);
  return row_reduce(field, a, m.n_cols()).size();
}

std::vector<std::vector<std::uint64_t>> kernel_basis_mod_q(const SparseIntMatrix& m,
                                                           std::uint64_t q) {
  if (q < 2) throw ParameterError("modulus q must be a prime >= 2");
  if (q >= (std::uint64_t{1} << 32)) throw ParameterError("kernel enumeration needs q < 2^32");
  const SmallField field{q};
  auto a = reduced_dense(field, m);
  const std::size_t cols = m.n_cols();
  const auto pivots = row_reduce(field, a, cols);
  std::vector<char> is_pivot(cols, 0);
  for (const std::size_t c : pivots) is_pivot[c] = 1;
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::uint64_t> v(cols, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = field.sub(0, a[r][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace torsionlab
