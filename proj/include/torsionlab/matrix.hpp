#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "torsionlab/model.hpp"

namespace torsionlab {

enum class SignPattern {
  alternating,  // i-th smallest vertex of an edge gets (-1)^(i+1)
  all_ones,
};

SignPattern parse_sign_pattern(std::string_view name);
std::string_view to_string(SignPattern pattern);

struct Entry {
  std::uint32_t index;
  mpz_class value;

  bool operator==(const Entry&) const = default;
};

/// Sparse integer vector; indices strictly increasing, values nonzero.
class ColumnVector {
 public:
  ColumnVector() = default;
  explicit ColumnVector(std::size_t length) : length_(length) {}
  /// Throws ParameterError on unsorted, duplicate, out-of-range or zero entries.
  ColumnVector(std::size_t length, std::vector<Entry> entries);

  std::size_t length() const { return length_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  std::vector<std::uint32_t> support() const;

  bool operator==(const ColumnVector&) const = default;

 private:
  std::size_t length_ = 0;
  std::vector<Entry> entries_;
};

/// Column-major sparse integer matrix. Columns are shared immutable values, so
/// column restriction and appends never copy entries.
class SparseIntMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    mpz_class value;
  };

  SparseIntMatrix() = default;
  explicit SparseIntMatrix(std::size_t n_rows) : n_rows_(n_rows) {}

  /// Zero values are dropped; a repeated (row, col) is a ParameterError.
  static SparseIntMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                       std::vector<Triplet> triplets);
  static SparseIntMatrix from_dense(const std::vector<std::vector<long>>& rows);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return columns_.size(); }
  std::size_t nnz() const;

  const ColumnVector& column(std::size_t j) const { return *columns_[j]; }
  const std::shared_ptr<const ColumnVector>& shared_column(std::size_t j) const {
    return columns_[j];
  }
  mpz_class at(std::size_t row, std::size_t col) const;

  void append_column(ColumnVector column);
  void append_column(std::shared_ptr<const ColumnVector> column);

  bool operator==(const SparseIntMatrix& other) const;

 private:
  std::size_t n_rows_ = 0;
  std::vector<std::shared_ptr<const ColumnVector>> columns_;
};

/// Signed incidence matrix: rows are vertices, column j is edge j.
SparseIntMatrix incidence_matrix(const Hypergraph& h, SignPattern pattern);

/// Columns `cols` of m, in the given order. Out-of-range index: ParameterError.
SparseIntMatrix restrict_columns(const SparseIntMatrix& m, std::span<const std::size_t> cols);

SparseIntMatrix transpose(const SparseIntMatrix& m);

/// SMS-style text: "n_rows n_cols M", then "i j v" lines (1-based, row-major),
/// then "0 0 0".
void write_sms(std::ostream& out, const SparseIntMatrix& m);
SparseIntMatrix read_sms(std::istream& in);

}  // namespace torsionlab
