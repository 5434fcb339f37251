#include "torsionlab/matrix.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <tuple>

#include "torsionlab/errors.hpp"

namespace torsionlab {

SignPattern parse_sign_pattern(std::string_view name) {
  if (name == "alternating") return SignPattern::alternating;
  if (name == "ones" || name == "all_ones") return SignPattern::all_ones;
  throw ParameterError("unknown sign pattern: " + std::string(name));
}

std::string_view to_string(SignPattern pattern) {
  return pattern == SignPattern::alternating ? "alternating" : "ones";
}

ColumnVector::ColumnVector(std::size_t length, std::vector<Entry> entries)
    : length_(length), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].index >= length_) throw ParameterError("column entry index out of range");
    if (entries_[i].value == 0) throw ParameterError("column entry value is zero");
    if (i > 0 && entries_[i].index <= entries_[i - 1].index) {
      throw ParameterError("column entry indices not strictly increasing");
    }
  }
}

std::vector<std::uint32_t> ColumnVector::support() const {
  std::vector<std::uint32_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.index);
  return out;
}

SparseIntMatrix SparseIntMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                               std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.col, a.row) < std::tie(b.col, b.row);
  });
  SparseIntMatrix out(n_rows);
  out.columns_.reserve(n_cols);
  std::size_t t = 0;
  for (std::size_t j = 0; j < n_cols; ++j) {
    std::vector<Entry> entries;
    for (; t < triplets.size() && triplets[t].col == j; ++t) {
      const Triplet& tr = triplets[t];
      if (tr.row >= n_rows) throw ParameterError("matrix entry row out of range");
      if (t > 0 && triplets[t - 1].col == j && triplets[t - 1].row == tr.row) {
        throw ParameterError("repeated matrix entry");
      }
      if (tr.value != 0) entries.push_back({static_cast<std::uint32_t>(tr.row), tr.value});
    }
    out.columns_.push_back(std::make_shared<const ColumnVector>(n_rows, std::move(entries)));
  }
  if (t != triplets.size()) throw ParameterError("matrix entry column out of range");
  return out;
}

SparseIntMatrix SparseIntMatrix::from_dense(const std::vector<std::vector<long>>& rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = rows.empty() ? 0 : rows.front().size();
  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (rows[i].size() != n_cols) throw ParameterError("ragged dense matrix");
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (rows[i][j] != 0) triplets.push_back({i, j, mpz_class(rows[i][j])});
    }
  }
  return from_triplets(n_rows, n_cols, std::move(triplets));
}

std::size_t SparseIntMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& c : columns_) total += c->support_size();
  return total;
}

mpz_class SparseIntMatrix::at(std::size_t row, std::size_t col) const {
  const auto& entries = columns_.at(col)->entries();
  const auto it = std::lower_bound(entries.begin(), entries.end(), row,
                                   [](const Entry& e, std::size_t r) { return e.index < r; });
  if (it != entries.end() && it->index == row) return it->value;
  return 0;
}

void SparseIntMatrix::append_column(ColumnVector column) {
  append_column(std::make_shared<const ColumnVector>(std::move(column)));
}

void SparseIntMatrix::append_column(std::shared_ptr<const ColumnVector> column) {
  if (column->length() != n_rows_) throw ParameterError("column length does not match n_rows");
  columns_.push_back(std::move(column));
}

bool SparseIntMatrix::operator==(const SparseIntMatrix& other) const {
  if (n_rows_ != other.n_rows_ || columns_.size() != other.columns_.size()) return false;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j] != other.columns_[j] && !(*columns_[j] == *other.columns_[j])) return false;
  }
  return true;
}

SparseIntMatrix incidence_matrix(const Hypergraph& h, SignPattern pattern) {
  SparseIntMatrix out(h.n());
  for (std::size_t j = 0; j < h.edge_count(); ++j) {
    const auto e = h.edge(j);
    std::vector<Entry> entries;
    entries.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      const long sign = (pattern == SignPattern::alternating && i % 2 == 1) ? -1 : 1;
      entries.push_back({e[i] - 1, mpz_class(sign)});
    }
    out.append_column(ColumnVector(h.n(), std::move(entries)));
  }
  return out;
}

SparseIntMatrix restrict_columns(const SparseIntMatrix& m, std::span<const std::size_t> cols) {
  SparseIntMatrix out(m.n_rows());
  for (const std::size_t j : cols) {
    if (j >= m.n_cols()) throw ParameterError("column index out of range");
    out.append_column(m.shared_column(j));
  }
  return out;
}

SparseIntMatrix transpose(const SparseIntMatrix& m) {
  std::vector<std::vector<Entry>> rows(m.n_rows());
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    for (const auto& e : m.column(j).entries()) {
      rows[e.index].push_back({static_cast<std::uint32_t>(j), e.value});
    }
  }
  SparseIntMatrix out(m.n_cols());
  for (auto& r : rows) out.append_column(ColumnVector(m.n_cols(), std::move(r)));
  return out;
}

void write_sms(std::ostream& out, const SparseIntMatrix& m) {
  out << m.n_rows() << ' ' << m.n_cols() << " M\n";
  const SparseIntMatrix rows = transpose(m);
  for (std::size_t i = 0; i < rows.n_cols(); ++i) {
    for (const auto& e : rows.column(i).entries()) {
      out << (i + 1) << ' ' << (e.index + 1) << ' ' << e.value.get_str() << '\n';
    }
  }
  out << "0 0 0\n";
}

SparseIntMatrix read_sms(std::istream& in) {
  long long n_rows = -1, n_cols = -1;
  std::string tag;
  if (!(in >> n_rows >> n_cols >> tag) || n_rows < 0 || n_cols < 0 || tag != "M") {
    throw ParameterError("SMS header must be \"n_rows n_cols M\"");
  }
  std::vector<SparseIntMatrix::Triplet> triplets;
  for (;;) {
    long long i = 0, j = 0;
    std::string value;
    if (!(in >> i >> j >> value)) throw ParameterError("SMS file missing \"0 0 0\" terminator");
    if (i == 0 && j == 0) {
      if (value != "0") throw ParameterError("malformed SMS terminator");
      break;
    }
    if (i < 1 || i > n_rows || j < 1 || j > n_cols) {
      throw ParameterError("SMS entry index out of range");
    }
    mpz_class v;
    if (v.set_str(value, 10) != 0) throw ParameterError("SMS entry value is not an integer: " + value);
    triplets.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v});
  }
  std::string extra;
  if (in >> extra) throw ParameterError("trailing data after SMS terminator");
  return SparseIntMatrix::from_triplets(static_cast<std::size_t>(n_rows),
                                        static_cast<std::size_t>(n_cols), std::move(triplets));
}

}  // namespace torsionlab
