#include "abcat/bitmatrix.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace abcat {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(std::size_t rows, std::size_t cols,
                               const std::vector<std::vector<int>>& entries) {
  if (entries.size() != rows) {
    throw std::invalid_argument("BitMatrix: expected " + std::to_string(rows) + " rows, got " +
                                std::to_string(entries.size()));
  }
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (entries[r].size() != cols) {
      throw std::invalid_argument("BitMatrix: row " + std::to_string(r) + " has " +
                                  std::to_string(entries[r].size()) + " entries, expected " +
                                  std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      int v = entries[r][c];
      if (v != 0 && v != 1) throw std::invalid_argument("BitMatrix: entry outside {0,1}");
      m.set(r, c, v == 1);
    }
  }
  return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  return from_rows(rows.size(), cols, rows);
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v);
}

BitMatrix BitMatrix::from_column(const BitVector& v) {
  BitMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i] & 1);
  return m;
}

BitMatrix BitMatrix::from_columns(std::size_t rows, const std::vector<BitVector>& columns) {
  BitMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("BitMatrix: column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m.set(r, c, columns[c][r] & 1);
  }
  return m;
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = bits_[r * cols_ + c];
  return v;
}

BitVector BitMatrix::row(std::size_t r) const {
  return BitVector(bits_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   bits_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
  return t;
}

BitMatrix BitMatrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw std::out_of_range("BitMatrix::row_block");
  BitMatrix b(count, cols_);
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < cols_; ++c) b.set(r, c, at(first + r, c));
  return b;
}

BitMatrix BitMatrix::col_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw std::out_of_range("BitMatrix::col_block");
  BitMatrix b(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) b.set(r, c, at(r, first + c));
  return b;
}

bool BitMatrix::is_zero() const {
  for (auto b : bits_)
    if (b) return false;
  return true;
}

bool BitMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (at(r, c) != (r == c)) return false;
  return true;
}

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw std::invalid_argument("BitMatrix product: " + std::to_string(a.rows_) + "x" +
                                std::to_string(a.cols_) + " times " + std::to_string(b.rows_) +
                                "x" + std::to_string(b.cols_));
  }
  BitMatrix p(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (!a.at(i, k)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) p.bits_[i * p.cols_ + j] ^= b.bits_[k * b.cols_ + j];
    }
  }
  return p;
}

BitVector operator*(const BitMatrix& a, const BitVector& x) {
  if (a.cols_ != x.size()) throw std::invalid_argument("BitMatrix-vector product: size mismatch");
  BitVector y(a.rows_, 0);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::uint8_t acc = 0;
    for (std::size_t k = 0; k < a.cols_; ++k) acc ^= static_cast<std::uint8_t>(a.at(i, k) & x[k]);
    y[i] = acc;
  }
  return y;
}

BitMatrix operator+(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("BitMatrix sum: shape mismatch");
  BitMatrix s = a;
  for (std::size_t i = 0; i < s.bits_.size(); ++i) s.bits_[i] ^= b.bits_[i];
  return s;
}

std::string BitMatrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) out << ',';
    out << '[';
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) out << ',';
      out << (at(r, c) ? 1 : 0);
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

std::string to_string(const BitVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i] ? '1' : '0';
  }
  return s + ")";
}

BitMatrix hstack(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row count mismatch");
  BitMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m.set(r, c, a.at(r, c));
    for (std::size_t c = 0; c < b.cols(); ++c) m.set(r, a.cols() + c, b.at(r, c));
  }
  return m;
}

BitMatrix vstack(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column count mismatch");
  BitMatrix m(a.rows() + b.rows(), a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    for (std::size_t r = 0; r < a.rows(); ++r) m.set(r, c, a.at(r, c));
    for (std::size_t r = 0; r < b.rows(); ++r) m.set(a.rows() + r, c, b.at(r, c));
  }
  return m;
}

BitMatrix block_diag(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m.set(r, c, a.at(r, c));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m.set(a.rows() + r, a.cols() + c, b.at(r, c));
  return m;
}

BitMatrix kron_identity(const BitMatrix& a, std::size_t k) {
  BitMatrix m(a.rows() * k, a.cols() * k);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j))
        for (std::size_t t = 0; t < k; ++t) m.set(i * k + t, j * k + t, true);
  return m;
}

BitMatrix identity_kron(std::size_t n, const BitMatrix& a) {
  BitMatrix m(n * a.rows(), n * a.cols());
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) m.set(b * a.rows() + i, b * a.cols() + j, a.at(i, j));
  return m;
}

RrefResult rref(const BitMatrix& m) {
  RrefResult out{m, {}};
  BitMatrix& a = out.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && !a.at(pivot, col)) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        bool tmp = a.at(row, c);
        a.set(row, c, a.at(pivot, c));
        a.set(pivot, c, tmp);
      }
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || !a.at(r, col)) continue;
      for (std::size_t c = col; c < a.cols(); ++c)
        if (a.at(row, c)) a.flip(r, c);
    }
    out.pivots.push_back(col);
    ++row;
  }
  return out;
}

std::size_t rank(const BitMatrix& m) { return rref(m).pivots.size(); }

BitMatrix kernel_basis(const BitMatrix& m) {
  auto [r, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<BitVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    BitVector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = r.at(i, free) ? 1 : 0;
    basis.push_back(std::move(v));
  }
  return BitMatrix::from_columns(m.cols(), basis);
}

BitMatrix image_basis(const BitMatrix& m) {
  auto [r, pivots] = rref(m.transpose());
  return r.row_block(0, pivots.size()).transpose();
}

std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side length mismatch");
  auto [r, pivots] = rref(hstack(m, BitMatrix::from_column(b)));
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  BitVector x(m.cols(), 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r.at(i, m.cols()) ? 1 : 0;
  return x;
}

std::optional<BitMatrix> solve(const BitMatrix& m, const BitMatrix& b) {
  if (b.rows() != m.rows()) throw std::invalid_argument("solve: right-hand side row mismatch");
  std::vector<BitVector> cols;
  cols.reserve(b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    auto x = solve(m, b.column(c));
    if (!x) return std::nullopt;
    cols.push_back(std::move(*x));
  }
  return BitMatrix::from_columns(m.cols(), cols);
}

}  // namespace abcat
