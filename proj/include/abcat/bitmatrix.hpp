#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace abcat {

/// A column vector over F2, one byte per entry.
using BitVector = std::vector<std::uint8_t>;

/// Dense matrix over the two-element field, row-major.
///
/// Entries are stored as bytes holding 0 or 1; every mutator reduces mod 2, so
/// no other value is ever representable. Dimensions are desk-scale, so the
/// storage is deliberately unpacked.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  /// Throws std::invalid_argument on ragged input or entries outside {0,1}.
  static BitMatrix from_rows(const std::vector<std::vector<int>>& rows);
  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
  /// `cols` is needed so that an empty row list still has a shape.
  static BitMatrix from_rows(std::size_t rows, std::size_t cols,
                             const std::vector<std::vector<int>>& entries);
  static BitMatrix from_column(const BitVector& v);
  /// Matrix whose columns are the given vectors, all of length `rows`.
  static BitMatrix from_columns(std::size_t rows, const std::vector<BitVector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  bool at(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { bits_[r * cols_ + c] = v ? 1 : 0; }
  void flip(std::size_t r, std::size_t c) { bits_[r * cols_ + c] ^= 1; }

  BitVector column(std::size_t c) const;
  BitVector row(std::size_t r) const;
  const std::vector<std::uint8_t>& entries() const { return bits_; }

  BitMatrix transpose() const;
  /// Rows [first, first + count).
  BitMatrix row_block(std::size_t first, std::size_t count) const;
  /// Columns [first, first + count).
  BitMatrix col_block(std::size_t first, std::size_t count) const;

  bool is_zero() const;
  bool is_identity() const;

  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);
  friend BitVector operator*(const BitMatrix& a, const BitVector& x);
  friend BitMatrix operator+(const BitMatrix& a, const BitMatrix& b);

  /// Lexicographic on (rows, cols, entries).
  friend auto operator<=>(const BitMatrix&, const BitMatrix&) = default;
  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

  /// Nested-list rendering, e.g. "[[1,1],[0,0]]"; shape is lost for empty matrices.
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// [a | b]
BitMatrix hstack(const BitMatrix& a, const BitMatrix& b);
/// [a ; b]
BitMatrix vstack(const BitMatrix& a, const BitMatrix& b);
/// diag(a, b)
BitMatrix block_diag(const BitMatrix& a, const BitMatrix& b);
/// Kronecker product a ⊗ I_k: entry a_ij becomes the block a_ij · I_k.
BitMatrix kron_identity(const BitMatrix& a, std::size_t k);
/// Kronecker product I_n ⊗ a (block diagonal with n copies of a).
BitMatrix identity_kron(std::size_t n, const BitMatrix& a);

struct RrefResult {
  BitMatrix reduced;
  std::vector<std::size_t> pivots;  // strictly increasing
};

RrefResult rref(const BitMatrix& m);
std::size_t rank(const BitMatrix& m);

/// Columns form the canonical basis of the null space: one column per free
/// variable of rref(m), in increasing order, with that variable set to 1 and the
/// other free variables set to 0.
BitMatrix kernel_basis(const BitMatrix& m);

/// Columns form the canonical basis of the column space: the transposed nonzero
/// rows of rref(mᵀ). Two matrices with equal column spaces get equal bases.
BitMatrix image_basis(const BitMatrix& m);

/// Some x with m·x = b, free variables set to 0; nullopt when inconsistent.
std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b);
/// Column-by-column solve of m·X = b.
std::optional<BitMatrix> solve(const BitMatrix& m, const BitMatrix& b);

std::string to_string(const BitVector& v);

}  // namespace abcat
