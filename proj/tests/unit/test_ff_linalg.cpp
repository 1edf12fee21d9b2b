#include <stdexcept>

#include "abcat/bitmatrix.hpp"
#include "doctest.h"
#include "oracles.hpp"

using abcat::BitMatrix;
using abcat::BitVector;

TEST_CASE("rref of a repeated row") {
  const auto r = abcat::rref(BitMatrix::from_rows({{1, 1}, {1, 1}}));
  CHECK(r.reduced == BitMatrix::from_rows({{1, 1}, {0, 0}}));
  CHECK(r.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("rref of identity and zero") {
  const auto id = abcat::rref(BitMatrix::identity(2));
  CHECK(id.reduced.is_identity());
  CHECK(id.pivots == std::vector<std::size_t>{0, 1});
  const auto z = abcat::rref(BitMatrix::zero(2, 3));
  CHECK(z.reduced.is_zero());
  CHECK(z.pivots.empty());
}

TEST_CASE("kernel basis examples") {
  const BitMatrix k = abcat::kernel_basis(BitMatrix::from_rows({{1, 1}}));
  REQUIRE(k.rows() == 2);
  REQUIRE(k.cols() == 1);
  CHECK(k.column(0) == BitVector{1, 1});

  const BitMatrix none = abcat::kernel_basis(BitMatrix::identity(3));
  CHECK(none.rows() == 3);
  CHECK(none.cols() == 0);

  CHECK(abcat::kernel_basis(BitMatrix::zero(1, 2)).is_identity());
}

TEST_CASE("image basis examples") {
  const BitMatrix im = abcat::image_basis(BitMatrix::from_rows({{1, 1}}));
  CHECK(im == BitMatrix::from_rows({{1}}));
  CHECK(abcat::image_basis(BitMatrix::zero(2, 2)).cols() == 0);
  CHECK(abcat::image_basis(BitMatrix::identity(3)).is_identity());
}

TEST_CASE("entries outside {0,1} are rejected") {
  CHECK_THROWS_AS(BitMatrix::from_rows({{1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(BitMatrix::from_rows({{1, 0}, {1}}), std::invalid_argument);
}

TEST_CASE("rref, kernel and image agree with enumeration on every matrix up to 3x3") {
  for (std::size_t rows = 0; rows <= 3; ++rows) {
    for (std::size_t cols = 0; cols <= 3; ++cols) {
      for (const auto& m : oracle::all_matrices(rows, cols)) {
        const auto om = oracle::from(m);
        const auto r = abcat::rref(m);
        // Row space preserved: same null space, and pivots strictly increase.
        CHECK(oracle::null_space(oracle::from(r.reduced)) == oracle::null_space(om));
        for (std::size_t i = 1; i < r.pivots.size(); ++i) CHECK(r.pivots[i - 1] < r.pivots[i]);
        const std::size_t rk = oracle::log2_size(oracle::column_space(om).size());
        CHECK(abcat::rank(m) == rk);

        const BitMatrix k = abcat::kernel_basis(m);
        CHECK(k.rows() == cols);
        CHECK(k.cols() == cols - rk);
        CHECK((m * k).is_zero());
        CHECK(oracle::column_space(oracle::from(k)) == oracle::null_space(om));

        const BitMatrix im = abcat::image_basis(m);
        CHECK(im.cols() == rk);
        CHECK(oracle::column_space(oracle::from(im)) == oracle::column_space(om));
      }
    }
  }
}

TEST_CASE("solve finds a preimage exactly when one exists") {
  for (std::size_t rows = 1; rows <= 3; ++rows) {
    for (std::size_t cols = 1; cols <= 3; ++cols) {
      for (const auto& m : oracle::all_matrices(rows, cols)) {
        const auto image = oracle::column_space(oracle::from(m));
        for (oracle::Vec b = 0; b < (1u << rows); ++b) {
          BitVector bv(rows);
          for (std::size_t i = 0; i < rows; ++i) bv[i] = b >> i & 1;
          const auto x = abcat::solve(m, bv);
          CHECK(x.has_value() == (image.count(b) == 1));
          if (x) CHECK(m * *x == bv);
        }
      }
    }
  }
}

TEST_CASE("stacking and Kronecker helpers") {
  const BitMatrix a = BitMatrix::from_rows({{1, 0}, {1, 1}});
  CHECK(abcat::hstack(a, BitMatrix::identity(2)).cols() == 4);
  CHECK(abcat::vstack(a, a).rows() == 4);
  const BitMatrix kron = abcat::kron_identity(a, 2);
  CHECK(kron == BitMatrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}}));
  const BitMatrix ik = abcat::identity_kron(2, a);
  CHECK(ik == abcat::block_diag(a, a));
  CHECK(a.to_string() == "[[1,0],[1,1]]");
}
