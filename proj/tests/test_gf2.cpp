#include <gtest/gtest.h>

#include <vector>

#include "hypervol/complex.hpp"
#include "hypervol/gf2.hpp"
#include "hypervol/rng.hpp"
#include "oracles.hpp"

using namespace hypervol;

namespace {

Gf2Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double density = 0.5) {
  Gf2Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      KeyedRng rng(seed, streams::kTest, r * cols + c);
      if (rng.uniform() < density) m.set(r, c);
    }
  return m;
}

std::vector<oracle::Row> byte_rows(const Gf2Matrix& m) {
  std::vector<oracle::Row> out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    oracle::Row row(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] = m.get(r, c);
    out.push_back(row);
  }
  return out;
}

}  // namespace

TEST(BitVector, BasicOps) {
  BitVector a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  EXPECT_EQ(a.count(), 3u);
  EXPECT_EQ(a.lowest(), 0u);
  EXPECT_EQ(a.and_count(b), 1u);
  EXPECT_TRUE(a.dot(b));
  EXPECT_TRUE(b.is_subset_of(a));
  EXPECT_EQ((~a).count(), 127u);
  a ^= b;
  EXPECT_FALSE(a.test(64));
  EXPECT_EQ(BitVector(5).lowest(), BitVector::npos);
  EXPECT_EQ(a.ones(), (std::vector<std::size_t>{0, 129}));
}

TEST(Gf2Rank, Identity) { EXPECT_EQ(rank(Gf2Matrix::identity(3)), 3u); }

TEST(Gf2Rank, Zero) { EXPECT_EQ(rank(Gf2Matrix(4, 7)), 0u); }

TEST(Gf2Rank, BoundaryOfTrianglesOnFiveVertices) {
  Gf2Matrix m = boundary_matrix(5, 2).z2();
  EXPECT_EQ(m.rows(), 10u);
  EXPECT_EQ(m.cols(), 10u);
  EXPECT_EQ(rank(m), 6u);
}

TEST(Gf2Rank, MatchesEliminationOracleAndTranspose) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Gf2Matrix m = random_matrix(20, 20, seed, seed % 2 ? 0.5 : 0.1);
    std::size_t r = rank(m);
    EXPECT_EQ(r, oracle::gf2_rank(byte_rows(m)));
    EXPECT_EQ(r, rank(m.transpose()));
    EXPECT_LE(r, 20u);
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Gf2Matrix m = random_matrix(13, 70, seed);
    EXPECT_EQ(rank(m), oracle::gf2_rank(byte_rows(m)));
    EXPECT_LE(rank(m), 13u);
  }
}

TEST(Gf2Solve, IdentityAndZero) {
  auto x = solve(Gf2Matrix::identity(4), BitVector::unit(4, 1));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, BitVector::unit(4, 1));
  EXPECT_FALSE(solve(Gf2Matrix(3, 3), BitVector::unit(3, 0)).has_value());
}

TEST(Gf2Solve, DimensionMismatchThrows) {
  EXPECT_THROW(solve(Gf2Matrix::identity(3), BitVector(4)), ValidationError);
}

TEST(Gf2Solve, EveryTriangleBoundaryIsInTheColumnSpan) {
  const auto& bm = boundary_matrix(5, 2);
  Gf2Matrix m = bm.z2();
  for (std::size_t c = 0; c < bm.cols(); ++c) {
    auto x = solve(m, bm.z2_column(c));
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(m.multiply(*x), bm.z2_column(c));
  }
}

TEST(Gf2Solve, RoundTripOnRandomSystems) {
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Gf2Matrix m = random_matrix(15, 12, seed, 0.3);
    BitVector b(15);
    for (std::size_t i = 0; i < 15; ++i) {
      KeyedRng rng(seed, streams::kTest + 1, i);
      if (rng.uniform() < 0.5) b.set(i);
    }
    auto x = solve(m, b);
    if (x) {
      ++solved;
      EXPECT_EQ(m.multiply(*x), b);
    }
    std::vector<std::size_t> all(12);
    for (std::size_t i = 0; i < 12; ++i) all[i] = i;
    EXPECT_EQ(in_span(m, all, b), x.has_value());
  }
  EXPECT_GT(solved, 0);
}

TEST(Gf2InSpan, SmallCases) {
  Gf2Matrix id = Gf2Matrix::identity(3);
  EXPECT_TRUE(in_span(id, {}, BitVector(3)));
  std::vector<std::size_t> sel{1};
  EXPECT_FALSE(in_span(id, sel, BitVector::unit(3, 2)));
  EXPECT_TRUE(in_span(id, sel, BitVector::unit(3, 1)));
}

TEST(Gf2InSpan, HypertreeColumnsSpanEveryBoundary) {
  const auto& bm = boundary_matrix(5, 2);
  Gf2Matrix m = bm.z2();
  // Star of vertex 0 is a hypertree.
  std::vector<std::size_t> star;
  std::vector<BitVector> star_cols;
  for_each_simplex(5, 2, [&](SimplexKey s) {
    if (s.contains(0)) {
      star.push_back(s.index());
      star_cols.push_back(bm.z2_column(s.index()));
    }
  });
  ASSERT_EQ(star.size(), 6u);
  for_each_simplex(5, 2, [&](SimplexKey s) {
    if (s.contains(0)) return;
    EXPECT_TRUE(in_span(m, star, bm.z2_column(s.index())));
    // Oracle: appending the column does not raise the rank.
    std::vector<oracle::Row> rows;
    for (auto& c : star_cols) {
      oracle::Row r(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) r[i] = c.test(i);
      rows.push_back(r);
    }
    std::size_t before = oracle::gf2_rank(rows);
    oracle::Row extra(bm.rows());
    for (std::size_t i = 0; i < bm.rows(); ++i) extra[i] = bm.z2_column(s.index()).test(i);
    rows.push_back(extra);
    EXPECT_EQ(oracle::gf2_rank(rows), before);
  });
}

TEST(EchelonBasis, ExpressReconstructsVector) {
  EchelonBasis basis(20, true);
  std::vector<BitVector> inserted;
  for (std::uint64_t i = 0; i < 12; ++i) {
    BitVector v(20);
    for (std::size_t j = 0; j < 20; ++j) {
      KeyedRng rng(7, streams::kTest, i * 20 + j);
      if (rng.uniform() < 0.4) v.set(j);
    }
    if (basis.insert(v)) inserted.push_back(v);
  }
  for (std::uint64_t t = 0; t < 30; ++t) {
    BitVector v(20);
    for (std::size_t j = 0; j < inserted.size(); ++j) {
      KeyedRng rng(8, streams::kTest, t * 64 + j);
      if (rng.uniform() < 0.5) v ^= inserted[j];
    }
    auto combo = basis.express(v);
    ASSERT_TRUE(combo.has_value());
    BitVector back(20);
    combo->for_each_one([&](std::size_t j) { back ^= inserted[j]; });
    EXPECT_EQ(back, v);
  }
}
