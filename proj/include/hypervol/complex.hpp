#pragma once

// Boundary matrices, cycles, links and hypertrees on K_n^(d).

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "hypervol/error.hpp"
#include "hypervol/gf2.hpp"
#include "hypervol/simplex.hpp"

namespace hypervol {

// Incidence of (d-1)-simplices (rows) against d-simplices (columns). Column
// sigma has a nonzero at each facet; dropping the i-th smallest vertex of
// sigma gives sign (-1)^i.
class BoundaryMatrix {
 public:
  BoundaryMatrix(int n, int d) : n_(n), d_(d) {
    require(d >= 1, "boundary matrix needs d >= 1");
    require(n >= d + 1 && n <= kMaxVertices, "boundary matrix needs d + 1 <= n <= 64");
    rows_ = simplex_count(n, d - 1);
    cols_ = simplex_count(n, d);
    faces_.reserve(cols_ * static_cast<std::size_t>(d + 1));
    columns_.reserve(cols_);
    for_each_simplex(n, d, [&](SimplexKey s) {
      BitVector col(rows_);
      for (int i = 0; i <= d; ++i) {
        auto r = static_cast<std::uint32_t>(s.drop(i).index());
        faces_.push_back(r);
        col.set(r);
      }
      columns_.push_back(std::move(col));
    });
  }

  int n() const { return n_; }
  int d() const { return d_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Row index of the facet of column c that omits its i-th smallest vertex.
  std::size_t face(std::size_t c, int i) const { return faces_[c * static_cast<std::size_t>(d_ + 1) + i]; }
  static int sign(int i) { return (i % 2 == 0) ? 1 : -1; }

  const BitVector& z2_column(std::size_t c) const { return columns_[c]; }

  Gf2Matrix z2() const { return Gf2Matrix::from_columns(rows_, columns_); }

  Eigen::MatrixXd real_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t c = 0; c < cols_; ++c)
      for (int i = 0; i <= d_; ++i) m(static_cast<Eigen::Index>(face(c, i)), static_cast<Eigen::Index>(c)) = sign(i);
    return m;
  }

  Eigen::SparseMatrix<double> real_sparse() const {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(faces_.size());
    for (std::size_t c = 0; c < cols_; ++c)
      for (int i = 0; i <= d_; ++i)
        entries.emplace_back(static_cast<int>(face(c, i)), static_cast<int>(c), sign(i));
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
  }

 private:
  int n_;
  int d_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> faces_;
  std::vector<BitVector> columns_;
};

// Shared, lazily built boundary matrix for (n, d).
inline const BoundaryMatrix& boundary_matrix(int n, int d) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<BoundaryMatrix>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, d}];
  if (!slot) slot = std::make_unique<BoundaryMatrix>(n, d);
  return *slot;
}

inline const BoundaryMatrix& real_boundary(int n, int d) { return boundary_matrix(n, d); }

inline SimplexSet boundary(const SimplexSet& a) {
  require(a.d() >= 1, "boundary needs d >= 1");
  const auto& m = boundary_matrix(a.n(), a.d());
  BitVector acc(m.rows());
  a.for_each_index([&](std::size_t c) { acc ^= m.z2_column(c); });
  return SimplexSet::from_bits(a.n(), a.d() - 1, std::move(acc));
}

inline bool is_cycle(const SimplexSet& z) { return boundary(z).empty(); }

// Size of every d-hypertree on n vertices.
inline std::size_t hypertree_size(int n, int d) { return binomial(n - 1, d); }

// Rank over Z_2 of the boundary columns of k.
inline std::size_t column_rank(const SimplexSet& k) {
  const auto& m = boundary_matrix(k.n(), k.d());
  EchelonBasis basis(m.rows());
  std::size_t target = hypertree_size(k.n(), k.d());
  k.for_each_index([&](std::size_t c) {
    if (basis.rank() < target) basis.insert(m.z2_column(c));
  });
  return basis.rank();
}

// Greedy over the columns of k in colex order; nullopt when k spans less
// than the full column space.
inline std::optional<SimplexSet> find_hypertree(const SimplexSet& k) {
  const auto& m = boundary_matrix(k.n(), k.d());
  EchelonBasis basis(m.rows());
  SimplexSet tree(k.n(), k.d());
  std::size_t target = hypertree_size(k.n(), k.d());
  k.for_each_index([&](std::size_t c) {
    if (basis.rank() < target && basis.insert(m.z2_column(c))) tree.insert_index(c);
  });
  if (basis.rank() != target) return std::nullopt;
  return tree;
}

inline bool is_connected(const SimplexSet& k) { return column_rank(k) == hypertree_size(k.n(), k.d()); }

inline bool is_hypertree(const SimplexSet& t) {
  return t.size() == hypertree_size(t.n(), t.d()) && column_rank(t) == t.size();
}

// {tau : v not in tau, tau + v in x}, as a (d-1)-set on the same n vertices.
inline SimplexSet link(const SimplexSet& x, Vertex v) {
  require(x.d() >= 1, "link needs d >= 1");
  require(v >= 0 && v < x.n(), "link vertex out of range");
  SimplexSet out(x.n(), x.d() - 1);
  x.for_each_index([&](std::size_t i) {
    SimplexKey s = SimplexKey::from_index(i, x.d());
    if (s.contains(v)) out.insert(s.without(v));
  });
  return out;
}

// All d-simplices containing v.
inline SimplexSet star(int n, int d, Vertex v) {
  require(v >= 0 && v < n, "star vertex out of range");
  SimplexSet out(n, d);
  for_each_simplex(n, d, [&](SimplexKey s) {
    if (s.contains(v)) out.insert(s);
  });
  return out;
}

// True iff the boundary columns of z are a circuit: z is a nonempty cycle
// with no nonempty proper subcycle.
inline bool is_simple_cycle(const SimplexSet& z) {
  if (z.empty() || !is_cycle(z)) return false;
  return column_rank(z) + 1 == z.size();
}

// Calls f(cycle bits) for every simple d-cycle with at most max_size
// simplices. Every cycle is the sum of the cone boundaries d(tau + v) over
// its simplices tau avoiding v = n-1, so the search runs over subsets of
// those simplices; it never needs subsets larger than max_size. Throws
// GuardExceeded after node_limit search nodes.
template <class F>
void for_each_simple_cycle(int n, int d, std::size_t max_size, std::size_t node_limit, F&& f) {
  require(d >= 1 && n >= d + 2, "simple cycles need d >= 1 and n >= d + 2");
  const auto& m = boundary_matrix(n, d);
  const Vertex apex = n - 1;
  std::vector<BitVector> cones;
  for_each_simplex(n - 1, d, [&](SimplexKey tau) {
    BitVector z(simplex_count(n, d));
    SimplexKey top = tau.with(apex);
    for (int i = 0; i <= d + 1; ++i) z.set(top.drop(i).index());
    cones.push_back(std::move(z));
  });

  std::size_t nodes = 0;
  BitVector z(simplex_count(n, d));
  auto report = [&] {
    std::size_t size = z.count();
    if (size == 0 || size > max_size) return;
    EchelonBasis basis(m.rows());
    std::size_t r = 0;
    z.for_each_one([&](std::size_t c) { r += basis.insert(m.z2_column(c)); });
    if (r + 1 == size) f(static_cast<const BitVector&>(z));
  };
  auto dfs = [&](auto&& self, std::size_t next, std::size_t depth) -> void {
    if (++nodes > node_limit) throw GuardExceeded("simple cycle enumeration exceeded its node limit");
    report();
    if (depth == max_size) return;
    for (std::size_t j = next; j < cones.size(); ++j) {
      z ^= cones[j];
      self(self, j + 1, depth + 1);
      z ^= cones[j];
    }
  };
  dfs(dfs, 0, 0);
}

inline std::vector<SimplexSet> enumerate_simple_cycles(int n, int d, std::size_t max_size,
                                                       std::size_t node_limit = std::size_t{1} << 24) {
  std::vector<SimplexSet> out;
  for_each_simple_cycle(n, d, max_size, node_limit,
                        [&](const BitVector& bits) { out.push_back(SimplexSet::from_bits(n, d, bits)); });
  return out;
}

// Vertices touched by a set of simplices.
inline int vertex_count(const SimplexSet& s) {
  std::uint64_t mask = 0;
  s.for_each_index([&](std::size_t i) { mask |= SimplexKey::from_index(i, s.d()).mask(); });
  return std::popcount(mask);
}

}  // namespace hypervol
