#pragma once

// Coboundaries and hypercuts of K_n^(d).

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hypervol/complex.hpp"
#include "hypervol/error.hpp"
#include "hypervol/gf2.hpp"
#include "hypervol/parallel.hpp"
#include "hypervol/simplex.hpp"

namespace hypervol {

// A set of d-simplices together with a (d-1)-set inducing it: sigma is in the
// cut iff an odd number of its facets lie in the inducer.
struct Coboundary {
  SimplexSet cut;
  SimplexSet inducer;
};

struct Hypercut {
  Coboundary co;
  bool certified = false;

  const SimplexSet& cut() const { return co.cut; }
};

// Inducer vertex used for canonical inducers.
inline Vertex canonical_apex(int n) { return n - 1; }

inline Coboundary coboundary_from_inducer(const SimplexSet& g) {
  int n = g.n();
  int d = g.d() + 1;
  require(d + 1 <= n, "inducer dimension too large for n");
  const auto& m = boundary_matrix(n, d);
  SimplexSet cut(n, d);
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (m.z2_column(c).dot(g.bits())) cut.insert_index(c);
  return {std::move(cut), g};
}

// Even intersection with the boundary of every (d+1)-simplex.
inline bool is_coboundary(const SimplexSet& c) {
  if (c.d() + 2 > c.n()) return true;
  const auto& m = boundary_matrix(c.n(), c.d() + 1);
  for (std::size_t r = 0; r < m.cols(); ++r)
    if (m.z2_column(r).dot(c.bits())) return false;
  return true;
}

// Canonical coboundary of a set that is known to be one.
inline Coboundary make_coboundary(const SimplexSet& cut) {
  require(cut.d() >= 1, "coboundaries need d >= 1");
  require(is_coboundary(cut), "set is not a coboundary");
  return {cut, link(cut, canonical_apex(cut.n()))};
}

inline bool is_hypercut(const SimplexSet& c) {
  if (c.d() < 1 || c.empty() || !is_coboundary(c)) return false;
  return column_rank(~c) + 1 == hypertree_size(c.n(), c.d());
}

inline Hypercut certify_hypercut(const SimplexSet& c) {
  require(is_hypercut(c), "set is not a hypercut: " + c.to_string());
  return {make_coboundary(c), true};
}

inline SimplexSet link_inducer(const Coboundary& b, Vertex v) {
  require(is_coboundary(b.cut), "link_inducer: input is not a coboundary");
  return link(b.cut, v);
}

// Union-find closure of V-equivalence on the edges of g: adjacent edges
// (u,v), (u,w) are equivalent when (v,w) is absent. True iff g is nonempty
// and has a single class.
inline bool is_v_connected(const SimplexSet& g) {
  require(g.d() == 1, "is_v_connected expects a graph (d = 1)");
  auto edges = g.keys();
  if (edges.empty()) return false;
  std::vector<std::size_t> parent(edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t classes = edges.size();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      std::uint64_t shared = edges[i].mask() & edges[j].mask();
      if (!shared) continue;
      SimplexKey closing(edges[i].mask() ^ edges[j].mask());
      if (g.contains(closing)) continue;
      std::size_t a = find(i), b = find(j);
      if (a != b) {
        parent[a] = b;
        --classes;
      }
    }
  }
  return classes == 1;
}

inline bool is_2hypercut_via_link(const Coboundary& b) {
  require(b.cut.d() == 2, "is_2hypercut_via_link expects d = 2");
  return is_v_connected(link(b.cut, canonical_apex(b.cut.n())));
}

// The unique hypercut meeting hypertree t exactly in sigma: everything
// outside the span closure of t - sigma.
inline Hypercut fundamental_hypercut(const SimplexSet& t, SimplexKey sigma) {
  require(t.contains(sigma), "fundamental_hypercut: sigma " + sigma.to_string() + " is not in the tree");
  require(is_hypertree(t), "fundamental_hypercut: input is not a hypertree");
  const auto& m = boundary_matrix(t.n(), t.d());
  EchelonBasis basis(m.rows());
  std::size_t skip = sigma.index();
  t.for_each_index([&](std::size_t c) {
    if (c != skip) basis.insert(m.z2_column(c));
  });
  SimplexSet cut(t.n(), t.d());
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!basis.contains(m.z2_column(c))) cut.insert_index(c);
  return {make_coboundary(cut), true};
}

// Splits a coboundary into pairwise disjoint hypercuts. Each step extends a
// basis of the complement by members of the remaining set up to a
// hyperplane of the column matroid; the simplices outside that hyperplane
// form a hypercut inside the remaining set.
inline std::vector<Hypercut> decompose_coboundary(const Coboundary& b) {
  require(is_coboundary(b.cut), "decompose_coboundary: input is not a coboundary");
  std::vector<Hypercut> out;
  if (b.cut.empty()) return out;
  const auto& m = boundary_matrix(b.cut.n(), b.cut.d());
  std::size_t target = hypertree_size(b.cut.n(), b.cut.d()) - 1;
  SimplexSet rest = b.cut;
  while (!rest.empty()) {
    EchelonBasis basis(m.rows());
    (~rest).for_each_index([&](std::size_t c) { basis.insert(m.z2_column(c)); });
    require(basis.rank() <= target, "decompose_coboundary: complement spans everything");
    rest.for_each_index([&](std::size_t c) {
      if (basis.rank() < target) basis.insert(m.z2_column(c));
    });
    SimplexSet piece(rest.n(), rest.d());
    rest.for_each_index([&](std::size_t c) {
      if (!basis.contains(m.z2_column(c))) piece.insert_index(c);
    });
    out.push_back({make_coboundary(piece), true});
    rest ^= piece;
  }
  return out;
}

// Default bound on C(n-1, d) for exhaustive enumeration (2^bound inducers).
inline constexpr std::size_t kDefaultEnumerationBits = 24;

// Every nonempty coboundary, via the bijection with inducers on V - {n-1}.
// Those inducers are exactly the first C(n-1, d) (d-1)-simplices in colex
// order, so inducer number `mask` has its bits at positions 0..C(n-1,d)-1.
template <class F>
void for_each_coboundary(int n, int d, std::size_t max_bits, F&& f) {
  require(d >= 1 && n >= d + 1, "coboundary enumeration needs 1 <= d < n");
  std::size_t m = hypertree_size(n, d);
  if (m > max_bits || m >= 63)
    throw GuardExceeded("enumeration over 2^" + std::to_string(m) + " inducers exceeds the limit of 2^" +
                        std::to_string(max_bits));
  std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    SimplexSet g(n, d - 1);
    for (std::uint64_t b = mask; b; b &= b - 1) g.insert_index(static_cast<std::size_t>(std::countr_zero(b)));
    f(coboundary_from_inducer(g));
  }
}

inline std::vector<Coboundary> enumerate_coboundaries(int n, int d, std::size_t max_bits = kDefaultEnumerationBits) {
  std::vector<Coboundary> out;
  for_each_coboundary(n, d, max_bits, [&](Coboundary b) { out.push_back(std::move(b)); });
  return out;
}

inline std::vector<Hypercut> enumerate_hypercuts(int n, int d, std::size_t max_bits = kDefaultEnumerationBits) {
  require(d >= 1 && n >= d + 1, "hypercut enumeration needs 1 <= d < n");
  std::size_t m = hypertree_size(n, d);
  if (m > max_bits || m >= 63)
    throw GuardExceeded("enumeration over 2^" + std::to_string(m) + " inducers exceeds the limit of 2^" +
                        std::to_string(max_bits));
  std::uint64_t total = std::uint64_t{1} << m;
  // Fixed-size blocks of inducers, merged in order.
  const std::uint64_t block = 1024;
  std::size_t blocks = static_cast<std::size_t>((total + block - 1) / block);
  std::vector<std::vector<Hypercut>> found(blocks);
  parallel_for(blocks, [&](std::size_t i) {
    std::uint64_t lo = std::max<std::uint64_t>(1, i * block);
    std::uint64_t hi = std::min<std::uint64_t>(total, (i + 1) * block);
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      SimplexSet g(n, d - 1);
      for (std::uint64_t b = mask; b; b &= b - 1) g.insert_index(static_cast<std::size_t>(std::countr_zero(b)));
      Coboundary co = coboundary_from_inducer(g);
      if (column_rank(~co.cut) + 1 == m) found[i].push_back({std::move(co), true});
    }
  });
  std::vector<Hypercut> out;
  for (auto& f : found)
    for (auto& h : f) out.push_back(std::move(h));
  return out;
}

// Tolerance for general position and barycentric coordinates.
inline constexpr double kGeometricTolerance = 1e-9;

// Rows of `points` are the images of the n vertices in R^d; they are scaled
// to unit length. Returns {sigma : origin in conv(phi(sigma))}, possibly
// empty. Throws DegenerateInput when some d of the points are linearly
// dependent or the origin is within tolerance of a simplex face.
inline SimplexSet geometric_cut_set(const Eigen::MatrixXd& points) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  require(d >= 1, "geometric cuts need points in R^d with d >= 1");
  require(n >= d + 1, "geometric cuts need at least d + 1 points");
  Eigen::MatrixXd p = points;
  for (int i = 0; i < n; ++i) {
    double norm = p.row(i).norm();
    if (!(norm > kGeometricTolerance)) throw DegenerateInput("point " + std::to_string(i) + " is at the origin");
    p.row(i) /= norm;
  }
  for_each_simplex(n, d - 1, [&](SimplexKey s) {
    auto vs = s.vertices();
    Eigen::MatrixXd a(d, d);
    for (int j = 0; j < d; ++j) a.row(j) = p.row(vs[static_cast<std::size_t>(j)]);
    if (std::abs(a.determinant()) <= kGeometricTolerance)
      throw DegenerateInput("points " + s.to_string() + " are not in general position");
  });
  SimplexSet cut(n, d);
  for_each_simplex(n, d, [&](SimplexKey s) {
    auto vs = s.vertices();
    Eigen::MatrixXd a(d + 1, d + 1);
    for (int j = 0; j <= d; ++j) {
      a.block(0, j, d, 1) = p.row(vs[static_cast<std::size_t>(j)]).transpose();
      a(d, j) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
    rhs(d) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) return;
    Eigen::VectorXd lambda = lu.solve(rhs);
    bool inside = true;
    for (int j = 0; j <= d; ++j) {
      if (std::abs(lambda(j)) <= kGeometricTolerance)
        throw DegenerateInput("origin lies on the boundary of " + s.to_string());
      if (lambda(j) < 0) inside = false;
    }
    if (inside) cut.insert(s);
  });
  return cut;
}

inline Hypercut geometric_hypercut(const Eigen::MatrixXd& points) {
  SimplexSet cut = geometric_cut_set(points);
  require(!cut.empty(), "no simplex contains the origin; the points lie in an open halfspace");
  return {make_coboundary(cut), is_hypercut(cut)};
}

// Rainbow simplices of a partition of [0, n) into d+1 nonempty blocks.
inline Hypercut partition_hypercut(int n, const std::vector<std::vector<Vertex>>& parts) {
  require(parts.size() >= 2, "a partition hypercut needs at least two blocks");
  const int d = static_cast<int>(parts.size()) - 1;
  std::vector<int> block(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < parts.size(); ++b) {
    require(!parts[b].empty(), "partition block " + std::to_string(b) + " is empty");
    for (Vertex v : parts[b]) {
      require(v >= 0 && v < n, "partition vertex out of range: " + std::to_string(v));
      require(block[static_cast<std::size_t>(v)] < 0, "vertex " + std::to_string(v) + " is in two blocks");
      block[static_cast<std::size_t>(v)] = static_cast<int>(b);
    }
  }
  for (int v = 0; v < n; ++v) require(block[static_cast<std::size_t>(v)] >= 0, "vertex " + std::to_string(v) + " is in no block");
  SimplexSet cut(n, d);
  for_each_simplex(n, d, [&](SimplexKey s) {
    std::uint64_t seen = 0;
    for (Vertex v : s.vertices()) seen |= std::uint64_t{1} << block[static_cast<std::size_t>(v)];
    if (std::popcount(seen) == d + 1) cut.insert(s);
  });
  return {make_coboundary(cut), is_hypercut(cut)};
}

}  // namespace hypervol
