#pragma once

// Simplices of the complete complex K_n^(d) and sets of them.
//
// A simplex is a set of d+1 vertices in [0, n), n <= 64, stored as a bitmask.
// Simplices of a fixed dimension are numbered in colexicographic order, which
// for bitmasks coincides with numeric order of the masks.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "hypervol/error.hpp"
#include "hypervol/gf2.hpp"

namespace hypervol {

using Vertex = int;

inline constexpr int kMaxVertices = 64;

namespace detail {
struct BinomialTable {
  std::array<std::array<std::uint64_t, kMaxVertices + 1>, kMaxVertices + 1> c{};
  constexpr BinomialTable() {
    for (int n = 0; n <= kMaxVertices; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};
inline constexpr BinomialTable kBinomials{};
}  // namespace detail

inline constexpr std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n || n > kMaxVertices) return 0;
  return detail::kBinomials.c[n][k];
}

// Number of d-simplices on n vertices.
inline constexpr std::size_t simplex_count(int n, int d) { return binomial(n, d + 1); }

class SimplexKey {
 public:
  constexpr SimplexKey() = default;
  constexpr explicit SimplexKey(std::uint64_t mask) : mask_(mask) {}

  static SimplexKey from_vertices(std::span<const Vertex> vertices) {
    std::uint64_t mask = 0;
    for (Vertex v : vertices) {
      require(v >= 0 && v < kMaxVertices, "simplex vertex out of range: " + std::to_string(v));
      std::uint64_t bit = std::uint64_t{1} << v;
      require(!(mask & bit), "simplex has a repeated vertex: " + std::to_string(v));
      mask |= bit;
    }
    return SimplexKey(mask);
  }
  static SimplexKey from_vertices(std::initializer_list<Vertex> vertices) {
    return from_vertices(std::span<const Vertex>(vertices.begin(), vertices.size()));
  }

  // Inverse of index(): the colex-th simplex with d+1 vertices.
  static SimplexKey from_index(std::uint64_t index, int d) {
    std::uint64_t mask = 0;
    for (int i = d + 1; i >= 1; --i) {
      int v = i - 1;
      while (binomial(v + 1, i) <= index) ++v;
      index -= binomial(v, i);
      mask |= std::uint64_t{1} << v;
    }
    return SimplexKey(mask);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr int dim() const { return size() - 1; }
  constexpr bool contains(Vertex v) const { return (mask_ >> v) & 1U; }
  constexpr int max_vertex() const { return mask_ ? 63 - std::countl_zero(mask_) : -1; }

  std::uint64_t index() const {
    std::uint64_t idx = 0;
    std::uint64_t m = mask_;
    int i = 1;
    while (m) {
      int v = std::countr_zero(m);
      idx += binomial(v, i++);
      m &= m - 1;
    }
    return idx;
  }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t m = mask_; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  // Face obtained by dropping the i-th smallest vertex.
  SimplexKey drop(int i) const {
    std::uint64_t m = mask_;
    for (int k = 0; k < i; ++k) m &= m - 1;
    return SimplexKey(mask_ & ~(m & -m));
  }

  SimplexKey with(Vertex v) const { return SimplexKey(mask_ | (std::uint64_t{1} << v)); }
  SimplexKey without(Vertex v) const { return SimplexKey(mask_ & ~(std::uint64_t{1} << v)); }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (Vertex v : vertices()) {
      if (!first) s += ",";
      s += std::to_string(v);
      first = false;
    }
    return s + "}";
  }

  friend constexpr bool operator==(SimplexKey, SimplexKey) = default;
  // Colex order.
  friend constexpr auto operator<=>(SimplexKey a, SimplexKey b) { return a.mask_ <=> b.mask_; }

 private:
  std::uint64_t mask_ = 0;
};

// A set of d-simplices on n vertices, stored as a membership bit vector over
// the colex numbering of K_n^(d).
class SimplexSet {
 public:
  static constexpr std::size_t kMaxUniverse = std::size_t{1} << 26;

  SimplexSet() = default;
  SimplexSet(int n, int d) : n_(n), d_(d) {
    require(n >= 1 && n <= kMaxVertices, "vertex count must be in [1, 64]");
    require(d >= 0 && d + 1 <= n, "dimension must satisfy 0 <= d < n");
    require(simplex_count(n, d) <= kMaxUniverse, "too many simplices for a dense simplex set");
    bits_ = BitVector(simplex_count(n, d));
  }

  static SimplexSet complete(int n, int d) { return ~SimplexSet(n, d); }

  static SimplexSet from_bits(int n, int d, BitVector bits) {
    SimplexSet s(n, d);
    require(bits.size() == s.universe_size(), "simplex set bit vector has the wrong length");
    s.bits_ = std::move(bits);
    return s;
  }

  static SimplexSet from_keys(int n, int d, std::span<const SimplexKey> keys) {
    SimplexSet s(n, d);
    for (auto k : keys) s.insert(k);
    return s;
  }

  static SimplexSet from_vertex_lists(int n, int d, std::initializer_list<std::initializer_list<Vertex>> lists) {
    SimplexSet s(n, d);
    for (auto& l : lists) s.insert(SimplexKey::from_vertices(l));
    return s;
  }

  int n() const { return n_; }
  int d() const { return d_; }
  std::size_t universe_size() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  const BitVector& bits() const { return bits_; }

  void check_key(SimplexKey k) const {
    require(k.dim() == d_, "simplex " + k.to_string() + " does not have dimension " + std::to_string(d_));
    require(k.max_vertex() < n_, "simplex " + k.to_string() + " has a vertex >= n=" + std::to_string(n_));
  }

  bool contains(SimplexKey k) const { return k.dim() == d_ && k.max_vertex() < n_ && bits_.test(k.index()); }
  bool contains_index(std::size_t i) const { return bits_.test(i); }

  void insert(SimplexKey k) {
    check_key(k);
    bits_.set(k.index());
  }
  void insert_index(std::size_t i) { bits_.set(i); }
  void erase(SimplexKey k) {
    check_key(k);
    bits_.reset(k.index());
  }
  void erase_index(std::size_t i) { bits_.reset(i); }

  std::vector<std::size_t> indices() const { return bits_.ones(); }

  std::vector<SimplexKey> keys() const {
    std::vector<SimplexKey> out;
    bits_.for_each_one([&](std::size_t i) { out.push_back(SimplexKey::from_index(i, d_)); });
    return out;
  }

  template <class F>
  void for_each_index(F&& f) const {
    bits_.for_each_one(f);
  }

  SimplexSet operator~() const {
    SimplexSet r = *this;
    r.bits_ = ~bits_;
    return r;
  }
  SimplexSet& operator^=(const SimplexSet& o) {
    check_same_space(o);
    bits_ ^= o.bits_;
    return *this;
  }
  SimplexSet& operator&=(const SimplexSet& o) {
    check_same_space(o);
    bits_ &= o.bits_;
    return *this;
  }
  SimplexSet& operator|=(const SimplexSet& o) {
    check_same_space(o);
    bits_ |= o.bits_;
    return *this;
  }
  friend SimplexSet operator^(SimplexSet a, const SimplexSet& b) { return a ^= b; }
  friend SimplexSet operator&(SimplexSet a, const SimplexSet& b) { return a &= b; }
  friend SimplexSet operator|(SimplexSet a, const SimplexSet& b) { return a |= b; }

  std::size_t intersection_size(const SimplexSet& o) const {
    check_same_space(o);
    return bits_.and_count(o.bits_);
  }
  bool is_subset_of(const SimplexSet& o) const {
    check_same_space(o);
    return bits_.is_subset_of(o.bits_);
  }

  std::string to_string() const {
    std::string s = "[";
    bool first = true;
    for (auto k : keys()) {
      if (!first) s += " ";
      s += k.to_string();
      first = false;
    }
    return s + "]";
  }

  friend bool operator==(const SimplexSet&, const SimplexSet&) = default;
  friend auto operator<=>(const SimplexSet& a, const SimplexSet& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.d_ <=> b.d_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  void check_same_space(const SimplexSet& o) const {
    require(n_ == o.n_ && d_ == o.d_, "simplex sets live in different spaces");
  }

  int n_ = 0;
  int d_ = 0;
  BitVector bits_;
};

// Calls f(key) for each d-simplex on n vertices in colex order.
template <class F>
void for_each_simplex(int n, int d, F&& f) {
  if (d + 1 > n) return;
  std::uint64_t m = (d + 1 == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << (d + 1)) - 1;
  std::size_t total = simplex_count(n, d);
  for (std::size_t i = 0; i < total; ++i) {
    f(SimplexKey(m));
    if (i + 1 == total) break;
    // Gosper's hack: next mask with the same popcount.
    std::uint64_t c = m & -m;
    std::uint64_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
}

}  // namespace hypervol
