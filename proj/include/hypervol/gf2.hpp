#pragma once

// Bit-packed linear algebra over Z_2.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypervol/error.hpp"

namespace hypervol {

class BitVector {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static BitVector unit(std::size_t size, std::size_t i) {
    BitVector v(size);
    v.set(i);
    return v;
  }

  std::size_t size() const { return size_; }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value = true) {
    std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }
  void reset(std::size_t i) { set(i, false); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }
  bool none() const { return !any(); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::size_t lowest() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] != 0) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return npos;
  }

  // Parity of the bitwise AND, i.e. the Z_2 inner product.
  bool dot(const BitVector& other) const {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) acc ^= words_[k] & other.words_[k];
    return std::popcount(acc) & 1;
  }

  std::size_t and_count(const BitVector& other) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k)
      c += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
    return c;
  }

  BitVector& operator^=(const BitVector& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  BitVector& operator&=(const BitVector& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  BitVector& operator|=(const BitVector& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

  // Complement within [0, size).
  BitVector operator~() const {
    BitVector r(size_);
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = ~words_[k];
    r.trim();
    return r;
  }

  bool is_subset_of(const BitVector& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend auto operator<=>(const BitVector& a, const BitVector& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

  template <class F>
  void for_each_one(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for_each_one([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

 private:
  void trim() {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Row-major dense matrix over Z_2; each row is a packed BitVector.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

  static Gf2Matrix identity(std::size_t n) {
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static Gf2Matrix from_columns(std::size_t rows, std::span<const BitVector> columns) {
    Gf2Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      require(columns[c].size() == rows, "Gf2Matrix::from_columns: column length mismatch");
      columns[c].for_each_one([&](std::size_t r) { m.set(r, c); });
    }
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return rows_[r].test(c); }
  void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }
  const BitVector& row(std::size_t r) const { return rows_[r]; }

  BitVector column(std::size_t c) const {
    BitVector v(rows());
    for (std::size_t r = 0; r < rows(); ++r)
      if (rows_[r].test(c)) v.set(r);
    return v;
  }

  Gf2Matrix transpose() const {
    Gf2Matrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r) rows_[r].for_each_one([&](std::size_t c) { t.set(c, r); });
    return t;
  }

  // this * x, with x of length cols().
  BitVector multiply(const BitVector& x) const {
    require(x.size() == cols_, "Gf2Matrix::multiply: dimension mismatch");
    BitVector y(rows());
    for (std::size_t r = 0; r < rows(); ++r)
      if (rows_[r].dot(x)) y.set(r);
    return y;
  }

  std::size_t rank() const {
    std::vector<BitVector> work = rows_;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < work.size(); ++c) {
      std::size_t pivot = rank;
      while (pivot < work.size() && !work[pivot].test(c)) ++pivot;
      if (pivot == work.size()) continue;
      std::swap(work[rank], work[pivot]);
      for (std::size_t r = rank + 1; r < work.size(); ++r)
        if (work[r].test(c)) work[r] ^= work[rank];
      ++rank;
    }
    return rank;
  }

  // Some x with this * x = b, or nullopt when b is outside the column span.
  std::optional<BitVector> solve(const BitVector& b) const {
    require(b.size() == rows(), "Gf2Matrix::solve: right-hand side length must equal row count");
    std::vector<BitVector> work = rows_;
    BitVector rhs = b;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < work.size(); ++c) {
      std::size_t pivot = rank;
      while (pivot < work.size() && !work[pivot].test(c)) ++pivot;
      if (pivot == work.size()) continue;
      std::swap(work[rank], work[pivot]);
      bool tmp = rhs.test(rank);
      rhs.set(rank, rhs.test(pivot));
      rhs.set(pivot, tmp);
      for (std::size_t r = 0; r < work.size(); ++r) {
        if (r != rank && work[r].test(c)) {
          work[r] ^= work[rank];
          if (rhs.test(rank)) rhs.flip(r);
        }
      }
      pivot_cols.push_back(c);
      ++rank;
    }
    for (std::size_t r = rank; r < work.size(); ++r)
      if (rhs.test(r)) return std::nullopt;
    BitVector x(cols_);
    for (std::size_t i = 0; i < rank; ++i)
      if (rhs.test(i)) x.set(pivot_cols[i]);
    return x;
  }

  friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

// Incremental echelon basis: accepts one vector at a time and reports whether
// it was independent of everything accepted so far. Basis vectors have
// pairwise distinct lowest set bits.
//
// With tracking enabled every basis vector also remembers which accepted
// inputs (numbered 0..rank-1 in acceptance order) it is the sum of, so
// express() can write a vector of the span as a combination of inputs.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t length, bool track = false)
      : length_(length), track_(track), pivot_of_(length, -1) {}

  std::size_t length() const { return length_; }
  std::size_t rank() const { return basis_.size(); }

  bool insert(const BitVector& v) {
    BitVector r = v;
    BitVector combo = track_ ? BitVector(length_) : BitVector();
    reduce_in_place(r, track_ ? &combo : nullptr);
    std::size_t p = r.lowest();
    if (p == BitVector::npos) return false;
    if (track_) combo.set(basis_.size());
    pivot_of_[p] = static_cast<long>(basis_.size());
    basis_.push_back(std::move(r));
    if (track_) combos_.push_back(std::move(combo));
    return true;
  }

  BitVector reduce(const BitVector& v) const {
    BitVector r = v;
    reduce_in_place(r, nullptr);
    return r;
  }

  bool contains(const BitVector& v) const { return reduce(v).none(); }

  // Combination of accepted inputs summing to v (requires tracking).
  std::optional<BitVector> express(const BitVector& v) const {
    require(track_, "EchelonBasis::express requires tracking");
    BitVector r = v;
    BitVector combo(length_);
    reduce_in_place(r, &combo);
    if (r.any()) return std::nullopt;
    return combo;
  }

 private:
  void reduce_in_place(BitVector& r, BitVector* combo) const {
    for (;;) {
      std::size_t p = r.lowest();
      if (p == BitVector::npos) return;
      long b = pivot_of_[p];
      if (b < 0) return;
      r ^= basis_[static_cast<std::size_t>(b)];
      if (combo) *combo ^= combos_[static_cast<std::size_t>(b)];
    }
  }

  std::size_t length_;
  bool track_;
  std::vector<long> pivot_of_;
  std::vector<BitVector> basis_;
  std::vector<BitVector> combos_;
};

inline std::size_t rank(const Gf2Matrix& m) { return m.rank(); }

inline std::optional<BitVector> solve(const Gf2Matrix& m, const BitVector& b) { return m.solve(b); }

// True iff v is in the Z_2 span of the selected columns of m.
inline bool in_span(const Gf2Matrix& m, std::span<const std::size_t> selected_cols, const BitVector& v) {
  require(v.size() == m.rows(), "in_span: vector length must equal row count");
  EchelonBasis basis(m.rows());
  for (std::size_t c : selected_cols) {
    require(c < m.cols(), "in_span: column index out of range");
    basis.insert(m.column(c));
  }
  return basis.contains(v);
}

}  // namespace hypervol
