#pragma once

// d-volume functions on K_n^(d): validation, Euclidean volumes, cut volumes,
// lightest-cap volumes and distortion.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "hypervol/complex.hpp"
#include "hypervol/cuts.hpp"
#include "hypervol/error.hpp"
#include "hypervol/parallel.hpp"
#include "hypervol/simplex.hpp"

namespace hypervol {

struct VolumeFunction {
  int n = 0;
  int d = 0;
  std::vector<double> values;  // colex order over all d-simplices

  VolumeFunction() = default;
  VolumeFunction(int n_, int d_, double fill = 0.0) : n(n_), d(d_), values(simplex_count(n_, d_), fill) {
    require(n_ >= 1 && n_ <= kMaxVertices && d_ >= 0 && d_ < n_, "volume function needs 0 <= d < n <= 64");
  }
  VolumeFunction(int n_, int d_, std::vector<double> v) : n(n_), d(d_), values(std::move(v)) { validate(); }

  double operator[](SimplexKey s) const { return values[s.index()]; }
  double& operator[](SimplexKey s) { return values[s.index()]; }
  std::size_t size() const { return values.size(); }

  void validate() const {
    require(n >= 1 && n <= kMaxVertices && d >= 0 && d < n, "volume function needs 0 <= d < n <= 64");
    require(values.size() == simplex_count(n, d), "volume function has " + std::to_string(values.size()) +
                                                      " values, expected " + std::to_string(simplex_count(n, d)));
    for (std::size_t i = 0; i < values.size(); ++i)
      require(std::isfinite(values[i]) && values[i] >= 0.0,
              "volume value " + std::to_string(i) + " is negative or not finite");
  }

  VolumeFunction& operator+=(const VolumeFunction& o) {
    require(n == o.n && d == o.d, "volume functions live on different complexes");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  friend VolumeFunction operator+(VolumeFunction a, const VolumeFunction& b) { return a += b; }
  friend VolumeFunction operator*(double s, VolumeFunction v) {
    for (auto& x : v.values) x *= s;
    return v;
  }
  friend bool operator==(const VolumeFunction&, const VolumeFunction&) = default;
};

struct VolumeCheck {
  bool ok = true;
  std::size_t cycles_checked = 0;
  std::optional<SimplexSet> cycle;  // violating simple cycle
  std::optional<SimplexKey> sigma;  // its simplex whose value exceeds the rest
};

// Generalized triangle inequality over every simple cycle with at most
// cycle_size_bound simplices. Only cycles up to the bound are examined, so a
// passing result is a partial certificate unless the bound covers all
// simple cycles.
inline VolumeCheck check_volume(const VolumeFunction& v, std::size_t cycle_size_bound,
                                std::size_t node_limit = std::size_t{1} << 24) {
  v.validate();
  VolumeCheck result;
  if (v.d < 1 || v.n < v.d + 2) return result;
  for_each_simple_cycle(v.n, v.d, cycle_size_bound, node_limit, [&](const BitVector& z) {
    ++result.cycles_checked;
    if (!result.ok) return;
    double total = 0.0, top = -1.0;
    std::size_t arg = 0;
    z.for_each_one([&](std::size_t i) {
      total += v.values[i];
      if (v.values[i] > top) {
        top = v.values[i];
        arg = i;
      }
    });
    double tol = 1e-9 * total + 1e-12;
    if (total - top < top - tol) {
      result.ok = false;
      result.cycle = SimplexSet::from_bits(v.n, v.d, z);
      result.sigma = SimplexKey::from_index(arg, v.d);
    }
  });
  return result;
}

// Rows of `points` are the images of the vertices; value(sigma) is the
// d-dimensional volume of their convex hull.
inline VolumeFunction euclidean_volume(const Eigen::MatrixXd& points, int d) {
  const int n = static_cast<int>(points.rows());
  require(d >= 1, "euclidean_volume needs d >= 1");
  require(points.cols() >= d, "euclidean_volume needs ambient dimension >= d");
  VolumeFunction v(n, d);
  double factorial = std::tgamma(d + 1.0);
  std::size_t i = 0;
  for_each_simplex(n, d, [&](SimplexKey s) {
    auto vs = s.vertices();
    Eigen::MatrixXd e(d, points.cols());
    for (int j = 0; j < d; ++j) e.row(j) = points.row(vs[static_cast<std::size_t>(j + 1)]) - points.row(vs[0]);
    Eigen::MatrixXd gram = e * e.transpose();
    double det = Eigen::FullPivLU<Eigen::MatrixXd>(gram).determinant();
    v.values[i++] = std::sqrt(std::max(det, 0.0)) / factorial;
  });
  return v;
}

inline VolumeFunction indicator_volume(const SimplexSet& s) {
  VolumeFunction v(s.n(), s.d());
  s.for_each_index([&](std::size_t i) { v.values[i] = 1.0; });
  return v;
}

inline VolumeFunction cut_volume(const SimplexSet& c) {
  require(!c.empty(), "cut_volume: a hypercut is never empty");
  return indicator_volume(c);
}

inline VolumeFunction cut_volume(const Hypercut& c) { return cut_volume(c.cut()); }

struct CapOptions {
  std::size_t node_limit = std::size_t{1} << 26;  // per simplex
};

namespace detail {

// Minimum total weight of D within the given columns with boundary(D) equal
// to target over Z_2. Columns are visited in ascending weight; each node
// either takes the next column or skips it. Pruned by span feasibility of
// the remaining columns and by the bound ceil(|r| / (d+1)) * next weight,
// since a column clears at most d+1 boundary faces.
class CapSearch {
 public:
  CapSearch(const BoundaryMatrix& m, std::vector<std::size_t> cols, const std::vector<double>& w,
            std::size_t node_limit)
      : m_(m), cols_(std::move(cols)), node_limit_(node_limit) {
    std::stable_sort(cols_.begin(), cols_.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
    weights_.reserve(cols_.size());
    for (auto c : cols_) weights_.push_back(w[c]);
    suffix_.reserve(cols_.size() + 1);
    for (std::size_t j = 0; j <= cols_.size(); ++j) suffix_.emplace_back(m.rows());
    for (std::size_t j = cols_.size(); j-- > 0;) {
      suffix_[j] = suffix_[j + 1];
      suffix_[j].insert(m_.z2_column(cols_[j]));
    }
  }

  // Minimum weight, or nullopt when target is not reachable.
  std::optional<double> solve(const BitVector& target, double upper_bound) const {
    if (!suffix_[0].contains(target)) return std::nullopt;
    State st{upper_bound, std::isfinite(upper_bound), 0};
    BitVector r = target;
    dfs(st, 0, r, 0.0);
    if (!st.found) return std::nullopt;
    return st.best;
  }

 private:
  struct State {
    double best;
    bool found;
    std::size_t nodes;
  };

  void dfs(State& st, std::size_t j, BitVector& r, double cost) const {
    if (++st.nodes > node_limit_) throw GuardExceeded("lightest cap search exceeded its node limit");
    if (r.none()) {
      if (!st.found || cost < st.best) {
        st.best = cost;
        st.found = true;
      }
      return;
    }
    if (j == cols_.size()) return;
    if (!suffix_[j].contains(r)) return;
    double faces = static_cast<double>(r.count());
    double need = std::ceil(faces / static_cast<double>(m_.d() + 1));
    if (st.found && cost + need * weights_[j] >= st.best) return;
    const BitVector& col = m_.z2_column(cols_[j]);
    r ^= col;
    dfs(st, j + 1, r, cost + weights_[j]);
    r ^= col;
    dfs(st, j + 1, r, cost);
  }

  const BoundaryMatrix& m_;
  std::vector<std::size_t> cols_;
  std::vector<double> weights_;
  std::vector<EchelonBasis> suffix_;
  std::size_t node_limit_;
};

}  // namespace detail

// value(sigma) = min over D within k with sigma + D a cycle of w(D); a
// simplex of k is its own cap. `w` is indexed by colex over all d-simplices;
// entries outside k are ignored. d = 1 uses all-pairs shortest paths.
inline VolumeFunction lightest_cap_volume(const SimplexSet& k, std::span<const double> w, CapOptions options = {}) {
  const int n = k.n(), d = k.d();
  require(d >= 1, "lightest_cap_volume needs d >= 1");
  require(w.size() == k.universe_size(), "lightest_cap_volume: weight vector length mismatch");
  k.for_each_index([&](std::size_t i) {
    require(std::isfinite(w[i]) && w[i] >= 0.0, "lightest_cap_volume: weights must be nonnegative");
  });
  require(is_connected(k), "lightest_cap_volume: complex is not connected, some simplex has no cap");
  VolumeFunction v(n, d);
  if (d == 1) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(n * n), inf);
    auto at = [&](int a, int b) -> double& { return dist[static_cast<std::size_t>(a * n + b)]; };
    for (int a = 0; a < n; ++a) at(a, a) = 0.0;
    k.for_each_index([&](std::size_t i) {
      auto vs = SimplexKey::from_index(i, 1).vertices();
      at(vs[0], vs[1]) = std::min(at(vs[0], vs[1]), w[i]);
      at(vs[1], vs[0]) = at(vs[0], vs[1]);
    });
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) at(a, b) = std::min(at(a, b), at(a, m) + at(m, b));
    std::size_t i = 0;
    for_each_simplex(n, 1, [&](SimplexKey s) {
      auto vs = s.vertices();
      v.values[i++] = at(vs[0], vs[1]);
    });
    return v;
  }
  const auto& m = boundary_matrix(n, d);
  std::vector<double> weights(w.begin(), w.end());
  auto cols = k.indices();
  std::size_t total = k.universe_size();
  std::vector<double> out(total, 0.0);
  const detail::CapSearch search(m, cols, weights, options.node_limit);
  parallel_for(total, [&](std::size_t s) {
    double ub = k.contains_index(s) ? weights[s] : std::numeric_limits<double>::infinity();
    auto best = search.solve(m.z2_column(s), ub);
    require(best.has_value(), "lightest_cap_volume: simplex without a cap");
    out[s] = *best;
  });
  v.values = std::move(out);
  return v;
}

inline bool is_01(const VolumeFunction& v) {
  return std::all_of(v.values.begin(), v.values.end(), [](double x) { return x == 0.0 || x == 1.0; });
}

inline SimplexSet support(const VolumeFunction& v) {
  SimplexSet s(v.n, v.d);
  for (std::size_t i = 0; i < v.values.size(); ++i)
    if (v.values[i] > 0.0) s.insert_index(i);
  return s;
}

// A 0/1 volume is extremal in the cone of volumes iff it is a cut volume.
inline bool is_extremal_01(const VolumeFunction& v) {
  v.validate();
  require(is_01(v), "is_extremal_01 expects a 0/1-valued function");
  return is_hypercut(support(v));
}

// max(v1/v2) * max(v2/v1) over simplices where some value is positive;
// +infinity when one side vanishes where the other does not. Simplices where
// both vanish are skipped.
inline double distortion(const VolumeFunction& v1, const VolumeFunction& v2) {
  require(v1.n == v2.n && v1.d == v2.d && v1.values.size() == v2.values.size(),
          "distortion: volume functions live on different complexes");
  const double inf = std::numeric_limits<double>::infinity();
  double up = 0.0, down = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < v1.values.size(); ++i) {
    double a = v1.values[i], b = v2.values[i];
    if (a == 0.0 && b == 0.0) continue;
    if (a == 0.0 || b == 0.0) return inf;
    any = true;
    up = std::max(up, a / b);
    down = std::max(down, b / a);
  }
  if (!any) return 1.0;
  return up * down;
}

}  // namespace hypervol
