#pragma once

// l1 volumes as nonnegative combinations of cut volumes.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "hypervol/arrangement.hpp"
#include "hypervol/complex.hpp"
#include "hypervol/cuts.hpp"
#include "hypervol/error.hpp"
#include "hypervol/gf2.hpp"
#include "hypervol/simplex.hpp"
#include "hypervol/volumes.hpp"

namespace hypervol {

// A cut realized geometrically: rows of `points` are the vertex images in
// R^d and the cut is {sigma : p in the open hull of points(sigma)}.
struct GeometricWitness {
  Eigen::MatrixXd points;
  Eigen::VectorXd p;
};

struct CutTerm {
  SimplexSet cut;
  double lambda = 0.0;
  std::optional<GeometricWitness> witness;
};

struct CutDecomposition {
  int n = 0;
  int d = 0;
  std::vector<CutTerm> terms;

  std::size_t cut_dimension() const { return terms.size(); }

  void validate() const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& t = terms[i];
      require(t.cut.n() == n && t.cut.d() == d, "term " + std::to_string(i) + " lives on another complex");
      require(std::isfinite(t.lambda) && t.lambda > 0.0, "term " + std::to_string(i) + " has a nonpositive weight");
      require(!t.cut.empty(), "term " + std::to_string(i) + " has an empty cut");
    }
  }

  VolumeFunction evaluate() const {
    VolumeFunction v(n, d);
    for (const auto& t : terms) t.cut.for_each_index([&](std::size_t i) { v.values[i] += t.lambda; });
    return v;
  }

  double total_weight() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.lambda;
    return s;
  }
};

// Fundamental hypercuts of t weighted by w (colex over all d-simplices).
inline CutDecomposition hypertree_decomposition(const SimplexSet& t, std::span<const double> w) {
  require(is_hypertree(t), "hypertree_decomposition: input is not a hypertree");
  require(w.size() == t.universe_size(), "hypertree_decomposition: weight vector length mismatch");
  CutDecomposition out{t.n(), t.d(), {}};
  for (auto sigma : t.keys()) {
    double lambda = w[sigma.index()];
    require(std::isfinite(lambda) && lambda >= 0.0, "hypertree_decomposition: weights must be nonnegative");
    if (lambda > 0.0) out.terms.push_back({fundamental_hypercut(t, sigma).cut(), lambda, std::nullopt});
  }
  return out;
}

struct MstApproximation {
  SimplexSet tree;
  CutDecomposition decomposition;
  double distortion = 0.0;
};

// Greedy minimum-weight hypertree on the support of v, decomposed into
// fundamental hypercuts weighted by v.
inline MstApproximation mst_approximation(const VolumeFunction& v) {
  v.validate();
  require(v.d >= 1, "mst_approximation needs d >= 1");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < v.values.size(); ++i)
    if (v.values[i] > 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v.values[a] < v.values[b]; });
  const auto& m = boundary_matrix(v.n, v.d);
  EchelonBasis basis(m.rows());
  SimplexSet tree(v.n, v.d);
  std::size_t target = hypertree_size(v.n, v.d);
  for (auto c : order) {
    if (basis.rank() == target) break;
    if (basis.insert(m.z2_column(c))) tree.insert_index(c);
  }
  require(basis.rank() == target, "mst_approximation: support of the volume is not connected");
  MstApproximation out{tree, hypertree_decomposition(tree, v.values), 0.0};
  out.distortion = distortion(v, out.decomposition.evaluate());
  return out;
}

// Vertex side containing vertex 0 of a graph cut E(A, complement).
inline std::vector<bool> cut_side(const SimplexSet& cut) {
  require(cut.d() == 1, "cut_side expects a graph cut");
  std::vector<bool> side(static_cast<std::size_t>(cut.n()), true);
  for (Vertex v = 1; v < cut.n(); ++v) side[static_cast<std::size_t>(v)] = !cut.contains(SimplexKey::from_vertices({0, v}));
  return side;
}

// Threshold cuts of an l1 embedding (rows are points). Identical cuts from
// different coordinates are merged, keeping first-appearance order.
inline CutDecomposition l1_metric_to_cuts(const Eigen::MatrixXd& coords) {
  const int n = static_cast<int>(coords.rows());
  require(n >= 2, "l1_metric_to_cuts needs at least two points");
  CutDecomposition out{n, 1, {}};
  std::map<BitVector, std::size_t> seen;
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < coords.cols(); ++c) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return coords(static_cast<Eigen::Index>(a), c) < coords(static_cast<Eigen::Index>(b), c);
    });
    std::uint64_t below = 0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      below |= std::uint64_t{1} << order[i];
      double gap = coords(static_cast<Eigen::Index>(order[i + 1]), c) - coords(static_cast<Eigen::Index>(order[i]), c);
      require(std::isfinite(gap), "l1_metric_to_cuts: coordinates must be finite");
      if (gap <= 0.0) continue;
      SimplexSet cut(n, 1);
      for_each_simplex(n, 1, [&](SimplexKey e) {
        if (std::popcount(e.mask() & below) == 1) cut.insert(e);
      });
      auto [it, fresh] = seen.try_emplace(cut.bits(), out.terms.size());
      if (fresh)
        out.terms.push_back({std::move(cut), gap, std::nullopt});
      else
        out.terms[it->second].lambda += gap;
    }
  }
  return out;
}

inline std::vector<Point2> to_points2(const Eigen::MatrixXd& points) {
  require(points.cols() == 2, "expected planar points (2 coordinates), got " + std::to_string(points.cols()));
  std::vector<Point2> out;
  for (Eigen::Index i = 0; i < points.rows(); ++i) out.push_back({points(i, 0), points(i, 1)});
  return out;
}

// Triangles over pts strictly containing p.
inline SimplexSet triangles_containing(const std::vector<Point2>& pts, Point2 p) {
  const int n = static_cast<int>(pts.size());
  SimplexSet cut(n, 2);
  for_each_simplex(n, 2, [&](SimplexKey s) {
    auto v = s.vertices();
    if (in_triangle(p, pts[static_cast<std::size_t>(v[0])], pts[static_cast<std::size_t>(v[1])],
                    pts[static_cast<std::size_t>(v[2])]))
      cut.insert(s);
  });
  return cut;
}

// One geometric hypercut per arrangement cell inside the hull, weighted by
// cell area, with the cell centroid as witness. Cells are not merged.
inline CutDecomposition euclidean_to_geometric_cuts_2d(const Eigen::MatrixXd& points) {
  auto pts = to_points2(points);
  auto cells = arrangement_cells(pts);
  CutDecomposition out{static_cast<int>(pts.size()), 2, {}};
  for (const auto& cell : cells) {
    SimplexSet cut = triangles_containing(pts, cell.interior);
    if (cut.empty()) continue;
    Eigen::VectorXd p(2);
    p << cell.interior.x, cell.interior.y;
    out.terms.push_back({std::move(cut), cell.area, GeometricWitness{points, p}});
  }
  return out;
}

// Real cochains on (d-1)-simplices, as dense vectors in colex order, and
// their coboundaries x^T M_d.

inline Eigen::VectorXd coboundary_values(int n, int d, const Eigen::VectorXd& x) {
  const auto& m = real_boundary(n, d);
  require(static_cast<std::size_t>(x.size()) == m.rows(), "cochain length mismatch");
  Eigen::VectorXd b(static_cast<Eigen::Index>(m.cols()));
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double s = 0.0;
    for (int i = 0; i <= d; ++i) s += BoundaryMatrix::sign(i) * x(static_cast<Eigen::Index>(m.face(c, i)));
    b(static_cast<Eigen::Index>(c)) = s;
  }
  return b;
}

// d = 1 cut E(A, complement): x_v = 1 on A.
inline Eigen::VectorXd bipartition_cochain(const std::vector<bool>& side) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(side.size()));
  for (std::size_t v = 0; v < side.size(); ++v) x(static_cast<Eigen::Index>(v)) = side[v] ? 1.0 : 0.0;
  return x;
}

// Signed crossings of a ray from p with the (d-1)-simplices of the witness
// configuration. The ray crosses the boundary of a d-simplex once, with
// consistent orientation, iff p is inside it, so |x^T M_d| is the cut
// indicator.
inline Eigen::VectorXd crossing_cochain(const GeometricWitness& w) {
  const int n = static_cast<int>(w.points.rows());
  const int d = static_cast<int>(w.points.cols());
  require(d >= 1 && w.p.size() == d, "crossing_cochain: witness dimensions disagree");
  static const double kDirections[3][4] = {{1.0, 0.3141592653589793, 0.2718281828459045, 0.1414213562373095},
                                           {-0.5772156649015329, 1.0, -0.6931471805599453, 0.3010299956639812},
                                           {0.2236067977499790, -0.1732050807568877, 1.0, -0.4142135623730950}};
  for (const auto& dir_raw : kDirections) {
    Eigen::VectorXd u(d);
    for (int j = 0; j < d; ++j) u(j) = dir_raw[j % 4] * (1.0 + 0.1 * (j / 4));
    u.normalize();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(simplex_count(n, d - 1)));
    bool degenerate = false;
    std::size_t idx = 0;
    for_each_simplex(n, d - 1, [&](SimplexKey tau) {
      std::size_t here = idx++;
      if (degenerate) return;
      auto vs = tau.vertices();
      // Solve p + t u = sum_j mu_j q_j with sum_j mu_j = 1.
      Eigen::MatrixXd a(d + 1, d + 1);
      Eigen::MatrixXd rel(d, d);
      for (int j = 0; j < d; ++j) {
        Eigen::VectorXd q = w.points.row(vs[static_cast<std::size_t>(j)]).transpose();
        a.block(0, j, d, 1) = q;
        a(d, j) = 1.0;
        rel.col(j) = q - w.p;
      }
      a.block(0, d, d, 1) = -u;
      a(d, d) = 0.0;
      Eigen::VectorXd rhs(d + 1);
      rhs.head(d) = w.p;
      rhs(d) = 1.0;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (!lu.isInvertible()) return;  // ray parallel to the face
      Eigen::VectorXd sol = lu.solve(rhs);
      double t = sol(d);
      double mu_min = sol.head(d).minCoeff();
      bool near_face = std::abs(mu_min) < 1e-12 && t > -1e-12;
      bool near_origin = std::abs(t) < 1e-12 && mu_min > -1e-12;
      if (near_face || near_origin) {
        degenerate = true;
        return;
      }
      if (t > 0 && mu_min > 0) x(static_cast<Eigen::Index>(here)) = rel.determinant() > 0 ? 1.0 : -1.0;
    });
    if (!degenerate) return x;
  }
  throw DegenerateInput("crossing_cochain: no ray direction in general position");
}

// d = 2 witness: x_ij is the signed angle from s_i - p to s_j - p over 2 pi.
// Around any triangle the angles sum to +-1 when p is inside and 0 outside.
inline Eigen::VectorXd angle_cochain(const GeometricWitness& w) {
  require(w.points.cols() == 2 && w.p.size() == 2, "angle_cochain needs a planar witness");
  const int n = static_cast<int>(w.points.rows());
  Eigen::VectorXd x(static_cast<Eigen::Index>(simplex_count(n, 1)));
  Point2 p{w.p(0), w.p(1)};
  std::size_t idx = 0;
  for_each_simplex(n, 1, [&](SimplexKey e) {
    auto vs = e.vertices();
    Point2 a = Point2{w.points(vs[0], 0), w.points(vs[0], 1)} - p;
    Point2 b = Point2{w.points(vs[1], 0), w.points(vs[1], 1)} - p;
    x(static_cast<Eigen::Index>(idx++)) = std::atan2(cross(a, b), dot(a, b)) / (2.0 * std::numbers::pi);
  });
  return x;
}

// Euclidean 2-volume of planar points: x_ij is the signed area of
// (origin, s_i, s_j), so |x^T M_2| is the triangle area.
inline Eigen::VectorXd area_cochain(const Eigen::MatrixXd& points) {
  require(points.cols() == 2, "area_cochain needs planar points");
  const int n = static_cast<int>(points.rows());
  Eigen::VectorXd x(static_cast<Eigen::Index>(simplex_count(n, 1)));
  std::size_t idx = 0;
  for_each_simplex(n, 1, [&](SimplexKey e) {
    auto vs = e.vertices();
    x(static_cast<Eigen::Index>(idx++)) =
        0.5 * cross({points(vs[0], 0), points(vs[0], 1)}, {points(vs[1], 0), points(vs[1], 1)});
  });
  return x;
}

enum class CochainMethod { kCrossing, kAngle };

inline Eigen::VectorXd exact_representation(const CutTerm& term, CochainMethod method = CochainMethod::kCrossing) {
  if (!term.witness) {
    require(term.cut.d() == 1, "exact_representation: term has no geometric witness");
    return bipartition_cochain(cut_side(term.cut));
  }
  if (method == CochainMethod::kAngle) return angle_cochain(*term.witness);
  return crossing_cochain(*term.witness);
}

// Values of b = x^T M_d on d-simplices tau + v (v = n-1), moved onto the
// (d-1)-simplices avoiding v: y_tau = M(tau, tau + v) b(tau + v). Then
// y^T M_d = b, and y lives on C(n-1, d) coordinates, which are exactly the
// first C(n-1, d) (d-1)-simplices in colex order.
inline Eigen::VectorXd gauge_fixed(int n, int d, const Eigen::VectorXd& b) {
  const auto& m = real_boundary(n, d);
  require(static_cast<std::size_t>(b.size()) == m.cols(), "gauge_fixed: coboundary length mismatch");
  const Vertex apex = n - 1;
  std::size_t k = hypertree_size(n, d);
  Eigen::VectorXd y(static_cast<Eigen::Index>(k));
  std::size_t idx = 0;
  for_each_simplex(n - 1, d - 1, [&](SimplexKey tau) {
    SimplexKey top = tau.with(apex);
    // apex is the largest vertex, so tau is the face dropping the last one.
    int sign = BoundaryMatrix::sign(d);
    y(static_cast<Eigen::Index>(idx++)) = sign * b(static_cast<Eigen::Index>(top.index()));
  });
  return y;
}

// Rows of b times columns of x reproduce, after squaring entrywise, the
// membership of each simplex (column) in each cut (row).
struct SqrtFactorization {
  Eigen::MatrixXd b;  // |C| x k
  Eigen::MatrixXd x;  // k x |F|
  std::size_t k = 0;
  // Rigidity: M <= (B X) o (B X) <= D M entrywise. Built factorizations are
  // exact (D = 1); a looser user-supplied one may declare D > 1.
  double D = 1.0;
};

inline Eigen::MatrixXd membership_matrix(const CutDecomposition& dec) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dec.terms.size()),
                                            static_cast<Eigen::Index>(simplex_count(dec.n, dec.d)));
  for (std::size_t r = 0; r < dec.terms.size(); ++r)
    dec.terms[r].cut.for_each_index(
        [&](std::size_t c) { m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 1.0; });
  return m;
}

// max |((B X) o (B X)) - M| over all entries.
inline double factorization_residual(const SqrtFactorization& f, const CutDecomposition& dec) {
  Eigen::MatrixXd p = f.b * f.x;
  Eigen::MatrixXd m = membership_matrix(dec);
  require(p.rows() == m.rows() && p.cols() == m.cols(), "factorization shape does not match the decomposition");
  return (p.cwiseProduct(p) - m).cwiseAbs().maxCoeff();
}

inline constexpr double kFactorizationTolerance = 1e-9;

// Largest amount by which (B X) o (B X) leaves the band [M, D M].
inline double rigidity_violation(const SqrtFactorization& f, const CutDecomposition& dec) {
  require(std::isfinite(f.D) && f.D >= 1.0, "factorization needs D >= 1");
  Eigen::MatrixXd p = f.b * f.x;
  Eigen::MatrixXd m = membership_matrix(dec);
  require(p.rows() == m.rows() && p.cols() == m.cols(), "factorization shape does not match the decomposition");
  Eigen::MatrixXd sq = p.cwiseProduct(p);
  Eigen::MatrixXd below = m - sq, above = sq - f.D * m;
  return std::max({0.0, below.maxCoeff(), above.maxCoeff()});
}

// d = 1: B(C, v) = +1 on the side of vertex 0 and -1 elsewhere; X(v, e) is
// +0.5 at the smaller endpoint of e and -0.5 at the larger. k = n.
inline SqrtFactorization sqrt_factorization_cuts_d1(const CutDecomposition& dec) {
  require(dec.d == 1, "sqrt_factorization_cuts_d1 needs d = 1");
  const int n = dec.n;
  SqrtFactorization f;
  f.k = static_cast<std::size_t>(n);
  f.b.resize(static_cast<Eigen::Index>(dec.terms.size()), n);
  for (std::size_t r = 0; r < dec.terms.size(); ++r) {
    auto side = cut_side(dec.terms[r].cut);
    for (int v = 0; v < n; ++v) f.b(static_cast<Eigen::Index>(r), v) = side[static_cast<std::size_t>(v)] ? 1.0 : -1.0;
  }
  f.x = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(simplex_count(n, 1)));
  std::size_t idx = 0;
  for_each_simplex(n, 1, [&](SimplexKey e) {
    auto vs = e.vertices();
    f.x(vs[0], static_cast<Eigen::Index>(idx)) = 0.5;
    f.x(vs[1], static_cast<Eigen::Index>(idx)) = -0.5;
    ++idx;
  });
  return f;
}

// Rows of B are gauge-fixed exact cochains of the terms; X is the real
// boundary matrix restricted to the (d-1)-simplices avoiding n-1, so
// k = C(n-1, d). Terms need a geometric witness, except graph cuts.
inline SqrtFactorization sqrt_factorization_geometric(const CutDecomposition& dec,
                                                      CochainMethod method = CochainMethod::kCrossing) {
  require(dec.d >= 1, "sqrt_factorization_geometric needs d >= 1");
  const int n = dec.n, d = dec.d;
  const auto& m = real_boundary(n, d);
  SqrtFactorization f;
  f.k = hypertree_size(n, d);
  f.b.resize(static_cast<Eigen::Index>(dec.terms.size()), static_cast<Eigen::Index>(f.k));
  for (std::size_t r = 0; r < dec.terms.size(); ++r) {
    const auto& term = dec.terms[r];
    require(term.witness.has_value() || d == 1,
            "sqrt_factorization_geometric: term " + std::to_string(r) + " has no geometric witness");
    Eigen::VectorXd b = coboundary_values(n, d, exact_representation(term, method));
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double want = term.cut.contains_index(c) ? 1.0 : 0.0;
      require(std::abs(std::abs(b(static_cast<Eigen::Index>(c))) - want) <= kFactorizationTolerance,
              "sqrt_factorization_geometric: witness of term " + std::to_string(r) + " does not reproduce its cut");
      // Keep only the sign; the magnitude is known exactly.
      b(static_cast<Eigen::Index>(c)) = std::copysign(want, b(static_cast<Eigen::Index>(c)));
    }
    f.b.row(static_cast<Eigen::Index>(r)) = gauge_fixed(n, d, b).transpose();
  }
  f.x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f.k), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (int i = 0; i <= d; ++i) {
      std::size_t row = m.face(c, i);
      if (row < f.k) f.x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = BoundaryMatrix::sign(i);
    }
  return f;
}

}  // namespace hypervol
