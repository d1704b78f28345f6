#pragma once

// Weighted planar point sets reproducing the areas of all triangles over a
// point set S: one sample per arrangement cell, then spectral sparsification.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hypervol/arrangement.hpp"
#include "hypervol/error.hpp"
#include "hypervol/l1cone.hpp"
#include "hypervol/simplex.hpp"
#include "hypervol/sparsify.hpp"

namespace hypervol {

struct WeightedPointSet {
  std::vector<Point2> points;
  std::vector<double> weights;

  void validate() const {
    require(points.size() == weights.size(), "weighted point set: points and weights differ in length");
    for (double w : weights) require(std::isfinite(w) && w > 0.0, "weighted point set: weights must be positive");
  }
  double total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  friend bool operator==(const WeightedPointSet&, const WeightedPointSet&) = default;
};

// Weighted mass of the points strictly inside triangle (a, b, c).
inline double triangle_mass(const WeightedPointSet& p, Point2 a, Point2 b, Point2 c) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.points.size(); ++i)
    if (in_triangle(p.points[i], a, b, c)) s += p.weights[i];
  return s;
}

// Centroid of every arrangement cell inside the hull, weighted by cell area.
inline WeightedPointSet build_initial_sampling_set(const std::vector<Point2>& s) {
  WeightedPointSet out;
  for (const auto& cell : arrangement_cells(s)) {
    out.points.push_back(cell.interior);
    out.weights.push_back(cell.area);
  }
  return out;
}

inline Eigen::MatrixXd points_matrix(const std::vector<Point2>& s) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(s.size()), 2);
  for (std::size_t i = 0; i < s.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = s[i].x;
    m(static_cast<Eigen::Index>(i), 1) = s[i].y;
  }
  return m;
}

// Each sample p is the geometric hypercut of triangles containing it, weighted
// by w_p. Samples inside no triangle carry no area and are dropped.
inline CutDecomposition sampling_decomposition(const std::vector<Point2>& s, const WeightedPointSet& p0,
                                               std::vector<std::size_t>* origin = nullptr) {
  p0.validate();
  const Eigen::MatrixXd pts = points_matrix(s);
  CutDecomposition dec{static_cast<int>(s.size()), 2, {}};
  for (std::size_t i = 0; i < p0.points.size(); ++i) {
    SimplexSet cut = triangles_containing(s, p0.points[i]);
    if (cut.empty()) continue;
    Eigen::VectorXd p(2);
    p << p0.points[i].x, p0.points[i].y;
    dec.terms.push_back({std::move(cut), p0.weights[i], GeometricWitness{pts, p}});
    if (origin) origin->push_back(i);
  }
  return dec;
}

struct SamplingResult {
  WeightedPointSet points;
  SparsifyReport report;
};

// A subset of p0 with new weights whose triangle masses are within
// (1 +- epsilon) of those of p0.
inline SamplingResult sparsify_sampling_set(const std::vector<Point2>& s, const WeightedPointSet& p0, double epsilon,
                                            std::uint64_t seed, SpectralOptions opt = {}) {
  check_general_position(s);
  std::vector<std::size_t> origin;
  CutDecomposition dec = sampling_decomposition(s, p0, &origin);
  require(!dec.terms.empty(), "sparsify_sampling_set: no sample lies inside a triangle");
  auto fac = sqrt_factorization_geometric(dec, CochainMethod::kAngle);
  auto res = sparsify_spectral(dec, fac, epsilon, seed, opt);
  SamplingResult out;
  out.report = std::move(res.report);
  for (const auto& e : out.report.support) {
    out.points.points.push_back(p0.points[origin[e.id]]);
    out.points.weights.push_back(e.lambda);
  }
  return out;
}

}  // namespace hypervol
