#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hypervol/arrangement.hpp"
#include "hypervol/discrepancy.hpp"
#include "hypervol/l1cone.hpp"
#include "hypervol/rng.hpp"
#include "oracles.hpp"

using namespace hypervol;

namespace {

std::vector<Point2> random_points(int n, std::uint64_t seed) {
  KeyedRng rng(seed, streams::kTest, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> out;
  for (int i = 0; i < n; ++i) out.push_back({u(rng), u(rng)});
  return out;
}

double shoelace(const std::vector<Point2>& poly) {
  std::vector<std::pair<double, double>> xy;
  for (auto p : poly) xy.emplace_back(p.x, p.y);
  return oracle::shoelace(xy);
}

// Even-odd ray casting.
bool in_polygon(Point2 p, const std::vector<Point2>& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

double polygon_mass(const WeightedPointSet& w, const std::vector<Point2>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.points.size(); ++i)
    if (in_polygon(w.points[i], poly)) s += w.weights[i];
  return s;
}

// Star-shaped simple polygon through every point, ordered by angle about
// the mean.
std::vector<Point2> star_polygon(std::vector<Point2> s) {
  Point2 c{0.0, 0.0};
  for (auto p : s) c = c + p;
  c = (1.0 / static_cast<double>(s.size())) * c;
  std::sort(s.begin(), s.end(), [&](Point2 a, Point2 b) { return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x); });
  return s;
}

double worst_triangle_error(const std::vector<Point2>& s, const WeightedPointSet& w) {
  double worst = 0.0;
  for (const auto& t : oracle::subsets(static_cast<int>(s.size()), 3)) {
    Point2 a = s[static_cast<std::size_t>(t[0])], b = s[static_cast<std::size_t>(t[1])], c = s[static_cast<std::size_t>(t[2])];
    double area = shoelace({a, b, c});
    worst = std::max(worst, std::abs(triangle_mass(w, a, b, c) / area - 1.0));
  }
  return worst;
}

}  // namespace

TEST(InitialSamplingSet, SingleTriangle) {
  std::vector<Point2> s{{0, 0}, {2, 0}, {0, 3}};
  auto p0 = build_initial_sampling_set(s);
  ASSERT_EQ(p0.points.size(), 1u);
  EXPECT_NEAR(p0.weights[0], 3.0, 1e-12);
  EXPECT_TRUE(in_triangle(p0.points[0], s[0], s[1], s[2]));
}

TEST(InitialSamplingSet, ConvexQuadrilateral) {
  std::vector<Point2> s{{0, 0}, {3, 0.2}, {2.5, 2}, {-0.3, 1.7}};
  auto p0 = build_initial_sampling_set(s);
  EXPECT_EQ(p0.points.size(), 4u);
  for (const auto& t : oracle::subsets(4, 3)) {
    Point2 a = s[static_cast<std::size_t>(t[0])], b = s[static_cast<std::size_t>(t[1])], c = s[static_cast<std::size_t>(t[2])];
    EXPECT_NEAR(triangle_mass(p0, a, b, c), shoelace({a, b, c}), 1e-12);
  }
}

TEST(InitialSamplingSet, CollinearRejected) {
  std::vector<Point2> s{{0, 0}, {1, 1}, {2, 2}, {0, 1}};
  EXPECT_THROW(build_initial_sampling_set(s), DegenerateInput);
}

TEST(InitialSamplingSet, ExactOnRandomSets) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = random_points(6 + static_cast<int>(seed % 3), seed);
    auto p0 = build_initial_sampling_set(s);
    p0.validate();
    EXPECT_LE(worst_triangle_error(s, p0), 1e-6);
    EXPECT_NEAR(p0.total(), polygon_area(convex_hull(s)), 1e-12);
  }
}

TEST(InitialSamplingSet, SimplePolygonsHaveExactMass) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = random_points(7, seed + 50);
    auto p0 = build_initial_sampling_set(s);
    auto poly = star_polygon(s);
    EXPECT_NEAR(polygon_mass(p0, poly), shoelace(poly), 1e-6 * shoelace(poly));
  }
}

TEST(InitialSamplingSet, AngleRepresentationIsZeroOrOne) {
  auto s = random_points(6, 3);
  auto p0 = build_initial_sampling_set(s);
  Eigen::MatrixXd pts = points_matrix(s);
  for (auto p : p0.points) {
    Eigen::VectorXd q(2);
    q << p.x, p.y;
    Eigen::VectorXd b = coboundary_values(6, 2, angle_cochain({pts, q}));
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      double a = std::abs(b(i));
      EXPECT_TRUE(std::abs(a) < 1e-7 || std::abs(a - 1.0) < 1e-7) << a;
    }
  }
}

TEST(SparsifySamplingSet, WithinBandOnRandomSets) {
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = random_points(6, seed + 100);
    auto p0 = build_initial_sampling_set(s);
    auto r = sparsify_sampling_set(s, p0, 0.3, seed);
    r.points.validate();
    EXPECT_LE(r.points.points.size(), p0.points.size());
    for (auto p : r.points.points) EXPECT_NE(std::find(p0.points.begin(), p0.points.end(), p), p0.points.end());
    double err = worst_triangle_error(s, r.points);
    EXPECT_NEAR(err, r.report.max_rel_error, 1e-9);
    pass += err <= 0.3;
  }
  EXPECT_GE(pass, 9);
}

TEST(SparsifySamplingSet, PolygonsFollowTriangles) {
  auto s = random_points(7, 9);
  auto p0 = build_initial_sampling_set(s);
  auto r = sparsify_sampling_set(s, p0, 0.3, 2);
  double tri = worst_triangle_error(s, r.points);
  auto poly = star_polygon(s);
  // A simple polygon over S splits into triangles over S, so its error is
  // at most the worst triangle error.
  EXPECT_LE(std::abs(polygon_mass(r.points, poly) / shoelace(poly) - 1.0), tri + 1e-9);
}

TEST(SparsifySamplingSet, FullSelectionKeepsEverything) {
  auto s = random_points(6, 4);
  auto p0 = build_initial_sampling_set(s);
  SpectralOptions opt;
  opt.max_samples = 0;
  auto r = sparsify_sampling_set(s, p0, 0.3, 1, opt);
  EXPECT_TRUE(r.report.full_selection);
  EXPECT_EQ(r.points, p0);
}

TEST(SparsifySamplingSet, Deterministic) {
  auto s = random_points(6, 5);
  auto p0 = build_initial_sampling_set(s);
  EXPECT_EQ(sparsify_sampling_set(s, p0, 0.3, 8).points, sparsify_sampling_set(s, p0, 0.3, 8).points);
}

TEST(SparsifySamplingSet, BadInputs) {
  auto s = random_points(6, 6);
  auto p0 = build_initial_sampling_set(s);
  WeightedPointSet bad = p0;
  bad.weights.pop_back();
  EXPECT_THROW(sparsify_sampling_set(s, bad, 0.3, 1), ValidationError);
  EXPECT_THROW(sparsify_sampling_set(s, p0, 1.2, 1), ValidationError);
  WeightedPointSet outside{{{10.0, 10.0}}, {1.0}};
  EXPECT_THROW(sparsify_sampling_set(s, outside, 0.3, 1), ValidationError);
}
