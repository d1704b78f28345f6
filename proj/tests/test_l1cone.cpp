#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "hypervol/arrangement.hpp"
#include "hypervol/complex.hpp"
#include "hypervol/cuts.hpp"
#include "hypervol/l1cone.hpp"
#include "hypervol/rng.hpp"
#include "hypervol/volumes.hpp"
#include "oracles.hpp"

using namespace hypervol;

namespace {

Eigen::MatrixXd random_points(int n, int dim, std::uint64_t seed) {
  KeyedRng rng(seed, streams::kTest, 0);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd p(n, dim);
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = normal(rng);
  return p;
}

SimplexSet random_hypertree(int n, int d, std::uint64_t seed) {
  std::vector<std::size_t> order(simplex_count(n, d));
  std::iota(order.begin(), order.end(), 0);
  KeyedRng rng(seed, streams::kTest, 1);
  std::shuffle(order.begin(), order.end(), rng);
  const auto& m = boundary_matrix(n, d);
  EchelonBasis basis(m.rows());
  SimplexSet t(n, d);
  for (auto c : order)
    if (basis.insert(m.z2_column(c))) t.insert_index(c);
  return t;
}

std::vector<double> random_weights(std::size_t size, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i) w[i] = lo + (hi - lo) * KeyedRng(seed, streams::kTest, i).uniform();
  return w;
}

Eigen::MatrixXd circle(int n) {
  Eigen::MatrixXd p(n, 2);
  for (int k = 0; k < n; ++k) {
    p(k, 0) = std::cos(2.0 * std::numbers::pi * k / n);
    p(k, 1) = std::sin(2.0 * std::numbers::pi * k / n);
  }
  return p;
}

CutTerm geometric_term(const Eigen::MatrixXd& points, const Eigen::VectorXd& p) {
  Eigen::MatrixXd shifted = points.rowwise() - p.transpose();
  return {geometric_cut_set(shifted), 1.0, GeometricWitness{points, p}};
}

}  // namespace

TEST(HypertreeDecomposition, PathTreeIsTheLineMetric) {
  const int n = 6;
  SimplexSet path(n, 1);
  for (int i = 0; i + 1 < n; ++i) path.insert(SimplexKey::from_vertices({i, i + 1}));
  std::vector<double> w(path.universe_size(), 1.0);
  CutDecomposition dec = hypertree_decomposition(path, w);
  EXPECT_EQ(dec.cut_dimension(), static_cast<std::size_t>(n - 1));
  VolumeFunction v = dec.evaluate();
  for_each_simplex(n, 1, [&](SimplexKey e) {
    auto vs = e.vertices();
    EXPECT_EQ(v[e], vs[1] - vs[0]);
  });
}

TEST(HypertreeDecomposition, ZeroWeightsGiveNothing) {
  SimplexSet t = star(5, 2, 0);
  std::vector<double> w(t.universe_size(), 0.0);
  CutDecomposition dec = hypertree_decomposition(t, w);
  EXPECT_EQ(dec.cut_dimension(), 0u);
  EXPECT_EQ(dec.evaluate(), VolumeFunction(5, 2));
}

TEST(HypertreeDecomposition, StarTreeMatchesExhaustiveCaps) {
  SimplexSet t = star(5, 2, 0);
  std::vector<double> w = random_weights(t.universe_size(), 17, 0.1, 2.0);
  VolumeFunction v = hypertree_decomposition(t, w).evaluate();
  std::vector<oracle::Simplex> allowed;
  std::vector<double> aw;
  for (auto s : t.keys()) {
    allowed.push_back(s.vertices());
    aw.push_back(w[s.index()]);
  }
  for_each_simplex(5, 2, [&](SimplexKey s) { EXPECT_NEAR(v[s], oracle::brute_cap(5, 2, allowed, aw, s.vertices()), 1e-12); });
}

TEST(HypertreeDecomposition, EqualsLightestCapOnRandomTrees) {
  for (int n = 4; n <= 6; ++n)
    for (int d = 1; d <= 2; ++d)
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SimplexSet t = random_hypertree(n, d, seed * 31 + static_cast<std::uint64_t>(n));
        std::vector<double> w = random_weights(t.universe_size(), seed + 500, 0.0, 3.0);
        VolumeFunction a = hypertree_decomposition(t, w).evaluate();
        VolumeFunction b = lightest_cap_volume(t, w);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-12);
      }
}

TEST(HypertreeDecomposition, RejectsNonTree) {
  SimplexSet k = SimplexSet::complete(5, 2);
  std::vector<double> w(k.universe_size(), 1.0);
  EXPECT_THROW(hypertree_decomposition(k, w), ValidationError);
}

TEST(CutCone, HypercutsSpanAllFunctions) {
  auto cuts = enumerate_hypercuts(5, 2);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(cuts.size()), 10);
  for (std::size_t r = 0; r < cuts.size(); ++r)
    for (std::size_t c = 0; c < 10; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cuts[r].cut().contains_index(c);
  EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank(), 10);
}

TEST(Mst, HypertreeVolumeHasDistortionOne) {
  SimplexSet t = star(6, 2, 0);
  std::vector<double> w = random_weights(t.universe_size(), 3, 0.5, 1.5);
  VolumeFunction v = lightest_cap_volume(t, w);
  auto r = mst_approximation(v);
  EXPECT_NEAR(r.distortion, 1.0, 1e-12);
}

TEST(Mst, UniformMetricOnFourPoints) {
  auto r = mst_approximation(VolumeFunction(4, 1, 1.0));
  EXPECT_EQ(r.tree.size(), 3u);
  EXPECT_LE(r.distortion, 2.0);
  EXPECT_DOUBLE_EQ(r.distortion, 2.0);
}

namespace {

// Positive volumes of three kinds: values in [1/2, 1] (every cycle has at
// least three members), lightest-cap closures of random weights, and
// Euclidean volumes of random points.
VolumeFunction random_positive_volume(int n, int d, std::uint64_t seed) {
  switch (seed % 3) {
    case 0:
      return VolumeFunction(n, d, random_weights(simplex_count(n, d), seed, 0.5, 1.0));
    case 1: {
      SimplexSet all = SimplexSet::complete(n, d);
      return lightest_cap_volume(all, random_weights(all.universe_size(), seed, 0.05, 1.0));
    }
    default:
      return euclidean_volume(random_points(n, d + 1, seed), d);
  }
}

}  // namespace

TEST(Mst, DistortionBoundOnRandomVolumes) {
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    int n = 4 + static_cast<int>(seed % 3);
    int d = 1 + static_cast<int>((seed / 3) % 2);
    VolumeFunction v = random_positive_volume(n, d, seed);
    ASSERT_TRUE(check_volume(v, simplex_count(n, d)).ok) << "seed " << seed;
    auto r = mst_approximation(v);
    EXPECT_TRUE(is_hypertree(r.tree));
    violations += r.distortion > 1.0 + static_cast<double>(hypertree_size(n, d)) + 1e-9;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Mst, DistortionBoundFollowsFromCycleLength) {
  // Each simplex outside the tree lies on a cycle with at most |T| tree
  // simplices, so the tree volume exceeds v by at most |T| there.
  VolumeFunction v = random_positive_volume(5, 2, 1);
  auto r = mst_approximation(v);
  VolumeFunction t = r.decomposition.evaluate();
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_GE(t.values[i], v.values[i] - 1e-12);
    EXPECT_LE(t.values[i], static_cast<double>(hypertree_size(5, 2)) * v.values[i] + 1e-12);
  }
}

TEST(Mst, TreeIsMinimumWeight) {
  // Matroid greedy: no single exchange lowers the total.
  VolumeFunction v(5, 2, random_weights(10, 44, 0.1, 1.0));
  auto r = mst_approximation(v);
  double total = 0.0;
  for (auto s : r.tree.keys()) total += v[s];
  for (auto out : r.tree.keys())
    for_each_simplex(5, 2, [&](SimplexKey in) {
      if (r.tree.contains(in)) return;
      SimplexSet t = r.tree;
      t.erase(out);
      t.insert(in);
      if (is_hypertree(t)) {
        EXPECT_GE(total - v[out] + v[in], total - 1e-12);
      }
    });
}

TEST(Mst, DisconnectedSupportRejected) {
  VolumeFunction v(5, 2);
  v[SimplexKey::from_vertices({0, 1, 2})] = 1.0;
  EXPECT_THROW(mst_approximation(v), ValidationError);
}

TEST(L1Metric, SingleCoordinate) {
  Eigen::MatrixXd c(3, 1);
  c << 0, 1, 3;
  CutDecomposition dec = l1_metric_to_cuts(c);
  ASSERT_EQ(dec.cut_dimension(), 2u);
  EXPECT_EQ(dec.terms[0].cut, star(3, 1, 0));
  EXPECT_EQ(dec.terms[0].lambda, 1.0);
  EXPECT_EQ(dec.terms[1].cut, star(3, 1, 2));
  EXPECT_EQ(dec.terms[1].lambda, 2.0);
  EXPECT_EQ(dec.evaluate()[SimplexKey::from_vertices({0, 2})], 3.0);
}

TEST(L1Metric, IdenticalPointsGiveNothing) { EXPECT_EQ(l1_metric_to_cuts(Eigen::MatrixXd::Ones(4, 3)).cut_dimension(), 0u); }

TEST(L1Metric, RandomEmbeddingMatchesDistances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Eigen::MatrixXd c = random_points(10, 3, seed);
    CutDecomposition dec = l1_metric_to_cuts(c);
    dec.validate();
    EXPECT_LE(dec.cut_dimension(), 27u);
    VolumeFunction v = dec.evaluate();
    for_each_simplex(10, 1, [&](SimplexKey e) {
      auto vs = e.vertices();
      EXPECT_NEAR(v[e], (c.row(vs[0]) - c.row(vs[1])).lpNorm<1>(), 1e-12);
    });
  }
}

TEST(L1Metric, MergesRepeatedCuts) {
  Eigen::MatrixXd c(3, 2);
  c << 0, 0, 1, 2, 1, 2;
  CutDecomposition dec = l1_metric_to_cuts(c);
  ASSERT_EQ(dec.cut_dimension(), 1u);
  EXPECT_EQ(dec.terms[0].lambda, 3.0);
}

TEST(Euclid2d, SingleTriangle) {
  Eigen::MatrixXd p(3, 2);
  p << 0, 0, 2, 0, 0, 1;
  CutDecomposition dec = euclidean_to_geometric_cuts_2d(p);
  ASSERT_EQ(dec.cut_dimension(), 1u);
  EXPECT_NEAR(dec.terms[0].lambda, 1.0, 1e-12);
  EXPECT_EQ(dec.terms[0].cut.size(), 1u);
}

TEST(Euclid2d, ConvexQuadrilateralMatchesShoelace) {
  Eigen::MatrixXd p(4, 2);
  p << 0, 0, 3, 0.2, 2.5, 2, -0.3, 1.7;
  VolumeFunction v = euclidean_to_geometric_cuts_2d(p).evaluate();
  for_each_simplex(4, 2, [&](SimplexKey s) {
    std::vector<std::pair<double, double>> poly;
    for (auto x : s.vertices()) poly.emplace_back(p(x, 0), p(x, 1));
    EXPECT_NEAR(v[s], oracle::shoelace(poly), 1e-9);
  });
}

TEST(Euclid2d, CollinearRejected) {
  Eigen::MatrixXd p(4, 2);
  p << 0, 0, 1, 1, 2, 2, 0, 1;
  EXPECT_THROW(euclidean_to_geometric_cuts_2d(p), DegenerateInput);
}

TEST(Euclid2d, RandomConfigurationsMatchEuclideanVolume) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    int n = 5 + static_cast<int>(seed % 3);
    Eigen::MatrixXd p = random_points(n, 2, seed + 40);
    CutDecomposition dec = euclidean_to_geometric_cuts_2d(p);
    dec.validate();
    VolumeFunction a = dec.evaluate(), b = euclidean_volume(p, 2);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-6 * b.values[i] + 1e-12);
    for (const auto& t : dec.terms) EXPECT_TRUE(is_hypercut(t.cut));
    // Every cell inside the hull lies in some triangle.
    auto hull = convex_hull(to_points2(p));
    EXPECT_NEAR(dec.total_weight(), polygon_area(hull), 1e-9);
  }
}

TEST(Arrangement, CellsTileTheHull) {
  auto pts = to_points2(random_points(7, 2, 9));
  auto cells = arrangement_cells(pts);
  double total = 0.0;
  for (const auto& c : cells) {
    EXPECT_GT(c.area, 0.0);
    total += c.area;
    // The centroid is strictly off every line through two points.
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) EXPECT_NE(orient(pts[i], pts[j], c.interior), 0.0);
  }
  EXPECT_NEAR(total, polygon_area(convex_hull(pts)), 1e-9);
}

TEST(ExactRepresentation, GraphCut) {
  SimplexSet cut = star(5, 1, 1) ^ star(5, 1, 3);
  Eigen::VectorXd x = exact_representation({cut, 1.0, std::nullopt});
  Eigen::VectorXd b = coboundary_values(5, 1, x);
  for (std::size_t i = 0; i < cut.universe_size(); ++i) EXPECT_EQ(std::abs(b(static_cast<Eigen::Index>(i))), cut.contains_index(i) ? 1.0 : 0.0);
}

TEST(ExactRepresentation, AnglesSumToOneInsideAndZeroOutside) {
  int inside = 0, outside = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Eigen::MatrixXd tri = random_points(3, 2, seed);
    Eigen::VectorXd p = random_points(1, 2, seed + 7777).row(0).transpose();
    GeometricWitness w{tri, p};
    double s = coboundary_values(3, 2, angle_cochain(w))(0);
    bool in = in_triangle({p(0), p(1)}, {tri(0, 0), tri(0, 1)}, {tri(1, 0), tri(1, 1)}, {tri(2, 0), tri(2, 1)});
    EXPECT_NEAR(std::abs(s), in ? 1.0 : 0.0, 1e-12);
    (in ? inside : outside)++;
  }
  EXPECT_GT(inside, 10);
  EXPECT_GT(outside, 10);
}

TEST(ExactRepresentation, CrossingCochainInDimensionsOneToThree) {
  for (int d = 1; d <= 3; ++d)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Eigen::MatrixXd pts = random_points(d + 4, d, seed + 100 * d);
      Eigen::VectorXd p = 0.3 * random_points(1, d, seed + 999).row(0).transpose();
      CutTerm term = geometric_term(pts, p);
      Eigen::VectorXd b = coboundary_values(d + 4, d, exact_representation(term));
      for (std::size_t i = 0; i < term.cut.universe_size(); ++i)
        EXPECT_NEAR(std::abs(b(static_cast<Eigen::Index>(i))), term.cut.contains_index(i) ? 1.0 : 0.0, 1e-12);
    }
}

TEST(ExactRepresentation, AreaCochainGivesTriangleAreas) {
  Eigen::MatrixXd p = random_points(6, 2, 21);
  Eigen::VectorXd b = coboundary_values(6, 2, area_cochain(p));
  VolumeFunction v = euclidean_volume(p, 2);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(b(static_cast<Eigen::Index>(i))), v.values[i], 1e-12);
}

TEST(ExactRepresentation, MissingWitnessRejected) {
  SimplexSet cut = SimplexSet::from_vertex_lists(5, 2, {{0, 2, 3}, {1, 3, 4}, {0, 2, 4}, {0, 1, 3}, {1, 2, 4}});
  EXPECT_THROW(exact_representation({cut, 1.0, std::nullopt}), ValidationError);
}

TEST(GaugeFixed, ReproducesTheCoboundary) {
  for (int d = 1; d <= 2; ++d) {
    const int n = 6;
    Eigen::VectorXd x(static_cast<Eigen::Index>(simplex_count(n, d - 1)));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = KeyedRng(d, streams::kTest, static_cast<std::uint64_t>(i)).uniform();
    Eigen::VectorXd b = coboundary_values(n, d, x);
    Eigen::VectorXd y = gauge_fixed(n, d, b);
    EXPECT_EQ(static_cast<std::size_t>(y.size()), hypertree_size(n, d));
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(x.size());
    padded.head(y.size()) = y;
    EXPECT_LT((coboundary_values(n, d, padded) - b).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SqrtFactorizationD1, SingleCutSingleEdge) {
  CutDecomposition dec{2, 1, {{SimplexSet::complete(2, 1), 1.0, std::nullopt}}};
  auto f = sqrt_factorization_cuts_d1(dec);
  Eigen::MatrixXd q = f.b * f.x;
  EXPECT_DOUBLE_EQ(std::abs(q(0, 0)), 1.0);
}

TEST(SqrtFactorizationD1, EdgeInsideOneSide) {
  CutDecomposition dec{3, 1, {{star(3, 1, 0), 1.0, std::nullopt}}};
  auto f = sqrt_factorization_cuts_d1(dec);
  Eigen::MatrixXd q = f.b * f.x;
  EXPECT_DOUBLE_EQ(q(0, SimplexKey::from_vertices({1, 2}).index()), 0.0);
}

TEST(SqrtFactorizationD1, AllCutsOfSixVertices) {
  CutDecomposition dec{6, 1, {}};
  for (std::uint64_t a = 1; a < 32; ++a) {
    SimplexSet cut(6, 1);
    for_each_simplex(6, 1, [&](SimplexKey e) {
      auto v = e.vertices();
      if (((a >> v[0]) & 1U) != ((a >> v[1]) & 1U)) cut.insert(e);
    });
    dec.terms.push_back({cut, 1.0, std::nullopt});
  }
  auto f = sqrt_factorization_cuts_d1(dec);
  EXPECT_LE(f.k, 6u);
  Eigen::MatrixXd q = f.b * f.x;
  for (std::uint64_t a = 1; a < 32; ++a)
    for_each_simplex(6, 1, [&](SimplexKey e) {
      auto v = e.vertices();
      double member = ((a >> v[0]) & 1U) != ((a >> v[1]) & 1U) ? 1.0 : 0.0;
      EXPECT_EQ(q(static_cast<Eigen::Index>(a - 1), static_cast<Eigen::Index>(e.index())) *
                    q(static_cast<Eigen::Index>(a - 1), static_cast<Eigen::Index>(e.index())),
                member);
    });
  EXPECT_EQ(factorization_residual(f, dec), 0.0);
}

TEST(SqrtFactorizationGeometric, PentagonCut) {
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  CutTerm term = geometric_term(circle(5), origin);
  ASSERT_EQ(term.cut.size(), 5u);
  CutDecomposition dec{5, 2, {term}};
  for (auto method : {CochainMethod::kCrossing, CochainMethod::kAngle}) {
    auto f = sqrt_factorization_geometric(dec, method);
    EXPECT_EQ(f.k, 6u);
    EXPECT_LE(factorization_residual(f, dec), kFactorizationTolerance);
    Eigen::MatrixXd q = f.b * f.x;
    for (int i = 0; i < 5; ++i) {
      Vertex t[3] = {i, (i + 2) % 5, (i + 3) % 5};
      EXPECT_NEAR(q(0, SimplexKey::from_vertices(t).index()) * q(0, SimplexKey::from_vertices(t).index()), 1.0, 1e-12);
    }
  }
}

TEST(SqrtFactorizationGeometric, ArrangementDecomposition) {
  Eigen::MatrixXd p = random_points(7, 2, 12);
  CutDecomposition dec = euclidean_to_geometric_cuts_2d(p);
  auto f = sqrt_factorization_geometric(dec, CochainMethod::kAngle);
  EXPECT_EQ(f.k, oracle::choose(6, 2));
  EXPECT_LE(factorization_residual(f, dec), kFactorizationTolerance);
  auto g = sqrt_factorization_geometric(dec, CochainMethod::kCrossing);
  EXPECT_LE(factorization_residual(g, dec), kFactorizationTolerance);
}

TEST(SqrtFactorizationGeometric, RandomSphericalCutsInThreeDimensions) {
  CutDecomposition dec{7, 3, {}};
  for (std::uint64_t seed = 0; dec.terms.size() < 8 && seed < 100; ++seed) {
    Eigen::MatrixXd pts = random_points(7, 3, seed + 300);
    CutTerm term = geometric_term(pts, Eigen::VectorXd::Zero(3));
    if (!term.cut.empty()) dec.terms.push_back(term);
  }
  ASSERT_EQ(dec.terms.size(), 8u);
  auto f = sqrt_factorization_geometric(dec);
  EXPECT_EQ(f.k, oracle::choose(6, 3));
  EXPECT_LE(factorization_residual(f, dec), kFactorizationTolerance);
}

TEST(SqrtFactorizationGeometric, GraphCutsAgreeWithVertexConstruction) {
  Eigen::MatrixXd c = random_points(6, 2, 5);
  CutDecomposition dec = l1_metric_to_cuts(c);
  auto a = sqrt_factorization_cuts_d1(dec);
  auto b = sqrt_factorization_geometric(dec);
  Eigen::MatrixXd qa = a.b * a.x, qb = b.b * b.x;
  EXPECT_LT((qa.cwiseProduct(qa) - qb.cwiseProduct(qb)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(b.k, 5u);
}

TEST(SqrtFactorizationGeometric, MissingWitnessRejected) {
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  CutTerm term = geometric_term(circle(5), origin);
  term.witness.reset();
  EXPECT_THROW(sqrt_factorization_geometric(CutDecomposition{5, 2, {term}}), ValidationError);
}

TEST(SqrtFactorizationGeometric, WrongWitnessRejected) {
  CutTerm term = geometric_term(circle(5), Eigen::VectorXd::Zero(2));
  term.witness->p << 5.0, 5.0;
  EXPECT_THROW(sqrt_factorization_geometric(CutDecomposition{5, 2, {term}}), ValidationError);
}
