#pragma once

// Random complexes, face expansion and the Poincare-form lower bound on the
// distortion of embedding a complex's cap volume into l1.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "hypervol/complex.hpp"
#include "hypervol/cuts.hpp"
#include "hypervol/error.hpp"
#include "hypervol/parallel.hpp"
#include "hypervol/rng.hpp"
#include "hypervol/simplex.hpp"
#include "hypervol/volumes.hpp"

namespace hypervol {

// Each d-simplex independently with probability p, keyed by its colex index.
inline SimplexSet random_complex(int n, double p, std::uint64_t seed, int d = 2) {
  require(p >= 0.0 && p <= 1.0, "random_complex: p must lie in [0, 1]");
  SimplexSet k(n, d);
  for (std::size_t i = 0; i < k.universe_size(); ++i) {
    KeyedRng rng(seed, streams::kComplex, i);
    if (rng.uniform() < p) k.insert_index(i);
  }
  return k;
}

// All hypercuts of K_n^(d), computed once per (n, d).
inline const std::vector<Hypercut>& cached_hypercuts(int n, int d) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<Hypercut>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, d}];
  if (!slot) slot = std::make_unique<std::vector<Hypercut>>(enumerate_hypercuts(n, d));
  return *slot;
}

enum class ExpansionMode { kExact, kSampled };

struct ExpansionValue {
  double value = 0.0;
  bool exact = false;  // otherwise an upper bound on the minimum
  std::size_t cuts_examined = 0;
  std::optional<SimplexSet> argmin;
};

// (|K n C| / |C|) / (|K| / |K_n^(d)|)
inline double expansion_ratio(const SimplexSet& k, const SimplexSet& c) {
  double density = static_cast<double>(k.size()) / static_cast<double>(k.universe_size());
  return static_cast<double>(k.intersection_size(c)) / static_cast<double>(c.size()) / density;
}

struct ExpansionOptions {
  std::size_t samples = 2000;  // per generator in sampled mode
  std::uint64_t seed = 0;
};

namespace detail {

inline void consider(const SimplexSet& k, const SimplexSet& c, ExpansionValue& best) {
  ++best.cuts_examined;
  double r = expansion_ratio(k, c);
  if (!best.argmin || r < best.value) {
    best.value = r;
    best.argmin = c;
  }
}

// Candidate hypercuts from random links, partitions and spherical points.
inline std::vector<SimplexSet> sampled_hypercuts(int n, int d, const ExpansionOptions& opt) {
  std::vector<SimplexSet> out;
  for (std::size_t s = 0; s < opt.samples; ++s) {
    KeyedRng rng(opt.seed, streams::kExpansion, 3 * s);
    double q = rng.uniform();
    SimplexSet g(n, d - 1);
    for (std::size_t i = 0; i < hypertree_size(n, d); ++i)
      if (rng.uniform() < q) g.insert_index(i);
    if (g.empty()) continue;
    Coboundary co = coboundary_from_inducer(g);
    if (is_hypercut(co.cut)) out.push_back(std::move(co.cut));
  }
  for (std::size_t s = 0; s < opt.samples; ++s) {
    KeyedRng rng(opt.seed, streams::kExpansion, 3 * s + 1);
    std::vector<std::vector<Vertex>> parts(static_cast<std::size_t>(d + 1));
    std::vector<Vertex> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int b = 0; b <= d; ++b) parts[static_cast<std::size_t>(b)].push_back(perm[static_cast<std::size_t>(b)]);
    for (int v = d + 1; v < n; ++v)
      parts[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(d + 1))].push_back(perm[static_cast<std::size_t>(v)]);
    out.push_back(partition_hypercut(n, parts).cut());
  }
  for (std::size_t s = 0; s < opt.samples; ++s) {
    KeyedRng rng(opt.seed, streams::kExpansion, 3 * s + 2);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd pts(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) pts(i, j) = normal(rng);
    try {
      SimplexSet c = geometric_cut_set(pts);
      if (!c.empty()) out.push_back(std::move(c));
    } catch (const DegenerateInput&) {
    }
  }
  return out;
}

}  // namespace detail

// min over hypercuts C of the density of k inside C relative to its overall
// density. Exact mode enumerates every hypercut; sampled mode returns the
// minimum over generated hypercuts, an upper bound on the true value.
inline ExpansionValue face_expansion(const SimplexSet& k, ExpansionMode mode, ExpansionOptions opt = {}) {
  require(!k.empty(), "face_expansion: complex is empty");
  require(k.d() >= 1, "face_expansion needs d >= 1");
  ExpansionValue best;
  if (mode == ExpansionMode::kExact) {
    best.exact = true;
    for (const auto& h : cached_hypercuts(k.n(), k.d())) detail::consider(k, h.cut(), best);
  } else {
    for (const auto& c : detail::sampled_hypercuts(k.n(), k.d(), opt)) detail::consider(k, c, best);
  }
  require(best.argmin.has_value(), "face_expansion: no hypercut examined");
  return best;
}

inline double average_value(const VolumeFunction& v) {
  double s = 0.0;
  for (double x : v.values) s += x;
  return s / static_cast<double>(v.values.size());
}

// F_K(v) = sum over k of v / average of v.
inline double poincare_form(const SimplexSet& k, const VolumeFunction& v) {
  require(k.n() == v.n && k.d() == v.d, "poincare_form: complex and volume disagree");
  double av = average_value(v);
  require(av > 0.0, "poincare_form: volume has zero average");
  double s = 0.0;
  k.for_each_index([&](std::size_t i) { s += v.values[i]; });
  return s / av;
}

struct ExpansionReport {
  int n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  SimplexSet complex;
  double expansion = 0.0;
  bool expansion_exact = false;
  double avg_cap = 0.0;
  std::optional<double> distortion_lb;  // only when the expansion is exact
};

// av(v_K) * expansion(K), where v_K is the unit-weight lightest-cap volume: a
// lower bound on the distortion of v_K into l1. A sampled expansion is only
// an upper bound on the minimum, so no bound is reported then.
inline ExpansionReport distortion_lower_bound(const SimplexSet& k, ExpansionMode mode = ExpansionMode::kExact,
                                              ExpansionOptions opt = {}) {
  require(is_connected(k), "distortion_lower_bound: complex is not connected");
  ExpansionReport r;
  r.n = k.n();
  r.complex = k;
  std::vector<double> unit(k.universe_size(), 1.0);
  r.avg_cap = average_value(lightest_cap_volume(k, unit));
  auto e = face_expansion(k, mode, opt);
  r.expansion = e.value;
  r.expansion_exact = e.exact;
  if (e.exact) r.distortion_lb = r.avg_cap * r.expansion;
  return r;
}

}  // namespace hypervol
