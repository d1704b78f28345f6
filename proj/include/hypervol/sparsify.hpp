#pragma once

// Reducing the number of columns of a nonnegative column system while
// keeping every row sum within (1 +- eps): strength-based sampling for 0/1
// systems, spectral selection from a square-root factorization, and the
// quadratic-form sparsifier of a weighted complex.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hypervol/complex.hpp"
#include "hypervol/error.hpp"
#include "hypervol/gf2.hpp"
#include "hypervol/l1cone.hpp"
#include "hypervol/parallel.hpp"
#include "hypervol/rng.hpp"

namespace hypervol {

struct SparseColumn {
  std::uint64_t id = 0;
  std::vector<std::pair<std::size_t, double>> entries;  // (row, value), rows ascending
  double lambda = 0.0;
};

struct ColumnSystem {
  std::size_t rows = 0;
  std::vector<SparseColumn> columns;

  void validate(bool boolean) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& col = columns[c];
      require(!col.entries.empty(), "column " + std::to_string(col.id) + " is all zero");
      require(std::isfinite(col.lambda) && col.lambda > 0.0, "column " + std::to_string(col.id) + " needs a positive weight");
      for (auto [r, v] : col.entries) {
        require(r < rows, "column " + std::to_string(col.id) + " has a row out of range");
        require(std::isfinite(v) && v > 0.0, "column " + std::to_string(col.id) + " has a nonpositive entry");
        if (boolean) require(v == 1.0, "column " + std::to_string(col.id) + " is not 0/1");
      }
    }
  }

  // w = sum_c lambda_c col_c.
  std::vector<double> weights() const { return weights_with(nullptr); }

  std::vector<double> weights_with(const std::vector<double>* lambdas) const {
    std::vector<double> w(rows, 0.0);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      double l = lambdas ? (*lambdas)[c] : columns[c].lambda;
      if (l == 0.0) continue;
      for (auto [r, v] : columns[c].entries) w[r] += l * v;
    }
    return w;
  }
};

// Rows are all d-simplices, columns are the terms (id = term position).
inline ColumnSystem column_system(const CutDecomposition& dec) {
  dec.validate();
  ColumnSystem sys{simplex_count(dec.n, dec.d), {}};
  for (std::size_t i = 0; i < dec.terms.size(); ++i) {
    SparseColumn col{i, {}, dec.terms[i].lambda};
    dec.terms[i].cut.for_each_index([&](std::size_t r) { col.entries.emplace_back(r, 1.0); });
    sys.columns.push_back(std::move(col));
  }
  return sys;
}

struct StrengthPhase {
  std::size_t row = 0;                 // row that started the phase
  double threshold = 0.0;              // current m
  std::vector<std::size_t> killed;     // column positions zeroed in this phase
};

struct StrengthTable {
  std::vector<double> strength;  // per column position
  std::vector<StrengthPhase> phases;
  std::size_t N = 0;  // number of phases
  std::size_t t = 0;  // number of distinct strengths

  // sum_c lambda_c / s(c)
  double inverse_mass(const ColumnSystem& sys) const {
    double s = 0.0;
    for (std::size_t c = 0; c < sys.columns.size(); ++c) s += sys.columns[c].lambda / strength[c];
    return s;
  }
};

// Peeling with weighted row sums w_*: repeatedly take the row with the
// smallest positive w_* (ties by row index), raise m to it if needed, give
// every surviving column of that row strength m and remove those columns.
// A column of weight lambda counts as lambda units of mass.
inline StrengthTable compute_strengths(const ColumnSystem& sys) {
  sys.validate(true);
  const std::size_t rows = sys.rows, cols = sys.columns.size();
  std::vector<std::vector<std::size_t>> row_cols(rows);
  for (std::size_t c = 0; c < cols; ++c)
    for (auto [r, v] : sys.columns[c].entries) row_cols[r].push_back(c);

  std::vector<char> alive(cols, 1);
  std::vector<std::size_t> alive_count(rows, 0);
  std::vector<double> mass(rows, 0.0);
  auto recompute = [&](std::size_t r) {
    double s = 0.0;
    for (auto c : row_cols[r])
      if (alive[c]) s += sys.columns[c].lambda;
    mass[r] = s;
  };
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t r = 0; r < rows; ++r) {
    alive_count[r] = row_cols[r].size();
    recompute(r);
    if (alive_count[r] > 0) queue.emplace(mass[r], r);
  }

  StrengthTable table;
  table.strength.assign(cols, 0.0);
  double m = 0.0;
  std::vector<std::size_t> dirty;
  while (!queue.empty()) {
    auto [value, f] = queue.top();
    queue.pop();
    if (alive_count[f] == 0 || value != mass[f]) continue;  // stale entry
    m = std::max(m, value);
    StrengthPhase phase{f, m, {}};
    dirty.clear();
    for (auto c : row_cols[f]) {
      if (!alive[c]) continue;
      alive[c] = 0;
      table.strength[c] = m;
      phase.killed.push_back(c);
      for (auto [r, v] : sys.columns[c].entries) {
        --alive_count[r];
        dirty.push_back(r);
      }
    }
    std::sort(dirty.begin(), dirty.end());
    dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
    for (auto r : dirty) {
      recompute(r);
      if (alive_count[r] > 0) queue.emplace(mass[r], r);
    }
    table.phases.push_back(std::move(phase));
  }
  table.N = table.phases.size();
  std::vector<double> distinct(table.strength);
  std::sort(distinct.begin(), distinct.end());
  table.t = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
  return table;
}

// Checks that the phase trace gives a lower-triangular minor with unit
// diagonal: rows f_i and the first column c_i killed in phase i satisfy
// M(f_i, c_i) = 1 and M(f_i, c_j) = 0 for j > i.
inline bool verify_triangular_trace(const ColumnSystem& sys, const StrengthTable& table) {
  const std::size_t n = table.phases.size();
  std::vector<std::size_t> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table.phases[i].killed.empty()) return false;
    diag[i] = table.phases[i].killed.front();
  }
  auto has = [&](std::size_t c, std::size_t r) {
    const auto& e = sys.columns[c].entries;
    return std::binary_search(e.begin(), e.end(), std::pair<std::size_t, double>{r, 0.0},
                              [](const auto& a, const auto& b) { return a.first < b.first; });
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!has(diag[i], table.phases[i].row)) return false;
    for (std::size_t j = i + 1; j < n; ++j)
      if (has(diag[j], table.phases[i].row)) return false;
  }
  return true;
}

enum class CopySampling { kBinomial, kPoisson };

struct StrengthOptions {
  double k = 5.0;
  // Units of mass per unit of lambda: a column of weight lambda is split
  // into max(1, ceil(scale * lambda)) equal copies, each kept independently.
  double scale = 1.0;
  CopySampling sampling = CopySampling::kBinomial;
};

struct SupportEntry {
  std::uint64_t id = 0;
  double lambda = 0.0;
};

struct SparsifyReport {
  std::string engine;
  double epsilon = 0.0;
  double rho = 0.0;
  double k = 0.0;
  std::uint64_t seed = 0;
  std::size_t N = 0;
  std::size_t t = 0;
  double scale = 0.0;
  std::string sampling;
  std::size_t samples = 0;
  std::size_t rank = 0;
  bool full_selection = false;
  std::size_t input_support = 0;
  std::vector<SupportEntry> support;
  double max_rel_error = 0.0;
};

inline double max_relative_error(const std::vector<double>& w, const std::vector<double>& w2) {
  double e = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) e = std::max(e, std::abs(w2[i] / w[i] - 1.0));
    else if (w2[i] != 0.0) e = std::numeric_limits<double>::infinity();
  return e;
}

struct StrengthSample {
  std::vector<double> lambda;     // new weight per column position
  std::vector<double> kept_mass;  // K * mu per column: sampled mass before rescaling
  std::vector<double> p;          // per-copy keep probability
};

inline double strength_rho(double epsilon, std::size_t rows, std::size_t t, double k) {
  return 3.0 / (epsilon * epsilon) * (std::log(2.0 * static_cast<double>(rows)) + std::log(static_cast<double>(std::max<std::size_t>(t, 1))) + k);
}

inline StrengthSample sample_by_strength(const ColumnSystem& sys, const StrengthTable& table, double rho,
                                         std::uint64_t seed, const StrengthOptions& opt) {
  const std::size_t cols = sys.columns.size();
  StrengthSample out{std::vector<double>(cols, 0.0), std::vector<double>(cols, 0.0), std::vector<double>(cols, 1.0)};
  parallel_for(cols, [&](std::size_t c) {
    const auto& col = sys.columns[c];
    double p = std::min(rho / (opt.scale * table.strength[c]), 1.0);
    out.p[c] = p;
    if (p >= 1.0) {
      out.kept_mass[c] = col.lambda;
      out.lambda[c] = col.lambda;
      return;
    }
    KeyedRng rng(seed, streams::kStrength, col.id);
    double kept = 0.0, mu = 0.0;
    if (opt.sampling == CopySampling::kBinomial) {
      double copies = std::max(1.0, std::ceil(opt.scale * col.lambda));
      mu = col.lambda / copies;
      std::binomial_distribution<long long> dist(static_cast<long long>(copies), p);
      kept = static_cast<double>(dist(rng));
    } else {
      mu = 1.0 / opt.scale;
      std::poisson_distribution<long long> dist(opt.scale * col.lambda * p);
      kept = static_cast<double>(dist(rng));
    }
    out.kept_mass[c] = kept * mu;
    out.lambda[c] = kept * mu / p;
  });
  return out;
}

// Per strength level i (ascending), z_i = sum over columns with strength
// >= s_i of their kept mass, and Delta_i = 1/p_i - 1/p_{i-1}. The new row
// sums are sum_i Delta_i z_i.
struct StrengthLevels {
  std::vector<double> strengths;
  std::vector<double> delta;
  std::vector<std::vector<double>> z;

  std::vector<double> recombine() const {
    std::vector<double> w(z.empty() ? 0 : z.front().size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t r = 0; r < w.size(); ++r) w[r] += delta[i] * z[i][r];
    return w;
  }
};

inline StrengthLevels strength_levels(const ColumnSystem& sys, const StrengthTable& table, const StrengthSample& sample) {
  StrengthLevels lv;
  lv.strengths = table.strength;
  std::sort(lv.strengths.begin(), lv.strengths.end());
  lv.strengths.erase(std::unique(lv.strengths.begin(), lv.strengths.end()), lv.strengths.end());
  std::map<double, double> alpha_of;
  for (std::size_t c = 0; c < sys.columns.size(); ++c) alpha_of[table.strength[c]] = 1.0 / sample.p[c];
  double prev = 0.0;
  for (double s : lv.strengths) {
    double a = alpha_of[s];
    lv.delta.push_back(a - prev);
    prev = a;
    std::vector<double> z(sys.rows, 0.0);
    for (std::size_t c = 0; c < sys.columns.size(); ++c)
      if (table.strength[c] >= s)
        for (auto [r, v] : sys.columns[c].entries) z[r] += sample.kept_mass[c] * v;
    lv.z.push_back(std::move(z));
  }
  return lv;
}

struct SparsifyResult {
  CutDecomposition decomposition;
  SparsifyReport report;
};

inline CutDecomposition reweighted(const CutDecomposition& dec, const std::vector<double>& lambda) {
  CutDecomposition out{dec.n, dec.d, {}};
  for (std::size_t i = 0; i < dec.terms.size(); ++i)
    if (lambda[i] > 0.0) {
      CutTerm t = dec.terms[i];
      t.lambda = lambda[i];
      out.terms.push_back(std::move(t));
    }
  return out;
}

inline void fill_support(SparsifyReport& report, const ColumnSystem& sys, const std::vector<double>& lambda) {
  report.input_support = sys.columns.size();
  report.support.clear();
  for (std::size_t c = 0; c < sys.columns.size(); ++c)
    if (lambda[c] > 0.0) report.support.push_back({sys.columns[c].id, lambda[c]});
  report.max_rel_error = max_relative_error(sys.weights(), sys.weights_with(&lambda));
}

inline void check_epsilon(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
}

// Strength engine on a 0/1 column system.
inline std::pair<std::vector<double>, SparsifyReport> sparsify_strength(const ColumnSystem& sys, double epsilon,
                                                                        std::uint64_t seed, StrengthOptions opt = {}) {
  check_epsilon(epsilon);
  require(opt.k > 0.0, "k must be positive");
  require(opt.scale > 0.0 && std::isfinite(opt.scale), "scale must be positive");
  StrengthTable table = compute_strengths(sys);
  SparsifyReport report;
  report.engine = "strength";
  report.epsilon = epsilon;
  report.k = opt.k;
  report.seed = seed;
  report.N = table.N;
  report.t = table.t;
  report.scale = opt.scale;
  report.sampling = opt.sampling == CopySampling::kBinomial ? "binomial" : "poisson";
  report.rho = strength_rho(epsilon, sys.rows, table.t, opt.k);
  StrengthSample sample = sample_by_strength(sys, table, report.rho, seed, opt);
  report.full_selection = std::all_of(sample.p.begin(), sample.p.end(), [](double p) { return p >= 1.0; });
  fill_support(report, sys, sample.lambda);
  return {std::move(sample.lambda), std::move(report)};
}

inline SparsifyResult sparsify_strength(const CutDecomposition& dec, double epsilon, std::uint64_t seed,
                                        StrengthOptions opt = {}) {
  auto sys = column_system(dec);
  auto [lambda, report] = sparsify_strength(sys, epsilon, seed, opt);
  return {reweighted(dec, lambda), std::move(report)};
}

enum class SpectralMode { kSampled, kDeterministic };

struct SpectralOptions {
  SpectralMode mode = SpectralMode::kSampled;
  double oversampling = 9.0;  // C in C r max(ln r, 1) / eps^2 draws
  // When more draws than this would be needed, every row is kept as is.
  std::size_t max_samples = 20'000'000;
};

struct SpectralSelection {
  std::vector<double> multiplier;  // new weight = multiplier * old weight
  std::size_t rank = 0;
  std::size_t samples = 0;
  bool full = false;
};

namespace detail {

// Whitened rows v_c = Q^{+1/2} r_c with Q = sum r_c r_c^T, as columns of an
// r x m matrix, where r is the numerical rank of Q.
inline Eigen::MatrixXd whiten(const Eigen::MatrixXd& rows, std::size_t& rank) {
  Eigen::MatrixXd q = rows.transpose() * rows;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  const auto& ev = es.eigenvalues();
  double top = ev.size() ? ev.maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-12 * top && ev(i) > 0.0) keep.push_back(i);
  rank = keep.size();
  Eigen::MatrixXd proj(static_cast<Eigen::Index>(rank), q.cols());
  for (std::size_t j = 0; j < rank; ++j)
    proj.row(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]).transpose() / std::sqrt(ev(keep[j]));
  return proj * rows.transpose();
}

// Barrier selection on whitened vectors (sum v v^T = I_r). Returns weights t_c
// with sum t_c v_c v_c^T having condition number at most
// ((sqrt(D)+1)/(sqrt(D)-1))^2 after ceil(D r) steps.
inline std::vector<double> barrier_select(const Eigen::MatrixXd& v, double big_d) {
  const Eigen::Index r = v.rows(), m = v.cols();
  const double sd = std::sqrt(big_d);
  const double delta_l = 1.0, delta_u = (sd + 1.0) / (sd - 1.0);
  const double eps_l = 1.0 / sd, eps_u = (sd - 1.0) / (big_d + sd);
  double l = -static_cast<double>(r) / eps_l, u = static_cast<double>(r) / eps_u;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(r, r);
  std::vector<double> weight(static_cast<std::size_t>(m), 0.0);
  const auto steps = static_cast<std::size_t>(std::ceil(big_d * static_cast<double>(r)));
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(r, r);
  for (std::size_t step = 0; step < steps; ++step) {
    double u2 = u + delta_u, l2 = l + delta_l;
    Eigen::MatrixXd iu = (u * eye - a).inverse(), iu2 = (u2 * eye - a).inverse();
    Eigen::MatrixXd il = (a - l * eye).inverse(), il2 = (a - l2 * eye).inverse();
    double phi_u_gap = iu.trace() - iu2.trace();
    double phi_l_gap = il2.trace() - il.trace();
    Eigen::MatrixXd iu2sq = iu2 * iu2, il2sq = il2 * il2;
    Eigen::Index best = -1;
    double best_gap = -std::numeric_limits<double>::infinity(), best_upper = 0.0;
    for (Eigen::Index c = 0; c < m; ++c) {
      auto vc = v.col(c);
      double upper = vc.dot(iu2sq * vc) / phi_u_gap + vc.dot(iu2 * vc);
      double lower = vc.dot(il2sq * vc) / phi_l_gap - vc.dot(il2 * vc);
      if (upper <= lower && lower - upper > best_gap) {
        best_gap = lower - upper;
        best = c;
        best_upper = upper;
      }
    }
    if (best < 0) throw Error("barrier selection found no admissible vector");
    double t = 1.0 / best_upper;
    a += t * v.col(best) * v.col(best).transpose();
    weight[static_cast<std::size_t>(best)] += t;
    u = u2;
    l = l2;
  }
  return weight;
}

}  // namespace detail

// Keeps a weighted subset of the rows r_c (m x k) so that the quadratic
// form of the result is within (1 +- eps) of sum r_c r_c^T on every vector.
inline SpectralSelection spectral_select(const Eigen::MatrixXd& rows, double epsilon, std::uint64_t seed,
                                         const SpectralOptions& opt = {}) {
  check_epsilon(epsilon);
  const auto m = static_cast<std::size_t>(rows.rows());
  SpectralSelection out;
  out.multiplier.assign(m, 0.0);
  Eigen::MatrixXd v = detail::whiten(rows, out.rank);
  const double r = static_cast<double>(out.rank);
  if (out.rank == 0) return out;
  if (opt.mode == SpectralMode::kDeterministic) {
    double ratio = std::sqrt((1.0 + epsilon) / (1.0 - epsilon));
    double sd = (ratio + 1.0) / (ratio - 1.0);
    auto t = detail::barrier_select(v, sd * sd);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(v.rows(), v.rows());
    for (std::size_t c = 0; c < m; ++c)
      if (t[c] > 0) a += t[c] * v.col(static_cast<Eigen::Index>(c)) * v.col(static_cast<Eigen::Index>(c)).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    double s = 2.0 / (es.eigenvalues().minCoeff() + es.eigenvalues().maxCoeff());
    for (std::size_t c = 0; c < m; ++c) out.multiplier[c] = s * t[c];
    out.samples = static_cast<std::size_t>(std::ceil(sd * sd * r));
    return out;
  }
  double draws = std::ceil(opt.oversampling * r * std::max(std::log(r), 1.0) / (epsilon * epsilon));
  if (draws > static_cast<double>(opt.max_samples)) {
    out.multiplier.assign(m, 1.0);
    out.full = true;
    return out;
  }
  auto samples = static_cast<std::size_t>(draws);
  out.samples = samples;
  std::vector<double> prob(m);
  for (std::size_t c = 0; c < m; ++c) prob[c] = v.col(static_cast<Eigen::Index>(c)).squaredNorm() / r;
  std::vector<double> cdf(m);
  std::partial_sum(prob.begin(), prob.end(), cdf.begin());
  std::vector<std::size_t> count(m, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    KeyedRng rng(seed, streams::kSpectral, s);
    double x = rng.uniform() * cdf.back();
    auto c = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
    c = std::min(c, m - 1);
    while (prob[c] == 0.0 && c > 0) --c;
    ++count[c];
  }
  for (std::size_t c = 0; c < m; ++c)
    if (count[c] > 0) out.multiplier[c] = static_cast<double>(count[c]) / (static_cast<double>(samples) * prob[c]);
  return out;
}

// Spectral engine: rows sqrt(lambda_c) b_c of the factorization.
inline SparsifyResult sparsify_spectral(const CutDecomposition& dec, const SqrtFactorization& fac, double epsilon,
                                        std::uint64_t seed, SpectralOptions opt = {}) {
  check_epsilon(epsilon);
  dec.validate();
  require(static_cast<std::size_t>(fac.b.rows()) == dec.terms.size(), "factorization has the wrong number of rows");
  double residual = rigidity_violation(fac, dec);
  require(residual <= kFactorizationTolerance,
          "factorization leaves [M, D M] by " + std::to_string(residual) + ", above tolerance");
  Eigen::MatrixXd rows = fac.b;
  for (std::size_t c = 0; c < dec.terms.size(); ++c)
    rows.row(static_cast<Eigen::Index>(c)) *= std::sqrt(dec.terms[c].lambda);
  SpectralSelection sel = spectral_select(rows, epsilon, seed, opt);
  auto sys = column_system(dec);
  std::vector<double> lambda(dec.terms.size());
  for (std::size_t c = 0; c < lambda.size(); ++c) lambda[c] = sel.full ? dec.terms[c].lambda : sel.multiplier[c] * dec.terms[c].lambda;
  SparsifyReport report;
  report.engine = opt.mode == SpectralMode::kSampled ? "spectral" : "spectral-det";
  report.epsilon = epsilon;
  report.seed = seed;
  report.k = static_cast<double>(fac.k);
  report.rank = sel.rank;
  report.samples = sel.samples;
  report.full_selection = sel.full;
  report.sampling = opt.mode == SpectralMode::kSampled ? "leverage" : "barrier";
  fill_support(report, sys, lambda);
  return {reweighted(dec, lambda), std::move(report)};
}

// Factorization matching the terms: the signed bipartition form for graph
// cuts without witnesses, exact cochains otherwise.
inline SqrtFactorization factorization_for(const CutDecomposition& dec, CochainMethod method = CochainMethod::kCrossing) {
  bool witnesses = std::all_of(dec.terms.begin(), dec.terms.end(), [](const CutTerm& t) { return t.witness.has_value(); });
  if (dec.d == 1 && !witnesses) return sqrt_factorization_cuts_d1(dec);
  return sqrt_factorization_geometric(dec, method);
}

struct TriangularRankResult {
  std::size_t bound = 0;
  bool exact = false;
};

// Size of a lower-triangular minor with unit diagonal found in the 0/1
// matrix whose rows are given. The first row of such a minor kills every
// column it touches, so trk(columns S) = max over rows f meeting S of
// 1 + trk(S minus row f). Exhaustive with memoization on S and pruning by
// the Z_2 rank of the remaining columns; stops after `budget` nodes and
// then reports the best minor found.
inline TriangularRankResult triangular_rank_lower_bound(const std::vector<BitVector>& rows, std::size_t budget = 1'000'000) {
  TriangularRankResult res;
  if (rows.empty()) {
    res.exact = true;
    return res;
  }
  const std::size_t cols = rows.front().size();
  auto rank_on = [&](const BitVector& s) {
    EchelonBasis basis(cols);
    for (const auto& r : rows) {
      BitVector x = r & s;
      if (x.any()) basis.insert(x);
    }
    return basis.rank();
  };
  // Greedy: repeatedly take the row with the fewest live ones.
  {
    BitVector s = ~BitVector(cols);
    std::size_t size = 0;
    for (;;) {
      std::size_t best = rows.size(), best_count = std::numeric_limits<std::size_t>::max();
      for (std::size_t f = 0; f < rows.size(); ++f) {
        std::size_t k = rows[f].and_count(s);
        if (k > 0 && k < best_count) {
          best_count = k;
          best = f;
        }
      }
      if (best == rows.size()) break;
      s &= ~rows[best];
      ++size;
    }
    res.bound = size;
  }
  std::map<BitVector, std::size_t> memo;
  std::size_t nodes = 0;
  bool out_of_budget = false;
  auto solve = [&](auto&& self, const BitVector& s) -> std::size_t {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    if (++nodes > budget) {
      out_of_budget = true;
      return 0;
    }
    std::size_t best = 0;
    std::size_t cap = rank_on(s);
    for (std::size_t f = 0; f < rows.size() && best < cap && !out_of_budget; ++f) {
      if (rows[f].and_count(s) == 0) continue;
      best = std::max(best, 1 + self(self, s & ~rows[f]));
    }
    if (!out_of_budget) memo.emplace(s, best);
    return best;
  };
  std::size_t exact = solve(solve, ~BitVector(cols));
  if (!out_of_budget) {
    res.bound = exact;
    res.exact = true;
  } else {
    res.bound = std::max(res.bound, exact);
  }
  return res;
}

inline std::vector<BitVector> boolean_rows(const ColumnSystem& sys) {
  std::vector<BitVector> rows(sys.rows, BitVector(sys.columns.size()));
  for (std::size_t c = 0; c < sys.columns.size(); ++c)
    for (auto [r, v] : sys.columns[c].entries)
      if (v != 0.0) rows[r].set(c);
  return rows;
}

struct FormSparsifier {
  SimplexSet support;
  std::vector<double> weights;  // colex over all d-simplices
  SpectralSelection selection;
};

// Keeps a reweighted subset K' of the weighted complex so that
// x^T M_d W' M_d^T x is within (1 +- eps) of x^T M_d W M_d^T x for every
// real (d-1)-cochain x.
inline FormSparsifier sparsify_form(const SimplexSet& k, std::span<const double> w, double epsilon, std::uint64_t seed,
                                    SpectralOptions opt = {}) {
  check_epsilon(epsilon);
  require(k.d() >= 1, "sparsify_form needs d >= 1");
  require(w.size() == k.universe_size(), "sparsify_form: weight vector length mismatch");
  const auto& m = real_boundary(k.n(), k.d());
  auto members = k.indices();
  std::vector<std::size_t> used;
  for (auto c : members) {
    require(std::isfinite(w[c]) && w[c] >= 0.0, "sparsify_form: weights must be nonnegative");
    if (w[c] > 0.0) used.push_back(c);
  }
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(used.size()), static_cast<Eigen::Index>(m.rows()));
  for (std::size_t i = 0; i < used.size(); ++i) {
    double s = std::sqrt(w[used[i]]);
    for (int j = 0; j <= k.d(); ++j)
      rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m.face(used[i], j))) = s * BoundaryMatrix::sign(j);
  }
  FormSparsifier out{SimplexSet(k.n(), k.d()), std::vector<double>(k.universe_size(), 0.0), {}};
  out.selection = spectral_select(rows, epsilon, seed, opt);
  for (std::size_t i = 0; i < used.size(); ++i) {
    double nw = out.selection.full ? w[used[i]] : out.selection.multiplier[i] * w[used[i]];
    if (nw > 0.0) {
      out.support.insert_index(used[i]);
      out.weights[used[i]] = nw;
    }
  }
  return out;
}

// x^T M_d W M_d^T x for a (d-1)-cochain x.
inline double form_value(int n, int d, std::span<const double> w, const Eigen::VectorXd& x) {
  Eigen::VectorXd b = coboundary_values(n, d, x);
  double s = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) s += w[static_cast<std::size_t>(i)] * b(i) * b(i);
  return s;
}

}  // namespace hypervol
