#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypervol/hypervol.hpp"

using namespace hypervol;
using hypervol::json::Json;

namespace {

void emit(const std::string& path, const Json& j) {
  if (path.empty() || path == "-")
    std::cout << j.dump(2) << '\n';
  else
    json::write_file(path, j);
}

std::vector<double> weights_or_unit(const std::string& path, const SimplexSet& k) {
  if (path.empty()) return std::vector<double>(k.universe_size(), 1.0);
  VolumeFunction w = json::volume_from_json(json::read_file(path));
  require(w.n == k.n() && w.d == k.d(), "weights live on a different complex than the input");
  return w.values;
}

double max_triangle_error(const std::vector<Point2>& s, const WeightedPointSet& p) {
  double e = 0.0;
  for_each_simplex(static_cast<int>(s.size()), 2, [&](SimplexKey k) {
    auto v = k.vertices();
    Point2 a = s[static_cast<std::size_t>(v[0])], b = s[static_cast<std::size_t>(v[1])],
           c = s[static_cast<std::size_t>(v[2])];
    e = std::max(e, std::abs(triangle_mass(p, a, b, c) / triangle_area(a, b, c) - 1.0));
  });
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite d-volumes, hypercuts, cut decompositions and their sparsification"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: HYPERVOL_THREADS or 1)")->check(CLI::NonNegativeNumber);

  std::string in, out, report_path, points_path, weights_path;
  int n = 0, d = 2;
  std::uint64_t seed = 0;
  double epsilon = 0.25;

  // hypertree
  auto* hypertree = app.add_subcommand("hypertree", "connectivity, rank and a spanning hypertree of a complex");
  hypertree->add_option("--in", in, "SimplexSet JSON (default: the complete complex on --n, --d)");
  hypertree->add_option("--n", n);
  hypertree->add_option("--d", d);
  hypertree->add_option("--out", out);

  // hypercuts
  auto* hypercuts = app.add_subcommand("hypercuts", "enumerate or check hypercuts");
  hypercuts->require_subcommand(1);
  std::size_t max_bits = kDefaultEnumerationBits;
  auto* hc_enum = hypercuts->add_subcommand("enum", "all hypercuts of the complete complex");
  hc_enum->add_option("--n", n)->required();
  hc_enum->add_option("--d", d);
  hc_enum->add_option("--max-bits", max_bits, "refuse to enumerate more than 2^max-bits inducers");
  hc_enum->add_option("--out", out);
  auto* hc_check = hypercuts->add_subcommand("check", "classify a set of simplices");
  hc_check->add_option("--in", in, "SimplexSet JSON")->required();
  hc_check->add_option("--out", out);

  // volume
  auto* volume = app.add_subcommand("volume", "volume functions");
  volume->require_subcommand(1);
  std::size_t cycle_bound = 8, node_limit = std::size_t{1} << 24;
  auto* vol_check = volume->add_subcommand("check", "triangle inequality over simple cycles");
  vol_check->add_option("--in", in, "VolumeFunction JSON")->required();
  vol_check->add_option("--cycle-bound", cycle_bound, "largest simple cycle examined");
  vol_check->add_option("--node-limit", node_limit, "search nodes before giving up");
  vol_check->add_option("--out", out);
  auto* vol_euclid = volume->add_subcommand("euclidean", "volumes of simplices spanned by points");
  vol_euclid->add_option("--points", points_path, "points JSON")->required();
  vol_euclid->add_option("--d", d);
  vol_euclid->add_option("--out", out);
  auto* vol_cap = volume->add_subcommand("cap", "lightest-cap volume of a weighted connected complex");
  vol_cap->add_option("--in", in, "SimplexSet JSON")->required();
  vol_cap->add_option("--weights", weights_path, "VolumeFunction JSON of weights (default: unit)");
  vol_cap->add_option("--node-limit", node_limit, "search nodes per simplex");
  vol_cap->add_option("--out", out);

  // decompose
  auto* decompose = app.add_subcommand("decompose", "cut decompositions");
  decompose->require_subcommand(1);
  auto* dec_tree = decompose->add_subcommand("tree", "fundamental hypercuts of a weighted hypertree");
  dec_tree->add_option("--in", in, "SimplexSet JSON of a hypertree")->required();
  dec_tree->add_option("--weights", weights_path, "VolumeFunction JSON of weights (default: unit)");
  dec_tree->add_option("--out", out);
  auto* dec_mst = decompose->add_subcommand("mst", "l1 approximation through a minimum spanning hypertree");
  dec_mst->add_option("--in", in, "VolumeFunction JSON")->required();
  dec_mst->add_option("--out", out);
  dec_mst->add_option("--report", report_path, "tree and distortion");
  auto* dec_l1 = decompose->add_subcommand("l1metric", "cuts of the l1 metric of points");
  dec_l1->add_option("--points", points_path, "points JSON")->required();
  dec_l1->add_option("--out", out);
  auto* dec_e2 = decompose->add_subcommand("euclid2d", "geometric cuts of planar triangle areas");
  dec_e2->add_option("--points", points_path, "points JSON, dim 2")->required();
  dec_e2->add_option("--out", out);

  // sparsify
  auto* sparsify = app.add_subcommand("sparsify", "reduce the cut dimension of a decomposition");
  std::string engine = "strength", sampling = "binomial", method = "crossing";
  double k = 5.0, scale = 1.0;
  sparsify->add_option("--engine", engine)->check(CLI::IsMember({"strength", "spectral", "spectral-det"}));
  sparsify->add_option("--epsilon", epsilon);
  sparsify->add_option("--k", k, "failure exponent of the strength engine");
  sparsify->add_option("--seed", seed);
  sparsify->add_option("--scale", scale, "copies per unit weight in the strength engine");
  sparsify->add_option("--sampling", sampling)->check(CLI::IsMember({"binomial", "poisson"}));
  sparsify->add_option("--method", method, "cochain for geometric terms")->check(CLI::IsMember({"crossing", "angle"}));
  sparsify->add_option("--in", in, "CutDecomposition JSON")->required();
  sparsify->add_option("--out", out);
  sparsify->add_option("--report", report_path);

  // randcx
  auto* randcx = app.add_subcommand("randcx", "random 2-complex, face expansion and distortion lower bound");
  std::optional<double> p_opt;
  std::string mode = "exact";
  std::size_t samples = 2000;
  int max_exact_n = 7;
  randcx->add_option("--n", n)->required();
  randcx->add_option("--p", p_opt, "density (default: 25 ln n / n, clamped to 1)");
  randcx->add_option("--seed", seed);
  randcx->add_option("--mode", mode)->check(CLI::IsMember({"exact", "sampled"}));
  randcx->add_option("--samples", samples, "hypercuts per generator in sampled mode");
  randcx->add_option("--max-exact-n", max_exact_n, "largest n for exact enumeration");
  randcx->add_option("--out", out);

  // discrepancy
  auto* discrepancy = app.add_subcommand("discrepancy", "weighted sampling set for triangle areas");
  discrepancy->add_option("--points", points_path, "points JSON, dim 2")->required();
  discrepancy->add_option("--epsilon", epsilon);
  discrepancy->add_option("--seed", seed);
  discrepancy->add_option("--out", out);
  discrepancy->add_option("--report", report_path);

  // report
  auto* report = app.add_subcommand("report", "summarize a decomposition, optionally against a reference");
  std::string against;
  bool csv = false;
  report->add_option("--in", in, "CutDecomposition JSON")->required();
  report->add_option("--against", against, "reference CutDecomposition JSON");
  report->add_flag("--csv", csv, "per-simplex values as CSV instead of JSON");
  report->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (threads > 0) set_thread_count(static_cast<unsigned>(threads));

    if (*hypertree) {
      SimplexSet cx = in.empty() ? SimplexSet::complete(n, d) : json::simplex_set_from_json(json::read_file(in));
      auto t = find_hypertree(cx);
      Json j = {{"n", cx.n()},
                {"d", cx.d()},
                {"size", cx.size()},
                {"rank", column_rank(cx)},
                {"hypertree_size", hypertree_size(cx.n(), cx.d())},
                {"connected", t.has_value()},
                {"is_hypertree", is_hypertree(cx)},
                {"hypertree", t ? json::to_json(*t) : Json(nullptr)}};
      emit(out, j);
    } else if (*hc_enum) {
      Json list = Json::array();
      for (const auto& h : enumerate_hypercuts(n, d, max_bits)) list.push_back(json::to_json(h.cut()));
      emit(out, list);
    } else if (*hc_check) {
      SimplexSet c = json::simplex_set_from_json(json::read_file(in));
      bool co = is_coboundary(c);
      Json j = {{"size", c.size()}, {"coboundary", co}, {"hypercut", is_hypercut(c)}};
      if (co && !c.empty()) {
        Coboundary b = make_coboundary(c);
        j["inducer"] = json::to_json(b.inducer);
        if (c.d() == 2) j["v_connected_link"] = is_2hypercut_via_link(b);
        Json parts = Json::array();
        for (const auto& h : decompose_coboundary(b)) parts.push_back(json::to_json(h.cut()));
        j["hypercuts"] = std::move(parts);
      }
      emit(out, j);
    } else if (*vol_check) {
      VolumeFunction v = json::volume_from_json(json::read_file(in));
      VolumeCheck r = check_volume(v, cycle_bound, node_limit);
      emit(out, {{"ok", r.ok},
                 {"cycles_checked", r.cycles_checked},
                 {"cycle_bound", cycle_bound},
                 {"cycle", r.cycle ? json::to_json(*r.cycle) : Json(nullptr)},
                 {"sigma", r.sigma ? Json(r.sigma->vertices()) : Json(nullptr)}});
    } else if (*vol_euclid) {
      emit(out, json::to_json(euclidean_volume(json::points_from_json(json::read_file(points_path)), d)));
    } else if (*vol_cap) {
      SimplexSet cx = json::simplex_set_from_json(json::read_file(in));
      auto w = weights_or_unit(weights_path, cx);
      emit(out, json::to_json(lightest_cap_volume(cx, w, CapOptions{node_limit})));
    } else if (*dec_tree) {
      SimplexSet t = json::simplex_set_from_json(json::read_file(in));
      auto w = weights_or_unit(weights_path, t);
      emit(out, json::to_json(hypertree_decomposition(t, w)));
    } else if (*dec_mst) {
      MstApproximation m = mst_approximation(json::volume_from_json(json::read_file(in)));
      emit(out, json::to_json(m.decomposition));
      if (!report_path.empty())
        json::write_file(report_path, {{"tree", json::to_json(m.tree)}, {"distortion", m.distortion}});
    } else if (*dec_l1) {
      emit(out, json::to_json(l1_metric_to_cuts(json::points_from_json(json::read_file(points_path)))));
    } else if (*dec_e2) {
      emit(out, json::to_json(euclidean_to_geometric_cuts_2d(json::points_from_json(json::read_file(points_path)))));
    } else if (*sparsify) {
      CutDecomposition dec = json::decomposition_from_json(json::read_file(in));
      SparsifyResult res;
      if (engine == "strength") {
        StrengthOptions opt{k, scale, sampling == "poisson" ? CopySampling::kPoisson : CopySampling::kBinomial};
        res = sparsify_strength(dec, epsilon, seed, opt);
      } else {
        SpectralOptions opt;
        opt.mode = engine == "spectral" ? SpectralMode::kSampled : SpectralMode::kDeterministic;
        auto fac = factorization_for(dec, method == "angle" ? CochainMethod::kAngle : CochainMethod::kCrossing);
        res = sparsify_spectral(dec, fac, epsilon, seed, opt);
      }
      emit(out, json::to_json(res.decomposition));
      if (!report_path.empty()) json::write_file(report_path, json::to_json(res.report));
    } else if (*randcx) {
      require(n >= 3 && n <= kMaxVertices, "randcx needs 3 <= n <= 64");
      double p = 25.0 * std::log(static_cast<double>(n)) / n;
      if (p_opt) {
        p = *p_opt;
      } else if (p > 1.0) {
        std::cerr << "warning: 25 ln n / n = " << p << " exceeds 1 for n=" << n << "; using p = 1\n";
        p = 1.0;
      }
      bool exact = mode == "exact";
      if (exact && n > max_exact_n)
        throw GuardExceeded("exact face expansion enumerates every hypercut; n=" + std::to_string(n) +
                            " exceeds --max-exact-n " + std::to_string(max_exact_n));
      SimplexSet cx = random_complex(n, p, seed);
      ExpansionReport r;
      if (is_connected(cx)) {
        r = distortion_lower_bound(cx, exact ? ExpansionMode::kExact : ExpansionMode::kSampled,
                                   ExpansionOptions{samples, seed});
      } else {
        // Some hypercut avoids a disconnected complex, so its expansion is 0.
        r.complex = cx;
        r.n = n;
        r.expansion = 0.0;
        r.expansion_exact = true;
      }
      r.p = p;
      r.seed = seed;
      Json j = json::to_json(r);
      j["mode"] = mode;
      j["connected"] = is_connected(cx);
      j["size"] = cx.size();
      if (!r.expansion_exact) j["expansion_is_upper_bound"] = true;
      emit(out, j);
    } else if (*discrepancy) {
      Eigen::MatrixXd m = json::points_from_json(json::read_file(points_path));
      auto s = to_points2(m);
      WeightedPointSet p0 = build_initial_sampling_set(s);
      SamplingResult res = sparsify_sampling_set(s, p0, epsilon, seed);
      emit(out, json::to_json(res.points));
      if (!report_path.empty()) {
        Json j = json::to_json(res.report);
        j["initial_size"] = p0.points.size();
        j["final_size"] = res.points.points.size();
        j["initial_max_triangle_error"] = max_triangle_error(s, p0);
        j["final_max_triangle_error"] = max_triangle_error(s, res.points);
        json::write_file(report_path, j);
      }
    } else if (*report) {
      CutDecomposition dec = json::decomposition_from_json(json::read_file(in));
      VolumeFunction v = dec.evaluate();
      std::optional<VolumeFunction> ref;
      if (!against.empty()) {
        ref = json::decomposition_from_json(json::read_file(against)).evaluate();
        require(ref->n == v.n && ref->d == v.d, "--against lives on a different complex");
      }
      if (csv) {
        std::string text = ref ? "simplex,value,reference\n" : "simplex,value\n";
        for_each_simplex(v.n, v.d, [&](SimplexKey s) {
          text += '"' + s.to_string() + "\"," + json::Json(v[s]).dump();
          if (ref) text += "," + json::Json((*ref)[s]).dump();
          text += '\n';
        });
        if (out.empty() || out == "-") {
          std::cout << text;
        } else {
          std::ofstream f(out);
          require(static_cast<bool>(f), "cannot write " + out);
          f << text;
        }
      } else {
        Json j = {{"n", dec.n}, {"d", dec.d}, {"cut_dimension", dec.cut_dimension()}, {"total_weight", dec.total_weight()}};
        if (ref) {
          j["distortion"] = distortion(v, *ref);
          j["max_rel_error"] = max_relative_error(ref->values, v.values);
        }
        emit(out, j);
      }
    }
  } catch (const GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
