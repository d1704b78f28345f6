#pragma once

// JSON forms of the library's values. Parsing validates and throws
// ValidationError naming the offending field.
//
//   SimplexSet        {"n":int,"d":int,"simplices":[[v,...],...]}
//   VolumeFunction    {"n":int,"d":int,"values":[f64,...]}            colex order
//   CutDecomposition  {"n":int,"d":int,"terms":[{"cut":[[v,...],...],"lambda":f64,
//                      "witness":{"points":[[f64,...],...],"p":[f64,...]}}]}
//   points            {"dim":int,"points":[[f64,...],...]}
//   WeightedPointSet  {"points":[[x,y],...],"weights":[f64,...]}

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypervol/arrangement.hpp"
#include "hypervol/discrepancy.hpp"
#include "hypervol/error.hpp"
#include "hypervol/l1cone.hpp"
#include "hypervol/randcx.hpp"
#include "hypervol/simplex.hpp"
#include "hypervol/sparsify.hpp"
#include "hypervol/volumes.hpp"

namespace hypervol::json {

using Json = nlohmann::json;

inline Json parse(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(source + ": malformed JSON: " + e.what());
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

inline void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  require(j.is_object(), std::string("expected an object with field \"") + key + "\"");
  auto it = j.find(key);
  require(it != j.end(), std::string("missing field \"") + key + "\"");
  return *it;
}

inline int get_int(const Json& j, const char* key) {
  const Json& v = field(j, key);
  require(v.is_number_integer(), std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

inline double get_double(const Json& v, const std::string& what) {
  require(v.is_number(), what + " must be a number");
  return v.get<double>();
}

inline std::vector<double> get_doubles(const Json& v, const std::string& what) {
  require(v.is_array(), what + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_double(v[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

inline Eigen::MatrixXd get_matrix(const Json& v, const std::string& what) {
  require(v.is_array() && !v.empty(), what + " must be a nonempty array of rows");
  std::size_t cols = 0;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    rows.push_back(get_doubles(v[i], what + "[" + std::to_string(i) + "]"));
    if (i == 0) cols = rows[0].size();
    require(rows.back().size() == cols, what + ": rows differ in length");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

inline Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void check_space(int n, int d) {
  require(n >= 1 && n <= kMaxVertices && d >= 0 && d < n, "need 0 <= d < n <= 64, got n=" + std::to_string(n) +
                                                              " d=" + std::to_string(d));
}

inline Json simplex_lists(const SimplexSet& s) {
  Json list = Json::array();
  for (auto k : s.keys()) list.push_back(k.vertices());
  return list;
}

inline SimplexSet parse_simplex_lists(int n, int d, const Json& list, const std::string& what) {
  require(list.is_array(), what + " must be an array of simplices");
  SimplexSet s(n, d);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Json& v = list[i];
    std::string where = what + "[" + std::to_string(i) + "]";
    require(v.is_array(), where + " must be an array of vertices");
    std::vector<Vertex> vs;
    for (const auto& x : v) {
      require(x.is_number_integer(), where + " has a non-integer vertex");
      vs.push_back(x.get<Vertex>());
    }
    auto key = SimplexKey::from_vertices(vs);
    require(static_cast<int>(vs.size()) == d + 1, where + " must have " + std::to_string(d + 1) + " vertices");
    s.check_key(key);
    require(!s.contains(key), where + " is listed twice");
    s.insert(key);
  }
  return s;
}

}  // namespace detail

inline Json to_json(const SimplexSet& s) {
  return {{"n", s.n()}, {"d", s.d()}, {"simplices", detail::simplex_lists(s)}};
}

inline SimplexSet simplex_set_from_json(const Json& j) {
  int n = detail::get_int(j, "n"), d = detail::get_int(j, "d");
  detail::check_space(n, d);
  return detail::parse_simplex_lists(n, d, detail::field(j, "simplices"), "simplices");
}

inline Json to_json(const VolumeFunction& v) { return {{"n", v.n}, {"d", v.d}, {"values", v.values}}; }

inline VolumeFunction volume_from_json(const Json& j) {
  int n = detail::get_int(j, "n"), d = detail::get_int(j, "d");
  detail::check_space(n, d);
  return VolumeFunction(n, d, detail::get_doubles(detail::field(j, "values"), "values"));
}

inline Json to_json(const GeometricWitness& w) {
  return {{"points", detail::matrix_json(w.points)}, {"p", std::vector<double>(w.p.data(), w.p.data() + w.p.size())}};
}

inline Json to_json(const CutDecomposition& dec) {
  Json terms = Json::array();
  for (const auto& t : dec.terms) {
    Json term = {{"cut", detail::simplex_lists(t.cut)}, {"lambda", t.lambda}};
    if (t.witness) term["witness"] = to_json(*t.witness);
    terms.push_back(std::move(term));
  }
  return {{"n", dec.n}, {"d", dec.d}, {"terms", std::move(terms)}};
}

inline CutDecomposition decomposition_from_json(const Json& j) {
  CutDecomposition dec;
  dec.n = detail::get_int(j, "n");
  dec.d = detail::get_int(j, "d");
  detail::check_space(dec.n, dec.d);
  const Json& terms = detail::field(j, "terms");
  require(terms.is_array(), "terms must be an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string where = "terms[" + std::to_string(i) + "]";
    const Json& t = terms[i];
    require(t.is_object(), where + " must be an object");
    CutTerm term;
    term.cut = detail::parse_simplex_lists(dec.n, dec.d, detail::field(t, "cut"), where + ".cut");
    term.lambda = detail::get_double(detail::field(t, "lambda"), where + ".lambda");
    if (auto it = t.find("witness"); it != t.end()) {
      GeometricWitness w;
      w.points = detail::get_matrix(detail::field(*it, "points"), where + ".witness.points");
      auto p = detail::get_doubles(detail::field(*it, "p"), where + ".witness.p");
      require(w.points.rows() == dec.n && w.points.cols() == dec.d && static_cast<int>(p.size()) == dec.d,
              where + ".witness must hold n points and p in dimension d");
      w.p = Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
      term.witness = std::move(w);
    }
    dec.terms.push_back(std::move(term));
  }
  dec.validate();
  return dec;
}

inline Json points_to_json(const Eigen::MatrixXd& points) {
  return {{"dim", points.cols()}, {"points", detail::matrix_json(points)}};
}

inline Eigen::MatrixXd points_from_json(const Json& j) {
  int dim = detail::get_int(j, "dim");
  Eigen::MatrixXd m = detail::get_matrix(detail::field(j, "points"), "points");
  require(m.cols() == dim, "points must have dim=" + std::to_string(dim) + " coordinates");
  for (Eigen::Index i = 0; i < m.size(); ++i) require(std::isfinite(m.data()[i]), "points must be finite");
  return m;
}

inline Json to_json(const WeightedPointSet& p) {
  Json pts = Json::array();
  for (auto q : p.points) pts.push_back({q.x, q.y});
  return {{"points", std::move(pts)}, {"weights", p.weights}};
}

inline WeightedPointSet weighted_points_from_json(const Json& j) {
  WeightedPointSet p;
  Eigen::MatrixXd m = detail::get_matrix(detail::field(j, "points"), "points");
  require(m.cols() == 2, "weighted points must be planar");
  for (Eigen::Index i = 0; i < m.rows(); ++i) p.points.push_back({m(i, 0), m(i, 1)});
  p.weights = detail::get_doubles(detail::field(j, "weights"), "weights");
  p.validate();
  return p;
}

inline Json to_json(const SparsifyReport& r) {
  Json support = Json::array();
  for (const auto& e : r.support) support.push_back({{"id", e.id}, {"lambda", e.lambda}});
  return {{"engine", r.engine},
          {"epsilon", r.epsilon},
          {"seed", r.seed},
          {"rho", r.rho},
          {"k", r.k},
          {"N", r.N},
          {"t", r.t},
          {"scale", r.scale},
          {"sampling", r.sampling},
          {"samples", r.samples},
          {"rank", r.rank},
          {"full_selection", r.full_selection},
          {"input_support", r.input_support},
          {"support_size", r.support.size()},
          {"support", std::move(support)},
          {"max_rel_error", r.max_rel_error}};
}

inline SparsifyReport report_from_json(const Json& j) {
  SparsifyReport r;
  try {
    r.engine = j.at("engine").get<std::string>();
    r.epsilon = j.at("epsilon").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.rho = j.at("rho").get<double>();
    r.k = j.at("k").get<double>();
    r.N = j.at("N").get<std::size_t>();
    r.t = j.at("t").get<std::size_t>();
    r.scale = j.at("scale").get<double>();
    r.sampling = j.at("sampling").get<std::string>();
    r.samples = j.at("samples").get<std::size_t>();
    r.rank = j.at("rank").get<std::size_t>();
    r.full_selection = j.at("full_selection").get<bool>();
    r.input_support = j.at("input_support").get<std::size_t>();
    for (const auto& e : j.at("support"))
      r.support.push_back({e.at("id").get<std::uint64_t>(), e.at("lambda").get<double>()});
    r.max_rel_error = j.at("max_rel_error").get<double>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("sparsify report: ") + e.what());
  }
  return r;
}

inline Json to_json(const ExpansionReport& r) {
  return {{"n", r.n},
          {"p", r.p},
          {"seed", r.seed},
          {"complex", to_json(r.complex)},
          {"expansion", r.expansion},
          {"expansion_exact", r.expansion_exact},
          {"avg_cap", r.avg_cap},
          {"distortion_lb", r.distortion_lb ? Json(*r.distortion_lb) : Json(nullptr)}};
}

}  // namespace hypervol::json
