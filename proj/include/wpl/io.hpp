#pragma once

// JSON encodings. Exact values travel as strings: rationals "p/q", Gaussian
// rationals {"re","im"}, polynomials as coefficient arrays (constant first),
// rational functions {"num", "den":[{"root","mult"}]}, matrices as row arrays.

#include "wpl/bridge.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace wpl::io {

using Json = nlohmann::ordered_json;

/// Malformed or ill-shaped input.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline const Json& array_field(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) throw ParseError(std::string("field \"") + key + "\" must be an array");
  return a;
}

inline std::size_t to_size(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace detail

// ---- scalars ----

inline Json to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("expected a rational as \"p/q\", got " + j.dump());
}

inline Json to_json(const GaussRat& g) { return Json{{"re", to_string(g.re())}, {"im", to_string(g.im())}}; }

/// Accepts {"re","im"} and, for real values, a bare "p/q" string or integer.
inline GaussRat gauss_from_json(const Json& j) {
  if (j.is_object()) {
    const Rational re = j.contains("re") ? rational_from_json(j.at("re")) : Rational(0);
    const Rational im = j.contains("im") ? rational_from_json(j.at("im")) : Rational(0);
    return {re, im};
  }
  return {rational_from_json(j)};
}

inline Json to_json(const Poly& p) {
  Json a = Json::array();
  for (int k = 0; k <= p.degree(); ++k) a.push_back(to_json(p.coeff(static_cast<std::size_t>(k))));
  return a;
}

inline Poly poly_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("polynomial must be a coefficient array");
  std::vector<GaussRat> c;
  for (const auto& x : j) c.push_back(gauss_from_json(x));
  return Poly(std::move(c));
}

inline Json to_json(const RatFun& f) {
  Json den = Json::array();
  for (const auto& [r, m] : f.den()) den.push_back(Json{{"root", to_json(r)}, {"mult", m}});
  return Json{{"num", to_json(f.num())}, {"den", den}};
}

/// Accepts {"num","den"} or a bare scalar for a constant.
inline RatFun ratfun_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num")) return RatFun(gauss_from_json(j));
  RatFun::Denominator den;
  if (j.contains("den")) {
    if (!j.at("den").is_array()) throw ParseError("\"den\" must be an array");
    for (const auto& f : j.at("den")) {
      const long m = static_cast<long>(detail::to_size(detail::field(f, "mult"), "mult"));
      if (m > 0) den[gauss_from_json(detail::field(f, "root"))] += static_cast<int>(m);
    }
  }
  return RatFun(poly_from_json(j.at("num")), std::move(den));
}

// ---- matrices ----

template <typename T, typename F>
Json matrix_to_json(const Matrix<T>& m, F&& enc) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(enc(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

template <typename T, typename F>
Matrix<T> matrix_from_json(const Json& j, F&& dec) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : 0;
  Matrix<T> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j.at(r).is_array() || j.at(r).size() != cols) throw ParseError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = dec(j.at(r).at(c));
  }
  return m;
}

inline Json to_json(const GMat& m) { return matrix_to_json(m, [](const GaussRat& x) { return to_json(x); }); }
inline Json to_json(const RatMat& m) { return matrix_to_json(m, [](const RatFun& x) { return to_json(x); }); }
inline GMat gmat_from_json(const Json& j) { return matrix_from_json<GaussRat>(j, gauss_from_json); }
inline RatMat ratmat_from_json(const Json& j) { return matrix_from_json<RatFun>(j, ratfun_from_json); }

inline Json points_to_json(const std::vector<GaussRat>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

inline std::vector<GaussRat> points_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("points must be an array");
  std::vector<GaussRat> p;
  for (const auto& x : j) p.push_back(gauss_from_json(x));
  return p;
}

// ---- sheaves ----

inline Json to_json(const WeightData& W) {
  Json a = Json::array();
  for (std::size_t i = 0; i < W.size(); ++i) a.push_back(Json{{"point", to_json(W.point(i))}, {"w", W.weight(i)}});
  return a;
}

inline WeightData weights_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("weights must be an array of {point, w}");
  std::vector<GaussRat> pts;
  std::vector<int> ws;
  for (const auto& e : j) {
    pts.push_back(gauss_from_json(detail::field(e, "point")));
    ws.push_back(static_cast<int>(detail::to_size(detail::field(e, "w"), "w")));
  }
  try {
    return {pts, ws};
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline Json to_json(const PatchedSheaf& S) {
  Json cycles = Json::array(), patching = Json::array();
  for (const auto& c : S.cycles) {
    Json mats = Json::array();
    for (const auto& m : c.mats) mats.push_back(to_json(m));
    cycles.push_back(Json{{"chart", c.chart}, {"mats", mats}});
  }
  for (std::size_t i = 0; i < S.weights.size(); ++i)
    for (std::size_t j = 0; j < S.weights.size(); ++j)
      if (i != j) patching.push_back(Json{{"i", i}, {"j", j}, {"mat", to_json(S.g(i, j))}});
  return Json{{"weights", to_json(S.weights)}, {"rank", S.rank}, {"cycles", cycles}, {"patching", patching}};
}

/// Patching entries that are absent default to the identity.
inline PatchedSheaf sheaf_from_json(const Json& j) {
  PatchedSheaf S;
  S.weights = weights_from_json(detail::field(j, "weights"));
  S.rank = detail::to_size(detail::field(j, "rank"), "rank");
  const std::size_t k = S.weights.size();
  for (const auto& c : detail::array_field(j, "cycles")) {
    Cycle cy{detail::to_size(detail::field(c, "chart"), "chart"), S.rank, {}};
    for (const auto& m : detail::array_field(c, "mats")) cy.mats.push_back(ratmat_from_json(m));
    S.cycles.push_back(std::move(cy));
  }
  if (S.cycles.size() != k) throw ParseError("one cycle per marked point required");
  S.patching.assign(k, std::vector<RatMat>(k, RatMat::identity(S.rank)));
  if (j.contains("patching")) {
    for (const auto& p : detail::array_field(j, "patching")) {
      const std::size_t a = detail::to_size(detail::field(p, "i"), "i"), b = detail::to_size(detail::field(p, "j"), "j");
      if (a >= k || b >= k) throw ParseError("patching index out of range");
      S.patching[a][b] = ratmat_from_json(detail::field(p, "mat"));
    }
  }
  return S;
}

inline Json to_json(const Flag& f) {
  Json a = Json::array();
  for (const auto& l : f.subspaces) a.push_back(to_json(l));
  return a;
}

/// A flag is its list of layer bases, either all layers V_0..V_w or only the interior ones
/// (then `length` says how many layers the full flag has, minus one).
inline Flag flag_from_json(const Json& j, std::size_t n, int length) {
  if (!j.is_array()) throw ParseError("flag must be an array of basis matrices");
  std::vector<GMat> layers;
  for (const auto& m : j) {
    GMat b = gmat_from_json(m);
    if (b.rows() == 0) b = GMat(n, 0);
    if (b.rows() != n) throw ParseError("flag layer has wrong ambient dimension");
    layers.push_back(std::move(b));
  }
  if (static_cast<int>(layers.size()) == length - 1) return Flag::from_interior(n, layers);
  if (static_cast<int>(layers.size()) == length + 1) return Flag(n, std::move(layers));
  throw ParseError("flag has " + std::to_string(layers.size()) + " layers, expected " + std::to_string(length + 1) +
                   " (or the " + std::to_string(length - 1) + " interior ones)");
}

inline Json flags_to_json(const std::vector<Flag>& flags) {
  Json a = Json::array();
  for (const auto& f : flags) a.push_back(to_json(f));
  return a;
}

// ---- connections ----

inline Json to_json(const ZetaData& z) {
  Json rows = Json::array();
  for (const auto& r : z.zeta) {
    Json row = Json::array();
    for (const auto& v : r) row.push_back(to_json(v));
    rows.push_back(row);
  }
  return Json{{"points", points_to_json(z.points)}, {"zeta", rows}};
}

inline ZetaData zeta_from_json(const Json& j) {
  ZetaData z{points_from_json(detail::field(j, "points")), {}};
  for (const auto& row : detail::array_field(j, "zeta")) {
    if (!row.is_array() || row.empty()) throw ParseError("each zeta row must be a non-empty array");
    z.zeta.emplace_back();
    for (const auto& v : row) z.zeta.back().push_back(gauss_from_json(v));
  }
  if (z.zeta.size() != z.points.size()) throw ParseError("one zeta row per point required");
  return z;
}

inline Json to_json(const FuchsianConnection& F) {
  Json res = Json::array();
  for (const auto& a : F.residues) res.push_back(to_json(a));
  return Json{{"points", points_to_json(F.points)}, {"residues", res}};
}

inline FuchsianConnection connection_from_json(const Json& j) {
  FuchsianConnection F{points_from_json(detail::field(j, "points")), {}};
  for (const auto& a : detail::array_field(j, "residues")) F.residues.push_back(gmat_from_json(a));
  try {
    F.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return F;
}

inline Json to_json(const ConnectionSection& s) {
  Json charts = Json::array();
  for (std::size_t i = 0; i < s.charts.size(); ++i) {
    Json N = Json::array();
    for (const auto& m : s.charts[i]) N.push_back(to_json(m));
    charts.push_back(Json{{"i", i}, {"N", N}});
  }
  return Json{{"charts", charts}};
}

inline ConnectionSection section_from_json(const Json& j) {
  const Json& charts = detail::array_field(j, "charts");
  ConnectionSection s;
  s.charts.resize(charts.size());
  for (const auto& c : charts) {
    const std::size_t i = detail::to_size(detail::field(c, "i"), "i");
    if (i >= charts.size()) throw ParseError("chart index out of range");
    for (const auto& m : detail::array_field(c, "N")) s.charts[i].push_back(ratmat_from_json(m));
  }
  return s;
}

// ---- quivers ----

inline Json to_json(const Quiver& Q) {
  Json arrows = Json::array();
  for (const auto& a : Q.arrows) arrows.push_back(Json{{"t", Q.vertices[a.tail]}, {"h", Q.vertices[a.head]}, {"name", a.name}});
  return Json{{"vertices", Q.vertices}, {"arrows", arrows}};
}

inline Quiver quiver_from_json(const Json& j) {
  Quiver Q;
  for (const auto& v : detail::array_field(j, "vertices")) {
    if (!v.is_string()) throw ParseError("vertex labels must be strings");
    Q.vertices.push_back(v.get<std::string>());
  }
  auto vertex = [&Q](const Json& v) -> std::size_t {
    if (v.is_number_integer()) return detail::to_size(v, "vertex index");
    if (!v.is_string()) throw ParseError("arrow endpoint must be a vertex label");
    try {
      return Q.index_of(v.get<std::string>());
    } catch (const std::out_of_range& e) {
      throw ParseError(e.what());
    }
  };
  for (const auto& a : detail::array_field(j, "arrows")) {
    const Json& name = detail::field(a, "name");
    if (!name.is_string()) throw ParseError("arrow name must be a string");
    Q.arrows.push_back({vertex(detail::field(a, "t")), vertex(detail::field(a, "h")), name.get<std::string>()});
  }
  try {
    Q.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return Q;
}

/// Real values print as bare "p/q" strings, complex ones as {"re","im"}.
inline Json scalar_to_json(const GaussRat& g) { return g.is_real() ? Json(to_string(g.re())) : to_json(g); }

inline Json lambda_json(const Quiver& Q, const LambdaVec& l) {
  Json o = Json::object();
  for (std::size_t v = 0; v < Q.vertices.size(); ++v) o[Q.vertices[v]] = scalar_to_json(l.at(v));
  return o;
}

inline LambdaVec lambda_from_json(const Quiver& Q, const Json& j) {
  if (!j.is_object()) throw ParseError("lambda must be an object keyed by vertex");
  LambdaVec l(Q.vertices.size());
  for (std::size_t v = 0; v < Q.vertices.size(); ++v) l[v] = gauss_from_json(detail::field(j, Q.vertices[v].c_str()));
  return l;
}

inline Json dims_to_json(const Quiver& Q, const DimVector& d) {
  Json o = Json::object();
  for (std::size_t v = 0; v < Q.vertices.size(); ++v) o[Q.vertices[v]] = d.at(v);
  return o;
}

inline DimVector dims_from_json(const Quiver& Q, const Json& j) {
  DimVector d(Q.vertices.size());
  if (j.is_array()) {
    if (j.size() != d.size()) throw ParseError("one dimension per vertex required");
    for (std::size_t v = 0; v < d.size(); ++v) d[v] = detail::to_size(j.at(v), "dimension");
    return d;
  }
  for (std::size_t v = 0; v < d.size(); ++v) d[v] = detail::to_size(detail::field(j, Q.vertices[v].c_str()), "dimension");
  return d;
}

inline Json to_json(const Quiver& Q, const DoubledRep& rep) {
  Json X = Json::object(), Xs = Json::object();
  for (std::size_t a = 0; a < Q.arrows.size(); ++a) {
    X[Q.arrows[a].name] = to_json(rep.X[a]);
    Xs[Q.arrows[a].name] = to_json(rep.Xstar[a]);
  }
  return Json{{"dims", dims_to_json(Q, rep.dims)}, {"X", X}, {"Xstar", Xs}};
}

/// Matrices with a zero dimension cannot carry their shape in JSON; they are rebuilt from dims.
inline DoubledRep rep_from_json(const Quiver& Q, const Json& j) {
  DoubledRep rep{dims_from_json(Q, detail::field(j, "dims")), {}, {}};
  const Json& X = detail::field(j, "X");
  const Json& Xs = detail::field(j, "Xstar");
  for (const auto& a : Q.arrows) {
    const std::size_t dt = rep.dims[a.tail], dh = rep.dims[a.head];
    GMat x = gmat_from_json(detail::field(X, a.name.c_str())), y = gmat_from_json(detail::field(Xs, a.name.c_str()));
    if (dt == 0 || dh == 0) x = GMat(dh, dt), y = GMat(dt, dh);
    rep.X.push_back(std::move(x));
    rep.Xstar.push_back(std::move(y));
  }
  try {
    rep.validate(Q);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return rep;
}

// ---- Fuchsian tuples ----

inline Json to_json(const FuchsianTuple& T) {
  Json res = Json::array(), ws = Json::array(), zeta = to_json(T.zeta).at("zeta");
  for (const auto& a : T.residues) res.push_back(to_json(a));
  for (auto w : T.weights.weights) ws.push_back(w);
  return Json{{"points", points_to_json(T.weights.points)},
              {"weights", ws},
              {"residues", res},
              {"flags", flags_to_json(T.flags)},
              {"zeta", zeta}};
}

inline FuchsianTuple tuple_from_json(const Json& j) {
  FuchsianTuple T;
  const auto pts = points_from_json(detail::field(j, "points"));
  std::vector<int> ws;
  for (const auto& w : detail::array_field(j, "weights")) ws.push_back(static_cast<int>(detail::to_size(w, "weight")));
  try {
    T.weights = WeightData(pts, ws);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  T.zeta = zeta_from_json(Json{{"points", detail::field(j, "points")}, {"zeta", detail::field(j, "zeta")}});
  for (const auto& a : detail::array_field(j, "residues")) T.residues.push_back(gmat_from_json(a));
  if (T.residues.size() != pts.size() || T.residues.empty()) throw ParseError("one residue per point required");
  T.rank = T.residues.front().rows();
  const Json& flags = detail::array_field(j, "flags");
  if (flags.size() != pts.size()) throw ParseError("one flag per point required");
  for (std::size_t i = 0; i < pts.size(); ++i) T.flags.push_back(flag_from_json(flags.at(i), T.rank, ws[i]));
  try {
    T.zeta.check_shape(T.weights);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return T;
}

/// {"ok": true} or {"ok": false, "failures": [...]}.
inline Json to_json(const Report& r) {
  if (r.ok()) return Json{{"ok", true}};
  return Json{{"ok", false}, {"failures", r.failures}};
}

}  // namespace wpl::io
