#pragma once

// JSON and CSV serialization for every object the command-line tool reads or
// writes.  All rational scalars travel as "p/q" strings so round-trips are
// exact; key order is fixed by construction, so equal inputs produce
// byte-identical output.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tropica/congruence.hpp"
#include "tropica/curve.hpp"
#include "tropica/embed.hpp"
#include "tropica/errors.hpp"
#include "tropica/poly.hpp"
#include "tropica/ratfn.hpp"
#include "tropica/rational.hpp"
#include "tropica/variety.hpp"

namespace tropica::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars

inline Json rat_json(const Rat& r) { return rat_string(r); }

inline Rat rat_from_json(const Json& j) {
  if (!j.is_string()) throw Error("expected a rational \"p/q\" string");
  return parse_rational(j.get<std::string>());
}

inline Json ext_json(const ExtRational& v) {
  return v.is_bottom() ? Json("-inf") : Json(rat_string(v.value()));
}

inline long long int_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw Error(std::string("expected an integer ") + what);
  return j.get<long long>();
}

// ---------------------------------------------------------------------------
// Polynomials and rational functions

inline Json poly_json(const TropPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms) {
    Json t;
    t["exp"] = e;
    t["coef"] = rat_json(c);
    terms.push_back(std::move(t));
  }
  Json out;
  out["n"] = p.n_vars;
  out["terms"] = std::move(terms);
  return out;
}

inline TropPoly poly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("terms"))
    throw Error("polynomial JSON needs \"n\" and \"terms\"");
  int n = static_cast<int>(int_from_json(j["n"], "variable count"));
  std::vector<std::pair<Exps, Rat>> terms;
  if (!j["terms"].is_array()) throw Error("\"terms\" must be an array");
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("exp") || !t.contains("coef"))
      throw Error("each term needs \"exp\" and \"coef\"");
    Exps e;
    for (const auto& k : t["exp"]) e.push_back(int_from_json(k, "exponent"));
    terms.emplace_back(std::move(e), rat_from_json(t["coef"]));
  }
  return make_poly(n, terms);  // re-validates arities
}

inline Json ratfn_json(const RatFn& r) {
  Json out;
  out["num"] = poly_json(r.num);
  out["den"] = poly_json(r.den);
  return out;
}

inline RatFn ratfn_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw Error("rational function JSON needs \"num\" and \"den\"");
  return r_make(poly_from_json(j["num"]), poly_from_json(j["den"]));
}

inline Json presentation_json(const CongruencePresentation& E) {
  Json gens = Json::array();
  for (const auto& [l, r] : E.gens) {
    Json g;
    g["lhs"] = ratfn_json(l);
    g["rhs"] = ratfn_json(r);
    gens.push_back(std::move(g));
  }
  Json out;
  out["n"] = E.n_vars;
  out["gens"] = std::move(gens);
  return out;
}

inline CongruencePresentation presentation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("gens"))
    throw Error("presentation JSON needs \"n\" and \"gens\"");
  int n = static_cast<int>(int_from_json(j["n"], "variable count"));
  std::vector<GenPair> gens;
  if (!j["gens"].is_array()) throw Error("\"gens\" must be an array");
  for (const auto& g : j["gens"]) {
    if (!g.is_object() || !g.contains("lhs") || !g.contains("rhs"))
      throw Error("each generator needs \"lhs\" and \"rhs\"");
    gens.emplace_back(ratfn_from_json(g["lhs"]), ratfn_from_json(g["rhs"]));
  }
  return presentation(n, std::move(gens));
}

inline Json complex_json(const PolyComplex& pc) {
  auto rows = [](const std::vector<AffineRow>& rs) {
    Json out = Json::array();
    for (const auto& r : rs) {
      Json row = Json::array();
      for (const auto& v : r) row.push_back(rat_json(v));
      out.push_back(std::move(row));
    }
    return out;
  };
  Json cells = Json::array();
  for (const auto& c : pc.cells) {
    Json cell;
    cell["eq"] = rows(c.eq);
    cell["ge"] = rows(c.ge);
    cells.push_back(std::move(cell));
  }
  Json out;
  out["n"] = pc.n_vars;
  out["cells"] = std::move(cells);
  return out;
}

// ---------------------------------------------------------------------------
// Curves and piecewise-linear functions

inline Json curve_json(const MetricGraph& g) {
  Json vs = Json::array();
  for (int v = 0; v < g.n_vertices(); ++v) {
    Json jv;
    jv["id"] = v;
    jv["infinite"] = static_cast<bool>(g.at_infinity[v]);
    vs.push_back(std::move(jv));
  }
  Json es = Json::array();
  for (const auto& e : g.edges) {
    Json je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["len"] = e.len.infinite ? Json("inf") : Json(rat_string(e.len.value));
    es.push_back(std::move(je));
  }
  Json out;
  out["vertices"] = std::move(vs);
  out["edges"] = std::move(es);
  return out;
}

inline MetricGraph curve_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw Error("curve JSON needs \"vertices\" and \"edges\"");
  if (!j["vertices"].is_array() || !j["edges"].is_array())
    throw Error("\"vertices\" and \"edges\" must be arrays");
  std::vector<bool> inf_v;
  int next = 0;
  for (const auto& v : j["vertices"]) {
    if (!v.is_object() || !v.contains("id"))
      throw Error("each vertex needs an \"id\"");
    if (int_from_json(v["id"], "vertex id") != next)
      throw Error("vertex ids must be 0,1,2,... in order");
    ++next;
    inf_v.push_back(v.contains("infinite") && v["infinite"].is_boolean() &&
                    v["infinite"].get<bool>());
  }
  std::vector<GraphEdge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_object() || !e.contains("u") || !e.contains("v") || !e.contains("len"))
      throw Error("each edge needs \"u\", \"v\", \"len\"");
    GraphEdge ge;
    ge.u = static_cast<int>(int_from_json(e["u"], "edge endpoint"));
    ge.v = static_cast<int>(int_from_json(e["v"], "edge endpoint"));
    if (e["len"].is_string() && e["len"].get<std::string>() == "inf")
      ge.len = Length::inf();
    else
      ge.len = Length::fin(rat_from_json(e["len"]));
    edges.push_back(std::move(ge));
  }
  return make_graph(inf_v, edges);  // full structural validation
}

inline Json pl_json(const PLFunction& f) {
  Json out;
  out["bottom"] = f.bottom;
  Json es = Json::array();
  if (!f.bottom) {
    for (const auto& pe : f.edges) {
      Json je;
      Json pts = Json::array();
      for (const auto& p : pe.pts) {
        Json jp;
        jp["offset"] = rat_json(p.offset);
        jp["value"] = rat_json(p.value);
        pts.push_back(std::move(jp));
      }
      je["pts"] = std::move(pts);
      je["tail"] = pe.tail_slope;
      es.push_back(std::move(je));
    }
  }
  out["edges"] = std::move(es);
  return out;
}

inline PLFunction pl_from_json(const MetricGraph& g, const Json& j) {
  if (!j.is_object() || !j.contains("edges"))
    throw Error("function JSON needs \"edges\"");
  if (j.contains("bottom") && j["bottom"].is_boolean() && j["bottom"].get<bool>())
    return pl_bottom();
  PLFunction f;
  if (!j["edges"].is_array()) throw Error("\"edges\" must be an array");
  for (const auto& je : j["edges"]) {
    if (!je.is_object() || !je.contains("pts"))
      throw Error("each function edge needs \"pts\"");
    PLEdge pe;
    for (const auto& jp : je["pts"]) {
      if (!jp.is_object() || !jp.contains("offset") || !jp.contains("value"))
        throw Error("each breakpoint needs \"offset\" and \"value\"");
      pe.pts.push_back({rat_from_json(jp["offset"]), rat_from_json(jp["value"])});
    }
    if (je.contains("tail"))
      pe.tail_slope = int_from_json(je["tail"], "tail slope");
    f.edges.push_back(std::move(pe));
  }
  validate_pl(f, g);
  return f;
}

inline Json subgraph_json(const Subgraph& s) {
  Json iv = Json::array();
  for (const auto& i : s) {
    Json ji;
    ji["edge"] = i.edge;
    ji["lo"] = rat_json(i.lo);
    ji["hi"] = i.to_inf ? Json("inf") : Json(rat_string(i.hi));
    iv.push_back(std::move(ji));
  }
  Json out;
  out["intervals"] = std::move(iv);
  return out;
}

inline Subgraph subgraph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("intervals") || !j["intervals"].is_array())
    throw Error("subgraph JSON needs an \"intervals\" array");
  Subgraph s;
  for (const auto& ji : j["intervals"]) {
    if (!ji.is_object() || !ji.contains("edge") || !ji.contains("lo") || !ji.contains("hi"))
      throw Error("each interval needs \"edge\", \"lo\", \"hi\"");
    EdgeInterval iv;
    iv.edge = static_cast<int>(int_from_json(ji["edge"], "edge index"));
    iv.lo = rat_from_json(ji["lo"]);
    if (ji["hi"].is_string() && ji["hi"].get<std::string>() == "inf") {
      iv.to_inf = true;
      iv.hi = iv.lo;
    } else {
      iv.hi = rat_from_json(ji["hi"]);
    }
    s.push_back(std::move(iv));
  }
  return s;
}

inline Json point_json(const MetricGraph& g, const CurvePoint& p) {
  CurvePoint n = normalize_point(g, p);
  Json out;
  out["edge"] = n.edge;
  out["offset"] = n.inf_end ? Json("inf") : Json(rat_string(n.offset));
  out["text"] = point_text(g, n);
  return out;
}

inline Json divisor_json(const MetricGraph& g, const Divisor& d) {
  Json out = Json::array();
  for (const auto& [p, k] : d) {
    Json jp;
    jp["point"] = point_json(g, p);
    jp["order"] = k;
    out.push_back(std::move(jp));
  }
  return out;
}

inline Json model_json(const MetricGraph& g, const CanonicalModel& m) {
  Json vs = Json::array();
  for (const auto& v : m.vertices) vs.push_back(point_json(g, v));
  Json es = Json::array();
  for (const auto& e : m.edges) {
    Json je;
    je["a"] = point_json(g, e.a);
    je["b"] = point_json(g, e.b);
    je["len"] = e.len.str();
    es.push_back(std::move(je));
  }
  Json out;
  out["vertices"] = std::move(vs);
  out["edges"] = std::move(es);
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings

inline Json tuple_json(const GeneratorTuple& t) {
  Json fns = Json::array();
  for (const auto& f : t.fns) fns.push_back(pl_json(f));
  Json out;
  out["curve"] = curve_json(t.curve);
  out["fns"] = std::move(fns);
  return out;
}

inline GeneratorTuple tuple_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("curve") || !j.contains("fns"))
    throw Error("tuple JSON needs \"curve\" and \"fns\"");
  MetricGraph g = curve_from_json(j["curve"]);
  std::vector<PLFunction> fns;
  if (!j["fns"].is_array()) throw Error("\"fns\" must be an array");
  for (const auto& jf : j["fns"]) fns.push_back(pl_from_json(g, jf));
  return make_tuple(std::move(g), std::move(fns));
}

inline Json rat_vec_json(const std::vector<Rat>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rat_json(x));
  return out;
}

inline Json segment_json(const ImagePiece& p) {
  Json out;
  out["edge"] = p.edge;
  out["lo"] = rat_json(p.lo);
  out["hi"] = rat_json(p.hi);
  out["ray"] = p.ray;
  out["start"] = rat_vec_json(p.start);
  out["end"] = rat_vec_json(p.end);
  out["slope"] = p.slope;
  return out;
}

inline Json report_json(const GeneratorTuple& t, const EmbeddingReport& r) {
  Json segs = Json::array();
  for (const auto& p : r.segments) segs.push_back(segment_json(p));
  Json gcds = Json::array();
  for (const auto& c : r.isometry.gcds) gcds.push_back(c);
  Json out;
  out["segments"] = std::move(segs);
  out["gcds"] = std::move(gcds);
  out["isometry_ok"] = r.isometry.all_ok;
  out["injective"] = r.injectivity.injective;
  if (r.injectivity.witness) {
    Json w = Json::array();
    w.push_back(point_json(t.curve, r.injectivity.witness->first));
    w.push_back(point_json(t.curve, r.injectivity.witness->second));
    out["witness"] = std::move(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_points(const std::vector<std::vector<Rat>>& pts) {
  std::string out;
  if (pts.empty()) return out;
  for (std::size_t i = 0; i < pts[0].size(); ++i) {
    if (i) out += ',';
    out += "x" + std::to_string(i + 1);
  }
  out += '\n';
  for (const auto& p : pts) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out += ',';
      out += rat_string(p[i]);
    }
    out += '\n';
  }
  return out;
}

inline std::string csv_segments(const std::vector<ImagePiece>& segs) {
  std::string out = "edge,lo,hi,ray";
  std::size_t dim = segs.empty() ? 0 : segs[0].start.size();
  for (std::size_t i = 1; i <= dim; ++i) out += ",start" + std::to_string(i);
  for (std::size_t i = 1; i <= dim; ++i) out += ",end" + std::to_string(i);
  for (std::size_t i = 1; i <= dim; ++i) out += ",slope" + std::to_string(i);
  out += '\n';
  for (const auto& s : segs) {
    out += std::to_string(s.edge) + ',' + rat_string(s.lo) + ',' +
           rat_string(s.hi) + ',' + (s.ray ? "1" : "0");
    for (const auto& v : s.start) out += ',' + rat_string(v);
    for (const auto& v : s.end) out += ',' + rat_string(v);
    for (long long v : s.slope) out += ',' + std::to_string(v);
    out += '\n';
  }
  return out;
}

// Parse with failures reported as Error, so callers can map them to the
// input-error exit code uniformly.
inline Json parse_json(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("malformed JSON");
  return j;
}

}  // namespace tropica::io
