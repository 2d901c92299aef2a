#pragma once

// Command-line surface. Thin: every subcommand parses its inputs, calls one
// library entry point and serializes the result. Exit codes: 0 on success,
// 1 when a checked property fails to hold, 2 on malformed input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tropica/congruence.hpp"
#include "tropica/curve.hpp"
#include "tropica/embed.hpp"
#include "tropica/errors.hpp"
#include "tropica/expr.hpp"
#include "tropica/io.hpp"
#include "tropica/poly.hpp"
#include "tropica/ratfn.hpp"
#include "tropica/rational.hpp"
#include "tropica/variety.hpp"
#include "tropica/verify.hpp"

namespace tropica::cli {

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline io::Json load_json(const std::string& path) {
  std::string text = slurp(path);  // slurp names the file itself
  try {
    return io::parse_json(text);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline long long parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw Error("");
    return v;
  } catch (const std::exception&) {
    throw Error(std::string("expected an integer ") + what + ": " + s);
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// --box lo:hi[,lo:hi...]; a single range is reused for every coordinate.
inline std::vector<std::pair<Rat, Rat>> parse_box(const std::string& text,
                                                 int n_vars) {
  if (text.empty()) throw Error("--box is required here");
  std::vector<std::pair<Rat, Rat>> box;
  for (const std::string& part : split(text, ',')) {
    auto ends = split(part, ':');
    if (ends.size() != 2)
      throw Error("box range must look like lo:hi, got: " + part);
    box.emplace_back(parse_rational(ends[0]), parse_rational(ends[1]));
  }
  if (box.size() == 1 && n_vars > 1)
    box.assign(static_cast<std::size_t>(n_vars), box[0]);
  return box;
}

inline std::vector<Rat> parse_tuple(const std::string& text) {
  std::vector<Rat> out;
  for (const std::string& part : split(text, ','))
    out.push_back(parse_rational(part));
  return out;
}

// Points as printed by point_text: "v<k>" or "<edge>:<offset>" (a leading
// "e" on the edge index is accepted); offset "inf" is the far end of an
// unbounded edge.
inline CurvePoint parse_point(const MetricGraph& g, const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) {
    if (s.size() < 2 || s[0] != 'v')
      throw Error("point must be v<k> or <edge>:<offset>, got: " + s);
    long long v = parse_int(s.substr(1), "vertex id");
    if (v < 0 || v >= g.n_vertices())
      throw Error("vertex out of range: " + s);
    return vertex_point(g, static_cast<int>(v));
  }
  std::string e_part = s.substr(0, colon);
  if (!e_part.empty() && e_part[0] == 'e') e_part = e_part.substr(1);
  int e = static_cast<int>(parse_int(e_part, "edge index"));
  std::string off = s.substr(colon + 1);
  CurvePoint p = off == "inf" ? cp_inf(e) : cp(e, parse_rational(off));
  check_point(g, p);
  return p;
}

inline RatFn parse_fn(const std::string& text, int n_vars) {
  return lower_to_ratfn(parse(text, n_vars));
}

inline void emit_json(const io::Json& j) { std::cout << j.dump(2) << "\n"; }

inline std::string pl_line(const PLEdge& e, bool infinite) {
  std::string s;
  for (const auto& p : e.pts) {
    if (!s.empty()) s += ' ';
    s += "(" + rat_string(p.offset) + ", " + rat_string(p.value) + ")";
  }
  if (infinite) s += " tail " + std::to_string(e.tail_slope);
  return s;
}

inline void emit_pl(const MetricGraph& g, const PLFunction& f, bool json) {
  if (json) {
    emit_json(io::pl_json(f));
    return;
  }
  if (f.bottom) {
    std::cout << "-inf\n";
    return;
  }
  for (int e = 0; e < g.n_edges(); ++e)
    std::cout << "edge " << e << ": "
              << pl_line(f.edges[e], g.edges[e].len.infinite) << "\n";
}

}  // namespace detail

struct Options {
  int n_vars = 1;
  bool json = false;
  std::uint64_t seed = 0;
  std::string box, step = "1";
};

// Registers the shared flags on one subcommand; all of them write into the
// same Options so nesting depth does not matter.
inline void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("-n", opt.n_vars, "number of variables");
  cmd->add_flag("--json", opt.json, "machine-readable output");
  cmd->add_option("--seed", opt.seed, "seed for randomized suites");
  cmd->add_option("--box", opt.box, "sampling box lo:hi[,lo:hi...]");
  cmd->add_option("--step", opt.step, "grid step p/q");
}

inline int cmd_poly_canon(const Options& opt, const std::string& expr_text) {
  RatFn r = detail::parse_fn(expr_text, opt.n_vars);
  RatFn c = r_make(canonicalize(r.num), canonicalize(r.den));
  if (opt.json)
    detail::emit_json(io::ratfn_json(c));
  else
    std::cout << ratfn_text(c) << "\n";
  return 0;
}

inline int cmd_eq(const Options& opt, const std::string& lhs_text,
                  const std::string& rhs_text) {
  RatFn lhs = detail::parse_fn(lhs_text, opt.n_vars);
  RatFn rhs = detail::parse_fn(rhs_text, opt.n_vars);
  EqualityVerdict v = r_equal(lhs, rhs);
  if (opt.json) {
    io::Json j;
    j["equal"] = v.equal();
    if (v.witness) {
      j["witness"] = io::rat_vec_json(*v.witness);
      j["lhs"] = io::ext_json(r_eval(lhs, *v.witness));
      j["rhs"] = io::ext_json(r_eval(rhs, *v.witness));
    }
    detail::emit_json(j);
  } else if (v.equal()) {
    std::cout << "Equal\n";
  } else {
    std::cout << "Distinct at " << point_string(*v.witness) << ": "
              << r_eval(lhs, *v.witness).str() << " vs "
              << r_eval(rhs, *v.witness).str() << "\n";
  }
  return v.equal() ? 0 : 1;
}

inline int cmd_eval(const Options& opt, const std::string& expr_text,
                    const std::string& point_text) {
  RatFn f = detail::parse_fn(expr_text, opt.n_vars);
  std::vector<Rat> x = detail::parse_tuple(point_text);
  ExtRational v = r_eval(f, x);
  if (opt.json) {
    io::Json j;
    j["value"] = io::ext_json(v);
    detail::emit_json(j);
  } else {
    std::cout << v.str() << "\n";
  }
  return 0;
}

inline int cmd_variety_sample(const Options& opt, const std::string& path) {
  CongruencePresentation E =
      io::presentation_from_json(detail::load_json(path));
  auto box = detail::parse_box(opt.box, E.n_vars);
  auto pts = sample(E, box, parse_rational(opt.step));
  if (opt.json) {
    io::Json j;
    j["n"] = E.n_vars;
    j["count"] = pts.size();
    io::Json arr = io::Json::array();
    for (const auto& p : pts) arr.push_back(io::rat_vec_json(p));
    j["points"] = std::move(arr);
    detail::emit_json(j);
  } else {
    std::cout << io::csv_points(pts);
  }
  return 0;
}

inline int cmd_variety_cells(const Options& opt, const std::string& path) {
  CongruencePresentation E =
      io::presentation_from_json(detail::load_json(path));
  PolyComplex pc = variety_cells(E);
  if (opt.json) {
    detail::emit_json(io::complex_json(pc));
  } else {
    std::cout << "cells: " << pc.cells.size() << "\n";
    for (std::size_t i = 0; i < pc.cells.size(); ++i)
      std::cout << "cell " << i << ": " << pc.cells[i].eq.size() << " eq, "
                << pc.cells[i].ge.size() << " ge\n";
  }
  return 0;
}

inline int cmd_variety_empty(const Options& opt, const std::string& path) {
  CongruencePresentation E =
      io::presentation_from_json(detail::load_json(path));
  bool empty = is_empty(E);
  if (opt.json) {
    io::Json j;
    j["empty"] = empty;
    detail::emit_json(j);
  } else {
    std::cout << (empty ? "empty" : "nonempty") << "\n";
  }
  return 0;
}

inline int cmd_curve_eval(const Options& opt, const std::string& curve_path,
                          const std::string& fn_path,
                          const std::string& point_str) {
  MetricGraph g = io::curve_from_json(detail::load_json(curve_path));
  PLFunction f = io::pl_from_json(g, detail::load_json(fn_path));
  CurvePoint p = detail::parse_point(g, point_str);
  ExtValue v = pl_eval(f, g, p);
  if (opt.json) {
    io::Json j;
    j["point"] = io::point_json(g, p);
    j["value"] = v.str();
    detail::emit_json(j);
  } else {
    std::cout << v.str() << "\n";
  }
  return 0;
}

inline int cmd_curve_binop(const Options& opt, const std::string& curve_path,
                           const std::string& f_path, const std::string& g_path,
                           bool is_max) {
  MetricGraph g = io::curve_from_json(detail::load_json(curve_path));
  PLFunction a = io::pl_from_json(g, detail::load_json(f_path));
  PLFunction b = io::pl_from_json(g, detail::load_json(g_path));
  PLFunction r = is_max ? pl_max(a, b, g) : pl_add(a, b, g);
  detail::emit_pl(g, pl_simplify(std::move(r), g), opt.json);
  return 0;
}

inline int cmd_curve_chipfire(const Options& opt, const std::string& curve_path,
                              const std::string& sub_path,
                              const std::string& level) {
  MetricGraph g = io::curve_from_json(detail::load_json(curve_path));
  Subgraph s = io::subgraph_from_json(detail::load_json(sub_path));
  std::optional<Rat> l;
  if (level != "inf") l = parse_rational(level);
  detail::emit_pl(g, chip_fire(g, s, l), opt.json);
  return 0;
}

inline int cmd_curve_divisor(const Options& opt, const std::string& curve_path,
                             const std::string& fn_path) {
  MetricGraph g = io::curve_from_json(detail::load_json(curve_path));
  PLFunction f = io::pl_from_json(g, detail::load_json(fn_path));
  Divisor d = divisor(f, g);
  if (opt.json) {
    io::Json j;
    j["points"] = io::divisor_json(g, d);
    j["degree"] = divisor_degree(d);
    detail::emit_json(j);
  } else {
    for (const auto& [p, k] : d)
      std::cout << point_text(g, p) << " " << k << "\n";
    std::cout << "degree " << divisor_degree(d) << "\n";
  }
  return 0;
}

inline int cmd_curve_model(const Options& opt, const std::string& curve_path) {
  MetricGraph g = io::curve_from_json(detail::load_json(curve_path));
  CanonicalModel m = canonical_model(g);
  if (opt.json) {
    detail::emit_json(io::model_json(g, m));
  } else {
    std::cout << "vertices:";
    for (const auto& v : m.vertices) std::cout << " " << point_text(g, v);
    std::cout << "\n";
    for (const auto& e : m.edges)
      std::cout << point_text(g, e.a) << " -- " << point_text(g, e.b)
                << " length " << e.len.str() << "\n";
  }
  return 0;
}

inline int cmd_embed_report(const Options& opt, const std::string& path) {
  GeneratorTuple t = io::tuple_from_json(detail::load_json(path));
  EmbeddingReport rep = embedding_report(t);
  if (opt.json) {
    detail::emit_json(io::report_json(t, rep));
  } else {
    std::cout << "segments: " << rep.segments.size() << "\n";
    std::cout << "gcds:";
    for (long long g : rep.isometry.gcds) std::cout << " " << g;
    std::cout << "\n";
    std::cout << "isometry: " << (rep.isometry.all_ok ? "ok" : "FAIL") << "\n";
    std::cout << "injective: " << (rep.injectivity.injective ? "yes" : "no")
              << "\n";
    if (rep.injectivity.witness)
      std::cout << "witness: "
                << point_text(t.curve, rep.injectivity.witness->first) << " "
                << point_text(t.curve, rep.injectivity.witness->second) << "\n";
  }
  return 0;
}

inline int cmd_embed_image(const Options& opt, const std::string& path) {
  GeneratorTuple t = io::tuple_from_json(detail::load_json(path));
  auto segs = image_segments(t);
  if (opt.json) {
    io::Json j;
    io::Json arr = io::Json::array();
    for (const auto& s : segs) arr.push_back(io::segment_json(s));
    j["segments"] = std::move(arr);
    detail::emit_json(j);
  } else {
    std::cout << io::csv_segments(segs);
  }
  return 0;
}

inline int cmd_embed_check(const Options& opt, const std::string& path) {
  GeneratorTuple t = io::tuple_from_json(detail::load_json(path));
  EmbeddingReport rep = embedding_report(t);
  bool good = rep.isometry.all_ok && rep.injectivity.injective;
  if (opt.json) {
    io::Json j;
    j["isometry_ok"] = rep.isometry.all_ok;
    j["injective"] = rep.injectivity.injective;
    j["ok"] = good;
    if (rep.injectivity.witness) {
      io::Json w = io::Json::array();
      w.push_back(io::point_json(t.curve, rep.injectivity.witness->first));
      w.push_back(io::point_json(t.curve, rep.injectivity.witness->second));
      j["witness"] = std::move(w);
    }
    detail::emit_json(j);
  } else {
    std::cout << "isometry: " << (rep.isometry.all_ok ? "ok" : "FAIL") << "\n"
              << "injective: " << (rep.injectivity.injective ? "yes" : "no")
              << "\n";
    if (rep.injectivity.witness)
      std::cout << "witness: "
                << point_text(t.curve, rep.injectivity.witness->first) << " "
                << point_text(t.curve, rep.injectivity.witness->second) << "\n";
  }
  return good ? 0 : 1;
}

inline int cmd_pullback(const Options& opt, const std::string& coords_path,
                        const std::string& expr_text, bool n_set) {
  io::Json j = detail::load_json(coords_path);
  const io::Json& arr = j.is_object() && j.contains("coords") ? j["coords"] : j;
  if (!arr.is_array() || arr.empty())
    throw Error(coords_path + ": expected a nonempty array of coordinates");
  std::vector<RatFn> coords;
  for (const auto& c : arr) coords.push_back(io::ratfn_from_json(c));
  int n = static_cast<int>(coords.size());
  if (n_set && opt.n_vars != n)
    throw Error("-n must match the number of coordinates (" +
                std::to_string(n) + ")");
  RatFn f = detail::parse_fn(expr_text, n);
  RatFn out = pullback(coords, f);
  if (opt.json)
    detail::emit_json(io::ratfn_json(out));
  else
    std::cout << ratfn_text(out) << "\n";
  return 0;
}

inline int cmd_verify(const Options& opt) {
  std::vector<verify::ItemResult> items = verify::run_all(opt.seed);
  const verify::ItemResult* first_fail = nullptr;
  for (const auto& it : items)
    if (!it.pass && !first_fail) first_fail = &it;
  if (opt.json) {
    io::Json j;
    j["seed"] = opt.seed;
    io::Json arr = io::Json::array();
    for (const auto& it : items) {
      io::Json ji;
      ji["id"] = it.id;
      ji["name"] = it.name;
      ji["pass"] = it.pass;
      ji["note"] = it.note;
      arr.push_back(std::move(ji));
    }
    j["items"] = std::move(arr);
    j["all_pass"] = first_fail == nullptr;
    detail::emit_json(j);
  } else {
    for (const auto& it : items) {
      std::cout << (it.pass ? "ok   " : "FAIL ") << it.id << " " << it.name;
      if (!it.note.empty()) std::cout << " (" << it.note << ")";
      std::cout << "\n";
    }
    if (first_fail)
      std::cout << "first failing item: " << first_fail->id << " "
                << first_fail->name << "\n";
    else
      std::cout << "all " << items.size() << " items passed\n";
  }
  return first_fail ? 1 : 0;
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"exact tropical algebra toolkit"};
  app.require_subcommand(1);
  Options opt;
  bool n_set = false;
  std::function<int()> action;

  std::string expr_a, expr_b, file_a, file_b, file_c, point_str, level = "inf";

  CLI::App* poly = app.add_subcommand("poly", "polynomial operations");
  poly->require_subcommand(1);
  CLI::App* canon = poly->add_subcommand("canon", "canonical form");
  add_common(canon, opt);
  canon->add_option("expr", expr_a, "expression")->required();
  canon->callback([&] { action = [&] { return cmd_poly_canon(opt, expr_a); }; });

  CLI::App* eq = app.add_subcommand("eq", "decide functional equality");
  add_common(eq, opt);
  eq->add_option("lhs", expr_a, "left expression")->required();
  eq->add_option("rhs", expr_b, "right expression")->required();
  eq->callback([&] { action = [&] { return cmd_eq(opt, expr_a, expr_b); }; });

  CLI::App* ev = app.add_subcommand("eval", "evaluate at a point");
  add_common(ev, opt);
  ev->add_option("expr", expr_a, "expression")->required();
  ev->add_option("point", point_str, "comma-separated rationals")->required();
  ev->callback([&] { action = [&] { return cmd_eval(opt, expr_a, point_str); }; });

  CLI::App* variety = app.add_subcommand("variety", "congruence varieties");
  variety->require_subcommand(1);
  CLI::App* vsample = variety->add_subcommand("sample", "grid membership scan");
  add_common(vsample, opt);
  vsample->add_option("gens", file_a, "presentation JSON file")->required();
  vsample->callback(
      [&] { action = [&] { return cmd_variety_sample(opt, file_a); }; });
  CLI::App* vcells = variety->add_subcommand("cells", "closed-cell export");
  add_common(vcells, opt);
  vcells->add_option("gens", file_a, "presentation JSON file")->required();
  vcells->callback(
      [&] { action = [&] { return cmd_variety_cells(opt, file_a); }; });
  CLI::App* vempty = variety->add_subcommand("empty", "emptiness test");
  add_common(vempty, opt);
  vempty->add_option("gens", file_a, "presentation JSON file")->required();
  vempty->callback(
      [&] { action = [&] { return cmd_variety_empty(opt, file_a); }; });

  CLI::App* curve = app.add_subcommand("curve", "metric-graph operations");
  curve->require_subcommand(1);
  CLI::App* ce = curve->add_subcommand("eval", "evaluate a function");
  add_common(ce, opt);
  ce->add_option("curve", file_a, "curve JSON file")->required();
  ce->add_option("fn", file_b, "function JSON file")->required();
  ce->add_option("point", point_str, "v<k> or <edge>:<offset>")->required();
  ce->callback(
      [&] { action = [&] { return cmd_curve_eval(opt, file_a, file_b, point_str); }; });
  CLI::App* cmax = curve->add_subcommand("max", "pointwise maximum");
  add_common(cmax, opt);
  cmax->add_option("curve", file_a, "curve JSON file")->required();
  cmax->add_option("f", file_b, "function JSON file")->required();
  cmax->add_option("g", file_c, "function JSON file")->required();
  cmax->callback(
      [&] { action = [&] { return cmd_curve_binop(opt, file_a, file_b, file_c, true); }; });
  CLI::App* cadd = curve->add_subcommand("add", "pointwise sum");
  add_common(cadd, opt);
  cadd->add_option("curve", file_a, "curve JSON file")->required();
  cadd->add_option("f", file_b, "function JSON file")->required();
  cadd->add_option("g", file_c, "function JSON file")->required();
  cadd->callback(
      [&] { action = [&] { return cmd_curve_binop(opt, file_a, file_b, file_c, false); }; });
  CLI::App* cf = curve->add_subcommand("chipfire", "distance-cutoff function");
  add_common(cf, opt);
  cf->add_option("curve", file_a, "curve JSON file")->required();
  cf->add_option("subgraph", file_b, "subgraph JSON file")->required();
  cf->add_option("level", level, "cutoff p/q, or inf");
  cf->callback(
      [&] { action = [&] { return cmd_curve_chipfire(opt, file_a, file_b, level); }; });
  CLI::App* cd = curve->add_subcommand("divisor", "breakpoint divisor");
  add_common(cd, opt);
  cd->add_option("curve", file_a, "curve JSON file")->required();
  cd->add_option("fn", file_b, "function JSON file")->required();
  cd->callback(
      [&] { action = [&] { return cmd_curve_divisor(opt, file_a, file_b); }; });
  CLI::App* cm = curve->add_subcommand("canonical-model", "minimal model");
  add_common(cm, opt);
  cm->add_option("curve", file_a, "curve JSON file")->required();
  cm->callback([&] { action = [&] { return cmd_curve_model(opt, file_a); }; });

  CLI::App* embed = app.add_subcommand("embed", "coordinate embeddings");
  embed->require_subcommand(1);
  CLI::App* er = embed->add_subcommand("report", "full certification report");
  add_common(er, opt);
  er->add_option("tuple", file_a, "generator tuple JSON file")->required();
  er->callback([&] { action = [&] { return cmd_embed_report(opt, file_a); }; });
  CLI::App* ei = embed->add_subcommand("image", "image segment export");
  add_common(ei, opt);
  ei->add_option("tuple", file_a, "generator tuple JSON file")->required();
  ei->callback([&] { action = [&] { return cmd_embed_image(opt, file_a); }; });
  CLI::App* ec = embed->add_subcommand("check", "injectivity and gcd checks");
  add_common(ec, opt);
  ec->add_option("tuple", file_a, "generator tuple JSON file")->required();
  ec->callback([&] { action = [&] { return cmd_embed_check(opt, file_a); }; });

  CLI::App* pb = app.add_subcommand("pullback", "substitute coordinates");
  add_common(pb, opt);
  pb->add_option("coords", file_a, "coordinate list JSON file")->required();
  pb->add_option("expr", expr_a, "expression over the coordinates")->required();
  pb->callback(
      [&] { action = [&] { return cmd_pullback(opt, file_a, expr_a, n_set); }; });

  CLI::App* vp = app.add_subcommand("verify-paper", "run the built-in suite");
  add_common(vp, opt);
  vp->callback([&] { action = [&] { return cmd_verify(opt); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  // Whether -n was given explicitly (pullback cross-checks it).
  for (CLI::App* sub : {canon, eq, ev, pb})
    if (sub->count("-n") > 0) n_set = true;

  try {
    return action ? action() : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tropica::cli
