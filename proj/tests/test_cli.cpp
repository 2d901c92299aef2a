#include "tropica/cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tropica;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
};

CliResult run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"tropica"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream captured;
  auto* old = std::cout.rdbuf(captured.rdbuf());
  int code = cli::run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old);
  return {code, captured.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "tropica_cli_test";
    fs::create_directories(dir_);
  }

  std::string write(const std::string& name, const std::string& content) {
    fs::path p = dir_ / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }

  fs::path dir_;
};

const char* kGens = R"({"n": 2, "gens": [{
  "lhs": {"num": {"n": 2, "terms": [{"exp": [1,0], "coef": "0"},
                                    {"exp": [0,1], "coef": "0"}]},
          "den": {"n": 2, "terms": [{"exp": [0,0], "coef": "0"}]}},
  "rhs": {"num": {"n": 2, "terms": [{"exp": [0,1], "coef": "0"}]},
          "den": {"n": 2, "terms": [{"exp": [0,0], "coef": "0"}]}}}]})";

const char* kLineCurve = R"({"vertices": [{"id": 0, "infinite": true}, {"id": 1},
                                          {"id": 2}, {"id": 3, "infinite": true}],
  "edges": [{"u": 1, "v": 0, "len": "inf"}, {"u": 1, "v": 2, "len": "1"},
            {"u": 2, "v": 3, "len": "inf"}]})";

const char* kLineFns = R"("fns": [
  {"edges": [{"pts": [{"offset": "0", "value": "0"}], "tail": 0},
             {"pts": [{"offset": "0", "value": "0"}, {"offset": "1", "value": "1"}], "tail": 0},
             {"pts": [{"offset": "0", "value": "1"}], "tail": 0}]},
  {"edges": [{"pts": [{"offset": "0", "value": "0"}], "tail": -1},
             {"pts": [{"offset": "0", "value": "0"}, {"offset": "1", "value": "0"}], "tail": 0},
             {"pts": [{"offset": "0", "value": "0"}], "tail": -1}]}])";

}  // namespace

TEST_F(CliTest, EqFrozenExample) {
  auto r = run_cli({"eq", "-n", "1", "max(x1+0, 0) + max(2*x1, -2 + x1, 0)",
                    "max(x1+0,0) + max(2*x1, -1 + x1, 0)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Equal\n");
}

TEST_F(CliTest, EqDistinctExitsOne) {
  auto r = run_cli({"eq", "-n", "1", "x1", "2*x1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("Distinct at ", 0), 0u) << r.out;
}

TEST_F(CliTest, PolyCanonDropsInessentialTerms) {
  auto r = run_cli({"poly", "canon", "-n", "1", "max(3*x1, 2*x1, x1, 0)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "max(0, x1 + x1 + x1)\n");
}

TEST_F(CliTest, EvalPrintsRational) {
  auto r = run_cli({"eval", "-n", "2", "max(x1, x2) - x2", "3,1/2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "5/2\n");
}

TEST_F(CliTest, VarietySampleFifteenPoints) {
  std::string gens = write("gens.json", kGens);
  auto r = run_cli({"variety", "sample", gens, "--box", "-2:2", "--step", "1"});
  EXPECT_EQ(r.code, 0);
  // header + 15 sample rows
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 16);
  EXPECT_EQ(r.out.rfind("x1,x2\n", 0), 0u);
}

TEST_F(CliTest, VarietySampleJsonDeterministic) {
  std::string gens = write("gens.json", kGens);
  std::vector<std::string> args{"variety", "sample", gens,
                                "--box", "-2:2", "--step", "1", "--json"};
  auto a = run_cli(args);
  auto b = run_cli(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);  // byte-identical
  io::Json j = io::parse_json(a.out);
  EXPECT_EQ(j["count"].get<int>(), 15);
  EXPECT_EQ(j["points"].size(), 15u);
  EXPECT_EQ(j["points"][0][0].get<std::string>(), "-2");
}

TEST_F(CliTest, VarietyCellsAndEmpty) {
  std::string gens = write("gens.json", kGens);
  auto cells = run_cli({"variety", "cells", gens, "--json"});
  EXPECT_EQ(cells.code, 0);
  io::Json j = io::parse_json(cells.out);
  EXPECT_EQ(j["n"].get<int>(), 2);
  EXPECT_GT(j["cells"].size(), 0u);
  for (const auto& cell : j["cells"]) {
    EXPECT_TRUE(cell.contains("eq") && cell.contains("ge"));
    EXPECT_EQ(cell.size(), 2u);  // nothing but eq and ge
  }
  auto empty = run_cli({"variety", "empty", gens});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out, "nonempty\n");
}

TEST_F(CliTest, CurveEvalAndChipfire) {
  std::string curve = write("line.json", kLineCurve);
  std::string fn = write("fn.json", R"({"edges": [
    {"pts": [{"offset": "0", "value": "0"}], "tail": -1},
    {"pts": [{"offset": "0", "value": "0"}, {"offset": "1", "value": "1"}], "tail": 0},
    {"pts": [{"offset": "0", "value": "1"}], "tail": -2}]})");
  std::string sub = write("sub.json",
                          R"({"intervals": [{"edge": 1, "lo": "0", "hi": "0"}]})");

  auto ev = run_cli({"curve", "eval", curve, fn, "1:1/2"});
  EXPECT_EQ(ev.code, 0);
  EXPECT_EQ(ev.out, "1/2\n");

  auto cf = run_cli({"curve", "chipfire", curve, sub, "2"});
  EXPECT_EQ(cf.code, 0);
  EXPECT_EQ(cf.out,
            "edge 0: (0, 0) (2, -2) tail 0\n"
            "edge 1: (0, 0) (1, -1)\n"
            "edge 2: (0, -1) (1, -2) tail 0\n");

  auto dv = run_cli({"curve", "divisor", curve, fn});
  EXPECT_EQ(dv.code, 0);
  EXPECT_EQ(dv.out, "v0 1\nv2 -3\nv3 2\ndegree 0\n");

  auto cm = run_cli({"curve", "canonical-model", curve});
  EXPECT_EQ(cm.code, 0);
  EXPECT_EQ(cm.out,
            "vertices: v0 v1 v3\n"
            "v0 -- v1 length inf\n"
            "v1 -- v3 length inf\n");
}

TEST_F(CliTest, CurveMaxAddRoundTrip) {
  std::string curve = write("line.json", kLineCurve);
  std::string f = write("f.json", R"({"edges": [
    {"pts": [{"offset": "0", "value": "0"}], "tail": -1},
    {"pts": [{"offset": "0", "value": "0"}, {"offset": "1", "value": "1"}], "tail": 0},
    {"pts": [{"offset": "0", "value": "1"}], "tail": 0}]})");
  std::string g = write("g.json", R"({"edges": [
    {"pts": [{"offset": "0", "value": "1"}], "tail": 0},
    {"pts": [{"offset": "0", "value": "1"}, {"offset": "1", "value": "0"}], "tail": 0},
    {"pts": [{"offset": "0", "value": "0"}], "tail": -1}]})");

  auto mx = run_cli({"curve", "max", curve, f, g, "--json"});
  EXPECT_EQ(mx.code, 0);
  MetricGraph graph = io::curve_from_json(io::parse_json(kLineCurve));
  PLFunction got = io::pl_from_json(graph, io::parse_json(mx.out));
  // crossing at the midpoint of the unit edge
  ExtValue mid = pl_eval(got, graph, cp(1, Rat(1, 2)));
  EXPECT_EQ(mid.sign, 0);
  EXPECT_EQ(mid.v, Rat(1, 2));

  auto ad = run_cli({"curve", "add", curve, f, g, "--json"});
  EXPECT_EQ(ad.code, 0);
  PLFunction sum = io::pl_from_json(graph, io::parse_json(ad.out));
  ExtValue at = pl_eval(sum, graph, cp(1, Rat(1, 4)));
  EXPECT_EQ(at.sign, 0);
  EXPECT_EQ(at.v, Rat(1, 4) + Rat(3, 4));  // f + g = t + (1 - t)
}

TEST_F(CliTest, EmbedSubcommands) {
  std::string tuple =
      write("tuple.json", std::string("{\"curve\": ") + kLineCurve + ", " +
                              kLineFns + "}");
  auto check = run_cli({"embed", "check", tuple});
  EXPECT_EQ(check.code, 0);
  EXPECT_EQ(check.out, "isometry: ok\ninjective: yes\n");

  auto image = run_cli({"embed", "image", tuple});
  EXPECT_EQ(image.code, 0);
  EXPECT_EQ(image.out,
            "edge,lo,hi,ray,start1,start2,end1,end2,slope1,slope2\n"
            "0,0,0,1,0,0,0,0,0,-1\n"
            "1,0,1,0,0,0,1,0,1,0\n"
            "2,0,0,1,1,0,1,0,0,-1\n");

  auto report = run_cli({"embed", "report", tuple, "--json"});
  EXPECT_EQ(report.code, 0);
  io::Json j = io::parse_json(report.out);
  EXPECT_TRUE(j["isometry_ok"].get<bool>());
  EXPECT_TRUE(j["injective"].get<bool>());
  EXPECT_EQ(j["segments"].size(), 3u);
  EXPECT_FALSE(j.contains("witness"));
}

TEST_F(CliTest, EmbedCheckFailureExitsOne) {
  // A single constant generator collapses the whole curve: not injective.
  std::string tuple = write("flat.json", std::string("{\"curve\": ") +
                                             kLineCurve +
                                             R"(, "fns": [{"edges": [
    {"pts": [{"offset": "0", "value": "0"}], "tail": 0},
    {"pts": [{"offset": "0", "value": "0"}, {"offset": "1", "value": "0"}], "tail": 0},
    {"pts": [{"offset": "0", "value": "0"}], "tail": 0}]}]})");
  auto r = run_cli({"embed", "check", tuple});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("injective: no"), std::string::npos);
  EXPECT_NE(r.out.find("witness: "), std::string::npos);
}

TEST_F(CliTest, PullbackAlongDoubling) {
  std::string coords = write("coords.json", R"([{
    "num": {"n": 1, "terms": [{"exp": [2], "coef": "0"}]},
    "den": {"n": 1, "terms": [{"exp": [0], "coef": "0"}]}}])");
  auto r = run_cli({"pullback", coords, "x1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x1 + x1\n");

  auto j = run_cli({"pullback", coords, "x1", "--json"});
  RatFn pulled = io::ratfn_from_json(io::parse_json(j.out));
  EXPECT_EQ(r_eval(pulled, {Rat(3)}), ExtRational(Rat(6)));

  auto bad = run_cli({"pullback", coords, "x1", "-n", "2"});
  EXPECT_EQ(bad.code, 2);  // one coordinate, so -n must be 1
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(run_cli({"variety", "empty", (dir_ / "missing.json").string()}).code,
            2);
  std::string bad = write("bad.json", "{oops");
  EXPECT_EQ(run_cli({"variety", "empty", bad}).code, 2);
  EXPECT_EQ(run_cli({"eq", "-n", "1", "max(x1,", "0"}).code, 2);
  std::string gens = write("gens.json", kGens);
  // three box ranges against two variables
  EXPECT_EQ(run_cli({"variety", "sample", gens, "--box", "0:1,0:1,0:1",
                     "--step", "1"}).code, 2);
  // step does not tile the box
  EXPECT_EQ(run_cli({"variety", "sample", gens, "--box", "-2:2",
                     "--step", "3/7"}).code, 2);
  std::string curve = write("line.json", kLineCurve);
  std::string fn = write("fn.json", R"({"edges": []})");
  EXPECT_EQ(run_cli({"curve", "divisor", curve, fn}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
}

TEST_F(CliTest, JsonOutputsParseBack) {
  std::string curve = write("line.json", kLineCurve);
  std::string sub = write("sub.json",
                          R"({"intervals": [{"edge": 1, "lo": "0", "hi": "1"}]})");
  auto cf = run_cli({"curve", "chipfire", curve, sub, "inf", "--json"});
  EXPECT_EQ(cf.code, 0);
  MetricGraph g = io::curve_from_json(io::parse_json(kLineCurve));
  PLFunction h = io::pl_from_json(g, io::parse_json(cf.out));
  // whole unit edge is in S: h vanishes there and falls off with slope -1
  EXPECT_EQ(pl_eval(h, g, cp(1, Rat(1, 2))).v, Rat(0));
  EXPECT_EQ(pl_eval(h, g, cp(0, Rat(3))).v, Rat(-3));
}
