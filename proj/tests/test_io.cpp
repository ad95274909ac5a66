#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "saddle_escape/io.hpp"
#include "saddle_escape/sofw.hpp"

using namespace saddle;

namespace {

std::string data_root() {
  const char* root = std::getenv("SADDLE_ESCAPE_DATA");
  return root ? root : ".";
}

}  // namespace

TEST(ProblemJson, BundledFilesLoad) {
  const Problem ce = load_problem(data_root() + "/problems/counterexample.json");
  EXPECT_EQ(ce.kind, "counterexample");
  EXPECT_EQ(ce.oracle.constants().L, counterexample_constants().L);
  EXPECT_EQ(ce.f_min, kCounterexampleFmin);

  const Problem q = load_problem(data_root() + "/problems/quad1d.json");
  EXPECT_EQ(q.oracle.dim(), 1);
  EXPECT_EQ(q.x0(0), 0.5);
  EXPECT_EQ(q.f_min, 0.0);
  EXPECT_EQ(q.oracle.constants().g_max, 2.0);

  const Problem c = load_problem(data_root() + "/problems/copositivity_path2.json");
  EXPECT_EQ(c.kind, "copositivity");
  EXPECT_EQ(c.feasible_set.rows(), 4);
}

TEST(ProblemJson, DefaultsAndOverrides) {
  const Problem p = problem_from_json(json::parse(R"({"kind":"counterexample","x0":[-1,-1]})"));
  EXPECT_EQ(p.x0(0), -1.0);
  const Problem q = problem_from_json(json::parse(
      R"({"kind":"quadratic","Q":[[1,0],[0,-1]],"region_radius":2,"A":[[1,0]],"b":[1]})"));
  EXPECT_DOUBLE_EQ(q.f_min, -2.0);
  EXPECT_EQ(q.oracle.constants().g_max, 2.0);
}

TEST(ProblemJson, Errors) {
  for (const char* text : {
           R"([])",
           R"({"kind":"banana"})",
           R"({"kind":"quadratic"})",
           R"({"kind":"quadratic","Q":[[1,2],[3,4]],"f_min":0})",
           R"({"kind":"quadratic","Q":[[1]],"A":[[1]],"f_min":0})",
           R"({"kind":"quadratic","Q":[[1]],"A":[[1]],"b":[1]})",
           R"({"kind":"quadratic","Q":[[1,0],[0]],"f_min":0})",
           R"({"kind":"counterexample","x0":[1,1]})",
           R"({"kind":"counterexample","constants":{"L":1}})",
           R"({"kind":"counterexample","x0":["a", 1]})",
       }) {
    EXPECT_THROW(problem_from_json(json::parse(text)), InvalidInput) << text;
  }
  EXPECT_THROW(load_problem("/nonexistent/problem.json"), InvalidInput);
}

TEST(GraphText, EdgeListAndJson) {
  const Graph a = parse_graph("# path\n3\n0 1\n\n1 2  # tail comment\n");
  EXPECT_EQ(a.size(), 3);
  EXPECT_EQ(a.edges().size(), 2u);
  const Graph b = parse_graph(R"({"n": 3, "edges": [[0, 1], [1, 2]]})");
  EXPECT_EQ(a.edges(), b.edges());
  EXPECT_EQ(parse_graph("2\n").edges().size(), 0u);
  EXPECT_THROW(parse_graph(""), InvalidInput);
  EXPECT_THROW(parse_graph("3\n0 1 2\n"), InvalidInput);
  EXPECT_THROW(parse_graph("3\n0 x\n"), InvalidInput);
  EXPECT_THROW(parse_graph("3 4\n"), InvalidInput);
  EXPECT_THROW(parse_graph(R"({"n": 3, "edges": [[0]]})"), InvalidInput);
  EXPECT_THROW(parse_graph(R"({"edges": []})"), InvalidInput);
  const Graph path2 = load_graph(data_root() + "/graphs/path2.txt");
  EXPECT_EQ(path2.size(), 2);
}

TEST(Point, Parsing) {
  const Vector p = parse_point("0.5,-0.5");
  ASSERT_EQ(p.size(), 2);
  EXPECT_EQ(p(0), 0.5);
  EXPECT_EQ(p(1), -0.5);
  EXPECT_EQ(parse_point(" 1e-3 ")(0), 1e-3);
  EXPECT_THROW(parse_point(""), InvalidInput);
  EXPECT_THROW(parse_point("1,,2"), InvalidInput);
  EXPECT_THROW(parse_point("1,abc"), InvalidInput);
}

TEST(TraceCsv, HeaderRowsAndFooter) {
  const Problem q = quad1d_problem();
  SofwConfig cfg;
  cfg.L_tilde = 2;
  cfg.rho_tilde = 2;
  std::ostringstream os;
  write_trace_csv(os, run_sofw(q, cfg));
  EXPECT_EQ(os.str(),
            "k,f,X,psi,step_kind,step_len,x_1\n"
            "0,0.25,1,0,FO,0.5,0.5\n"
            "1,0,0,0,terminate,0,0\n"
            "# status: converged\n");
}

TEST(TraceCsv, SeventeenDigitsAndDistanceColumn) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
  IterationTrace t;
  IterationRecord r;
  r.x = Vector::Ones(2);
  r.dist_origin = std::sqrt(2.0);
  r.kind = StepKind::terminate;
  t.records.push_back(r);
  std::ostringstream os;
  write_trace_csv(os, t);
  EXPECT_NE(os.str().find("x_1,x_2,dist_origin\n"), std::string::npos);
  EXPECT_NE(os.str().find(",1.4142135623730951\n"), std::string::npos);
  EXPECT_NE(os.str().find("# status: max_iters"), std::string::npos);
}

TEST(Json, StationarityReport) {
  StationarityReport r;
  r.first_order = 0;
  r.second_order = 0.5;
  r.s_hat = Vector::Zero(2);
  r.d_hat = Vector::Ones(2);
  r.verdict = Verdict::fosp;
  const json j = to_json(r);
  EXPECT_EQ(j.at("verdict"), "FOSP");
  EXPECT_EQ(j.at("psi"), 0.5);
  EXPECT_EQ(j.at("d_hat").size(), 2u);
}

TEST(Json, MatrixRoundTrip) {
  Matrix M(2, 3);
  M << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(matrix_from_json(to_json(M), "M"), M);
  EXPECT_THROW(matrix_from_json(json::parse("[[1,2],[3]]"), "M"), InvalidInput);
  EXPECT_THROW(vector_from_json(json::parse("3"), "v"), InvalidInput);
}
