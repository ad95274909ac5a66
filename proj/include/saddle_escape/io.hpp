#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "saddle_escape/hardness.hpp"
#include "saddle_escape/oracles.hpp"
#include "saddle_escape/stationarity.hpp"
#include "saddle_escape/trace.hpp"

namespace saddle {

using json = nlohmann::json;

Vector vector_from_json(const json& j, const char* field);
Matrix matrix_from_json(const json& j, const char* field);
json to_json(const Vector& v);
json to_json(const Matrix& M);

/// Problem file:
/// {"kind": "counterexample" | "quadratic" | "copositivity", "Q", "c", "A", "b",
///  "x0", "constants": {"L", "rho", "g_max", "H_max"}, "f_min", "region_radius", "upper"}
/// Missing fields fall back to the bundled defaults for the kind.
Problem problem_from_json(const json& j);
Problem load_problem(const std::string& path);

Polytope polytope_from_json(const json& j, Index n);

/// Edge-list text ("n" then one "u v" per line, '#' comments) or
/// JSON {"n": ..., "edges": [[u, v], ...]}.
Graph parse_graph(const std::string& text);
Graph load_graph(const std::string& path);

/// Parses "0.5,-0.5" into a vector.
Vector parse_point(const std::string& text);

json to_json(const StationarityReport& r);
json to_json(const CorrespondenceReport& r);

/// Header k,f,X,psi,step_kind,step_len,x_1..x_n[,dist_origin]; 17 significant
/// digits; closing "# status: ..." line.
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

std::string format_double(double v);

}  // namespace saddle
