#include "saddle_escape/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

namespace saddle {

Vector vector_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw InvalidInput(std::string("field '") + field + "' must be an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput(std::string("field '") + field + "' must contain numbers");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw InvalidInput(std::string("field '") + field + "' must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0);
  Matrix M(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row = vector_from_json(j[r], field);
    if (static_cast<std::size_t>(row.size()) != cols)
      throw InvalidInput(std::string("field '") + field + "' has ragged rows");
    M.row(static_cast<Index>(r)) = row.transpose();
  }
  return M;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& M) {
  json out = json::array();
  for (Index r = 0; r < M.rows(); ++r) out.push_back(to_json(Vector(M.row(r).transpose())));
  return out;
}

Polytope polytope_from_json(const json& j, Index n) {
  const bool has_a = j.contains("A"), has_b = j.contains("b");
  if (has_a != has_b) throw InvalidInput("problem: 'A' and 'b' must be given together");
  if (!has_a) return Polytope::unconstrained(n);
  Matrix A = matrix_from_json(j.at("A"), "A");
  if (A.rows() == 0) A.resize(0, n);
  if (A.cols() != n) throw InvalidInput("problem: 'A' rows must have length " + std::to_string(n));
  return Polytope(std::move(A), vector_from_json(j.at("b"), "b"));
}

namespace {

SmoothnessConstants constants_from_json(const json& j) {
  SmoothnessConstants k;
  try {
    k.L = j.at("L").get<double>();
    k.rho = j.at("rho").get<double>();
    k.g_max = j.at("g_max").get<double>();
    k.H_max = j.at("H_max").get<double>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("problem: bad 'constants': ") + e.what());
  }
  if (k.L < 0 || k.rho < 0 || k.g_max < 0 || k.H_max < 0) throw InvalidInput("problem: constants must be >= 0");
  return k;
}

double number(const json& j, const char* field) {
  if (!j.at(field).is_number()) throw InvalidInput(std::string("problem: '") + field + "' must be a number");
  return j.at(field).get<double>();
}

}  // namespace

Problem problem_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("problem: top level must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw InvalidInput("problem: missing string field 'kind'");
  const std::string kind = j.at("kind").get<std::string>();

  std::optional<Problem> p;
  if (kind == "counterexample") {
    p = counterexample_problem();
    if (j.contains("A") || j.contains("b")) p->feasible_set = polytope_from_json(j, 2);
  } else if (kind == "quadratic" || kind == "copositivity") {
    if (!j.contains("Q")) throw InvalidInput("problem: kind '" + kind + "' requires 'Q'");
    const Matrix Q = matrix_from_json(j.at("Q"), "Q");
    const Index n = Q.rows();
    if (n < 1 || Q.cols() != n) throw InvalidInput("problem: 'Q' must be a non-empty square matrix");
    const Vector c = j.contains("c") ? vector_from_json(j.at("c"), "c") : Vector::Zero(n);
    if (c.size() != n) throw InvalidInput("problem: 'c' must have length " + std::to_string(n));

    if (kind == "copositivity" && !j.contains("A")) {
      const double upper = j.contains("upper") ? number(j, "upper") : 1.0;
      p = copositivity_problem(Q, upper);
    } else {
      const double radius = j.contains("region_radius") ? number(j, "region_radius") : 0.0;
      ObjectiveOracle o = quadratic_oracle(Q, c, radius);
      double f_min = -std::numeric_limits<double>::infinity();
      if (j.contains("region_radius"))
        f_min = -0.5 * o.constants().H_max * radius * radius - c.norm() * radius;
      p = Problem{kind, o, polytope_from_json(j, n), Vector::Zero(n), f_min};
    }
    p->kind = kind;
  } else {
    throw InvalidInput("problem: unknown kind '" + kind + "'");
  }

  if (j.contains("x0")) p->x0 = vector_from_json(j.at("x0"), "x0");
  if (j.contains("constants")) p->oracle = p->oracle.with_constants(constants_from_json(j.at("constants")));
  if (j.contains("f_min")) p->f_min = number(j, "f_min");
  if (!std::isfinite(p->f_min)) throw InvalidInput("problem: 'f_min' is required (or give 'region_radius')");
  try {
    validate(*p);
  } catch (const Error& e) {
    throw InvalidInput(e.what());
  }
  return std::move(*p);
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("problem file '" + path + "' is not valid JSON: " + e.what());
  }
  return problem_from_json(j);
}

Graph parse_graph(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InvalidInput("graph: empty input");
  if (text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2) throw InvalidInput("graph: each edge must be a pair");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
      return Graph(j.at("n").get<int>(), std::move(edges));
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("graph: invalid JSON: ") + e.what());
    }
  }

  std::istringstream in(text);
  std::string line;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<long> nums;
    long v;
    while (ls >> v) nums.push_back(v);
    if (!ls.eof()) throw InvalidInput("graph: non-numeric token in line '" + line + "'");
    if (nums.empty()) continue;
    if (n < 0) {
      if (nums.size() != 1) throw InvalidInput("graph: first line must hold the vertex count");
      n = static_cast<int>(nums[0]);
    } else {
      if (nums.size() != 2) throw InvalidInput("graph: edge lines must hold two vertex indices");
      edges.emplace_back(static_cast<int>(nums[0]), static_cast<int>(nums[1]));
    }
  }
  if (n < 0) throw InvalidInput("graph: missing vertex count");
  return Graph(n, std::move(edges));
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open graph file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

Vector parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse point component '" + item + "'");
    }
  }
  if (vals.empty()) throw InvalidInput("empty point");
  return Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size()));
}

json to_json(const StationarityReport& r) {
  return json{{"X", r.first_order},      {"psi", r.second_order}, {"s_hat", to_json(r.s_hat)},
              {"d_hat", to_json(r.d_hat)}, {"eps_g", r.eps_g},      {"eps_H", r.eps_H},
              {"verdict", std::string(to_string(r.verdict))}};
}

json to_json(const CorrespondenceReport& r) {
  return json{{"n", r.n},
              {"t", r.t},
              {"min_value", r.min_value},
              {"threshold", r.threshold},
              {"stable_exists", r.stable_exists},
              {"equivalence_holds", r.equivalence_holds},
              {"dichotomy_holds", r.dichotomy_holds}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  if (trace.records.empty()) return;
  const Index n = trace.records.front().x.size();
  const bool dist = trace.records.front().dist_origin.has_value();
  os << "k,f,X,psi,step_kind,step_len";
  for (Index i = 1; i <= n; ++i) os << ",x_" << i;
  if (dist) os << ",dist_origin";
  os << '\n';
  for (const IterationRecord& r : trace.records) {
    os << r.k << ',' << format_double(r.f) << ',' << format_double(r.X) << ',' << format_double(r.psi) << ','
       << to_string(r.kind) << ',' << format_double(r.step_length);
    for (Index i = 0; i < n; ++i) os << ',' << format_double(r.x(i));
    if (dist) os << ',' << format_double(r.dist_origin.value_or(std::nan("")));
    os << '\n';
  }
  os << "# status: " << to_string(trace.status) << '\n';
}

}  // namespace saddle
