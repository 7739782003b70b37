#include "gcs_star/io.h"

#include <fstream>

#include "gcs_star/environments.h"

namespace gcs_star {

using nlohmann::json;

namespace {

json Matrix(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json Vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double Number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

Eigen::VectorXd ReadVector(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = Number(j[i], what);
  return v;
}

Eigen::MatrixXd ReadRows(const json& j, const char* what, int cols) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of rows");
  if (j.empty()) {
    if (cols < 0) throw InputError(std::string(what) + " is empty");
    return Eigen::MatrixXd(0, cols);
  }
  const std::size_t n = j[0].is_array() ? j[0].size() : 0;
  if (cols >= 0 && static_cast<int>(n) != cols) {
    throw InputError(std::string(what) + " has " + std::to_string(n) +
                     " columns, expected " + std::to_string(cols));
  }
  Eigen::MatrixXd M(j.size(), n);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != n) {
      throw InputError(std::string(what) + " rows have different lengths");
    }
    for (std::size_t k = 0; k < n; ++k) M(i, k) = Number(j[i][k], what);
  }
  return M;
}

HPolyhedron ReadH(const json& j, const char* a_key, const char* b_key, int cols,
                  const std::string& what) {
  const Eigen::VectorXd b = ReadVector(Field(j, b_key), b_key);
  const Eigen::MatrixXd A = ReadRows(Field(j, a_key), a_key, cols);
  if (A.rows() != b.size()) {
    throw InputError(what + ": A has " + std::to_string(A.rows()) + " rows but b has " +
                     std::to_string(b.size()));
  }
  try {
    return HPolyhedron(A, b);
  } catch (const std::invalid_argument& e) {
    throw InputError(what + ": " + e.what());
  }
}

constexpr int kPush1MaxPathLen = 6;

}  // namespace

json ToJson(const HPolyhedron& P) {
  json out = {{"A", Matrix(P.A())}, {"b", Vector(P.b())}};
  if (P.A().rows() == 0) out["dim"] = P.ambient_dimension();
  return out;
}

HPolyhedron HPolyhedronFromJson(const json& j) {
  return ReadH(j, "A", "b", j.contains("dim") ? j.at("dim").get<int>() : -1,
               "polyhedron");
}

json ToJson(const AHPolytope& X) {
  return {{"base", ToJson(X.base())}, {"T", Matrix(X.T())}, {"t", Vector(X.t())}};
}

AHPolytope AHPolytopeFromJson(const json& j) {
  HPolyhedron base = HPolyhedronFromJson(Field(j, "base"));
  const Eigen::VectorXd t = ReadVector(Field(j, "t"), "t");
  const Eigen::MatrixXd T = ReadRows(Field(j, "T"), "T", base.ambient_dimension());
  if (T.rows() != t.size()) throw InputError("T and t disagree in size");
  try {
    return AHPolytope(std::move(base), T, t);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

json ToJson(const ExplicitGcs& g) {
  json vertices = json::array();
  for (const auto& v : g.vertices()) {
    vertices.push_back({{"id", v->id.str()},
                        {"A", Matrix(v->set.A())},
                        {"b", Vector(v->set.b())},
                        {"dim", v->dim()}});
  }
  json edges = json::array();
  for (const auto& e : g.edges()) {
    json terms = json::array();
    for (const auto& t : e->cost.terms) {
      terms.push_back({{"w", t.w}, {"a", Vector(t.a.transpose())}, {"b", t.b}});
    }
    edges.push_back({{"u", e->u.str()},
                     {"v", e->v.str()},
                     {"A_e", Matrix(e->constraint.A())},
                     {"b_e", Vector(e->constraint.b())},
                     {"cost", {{"c0", e->cost.c0}, {"terms", terms}}}});
  }
  json out = {{"vertices", vertices},
              {"edges", edges},
              {"source", g.source().str()},
              {"target", g.target().str()}};
  if (g.shortcut_positions()) out["shortcut_positions"] = true;
  return out;
}

std::shared_ptr<ExplicitGcs> ExplicitGcsFromJson(const json& j) {
  auto g = std::make_shared<ExplicitGcs>();
  const json& vertices = Field(j, "vertices");
  if (!vertices.is_array()) throw InputError("'vertices' must be an array");
  for (const json& v : vertices) {
    const std::string id = Field(v, "id").get<std::string>();
    const int dim = v.contains("dim") ? v.at("dim").get<int>() : -1;
    HPolyhedron set = ReadH(v, "A", "b", dim, "vertex '" + id + "'");
    try {
      g->AddVertex(id, std::move(set));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  const json& edges = Field(j, "edges");
  if (!edges.is_array()) throw InputError("'edges' must be an array");
  for (const json& e : edges) {
    const std::string u = Field(e, "u").get<std::string>();
    const std::string v = Field(e, "v").get<std::string>();
    const std::string what = "edge " + u + " -> " + v;
    if (!g->has_vertex(u) || !g->has_vertex(v)) {
      throw InputError(what + " has an unknown endpoint");
    }
    const int cols = g->vertex(u)->dim() + g->vertex(v)->dim();
    HPolyhedron constraint = ReadH(e, "A_e", "b_e", cols, what);
    EdgeCostL1 cost;
    const json& c = Field(e, "cost");
    cost.c0 = Number(Field(c, "c0"), "c0");
    if (c.contains("terms")) {
      for (const json& t : c.at("terms")) {
        L1Term term;
        term.w = Number(Field(t, "w"), "w");
        term.a = ReadVector(Field(t, "a"), "a").transpose();
        term.b = t.contains("b") ? Number(t.at("b"), "b") : 0.0;
        if (term.a.size() != cols) throw InputError(what + ": cost term has wrong length");
        cost.terms.push_back(std::move(term));
      }
    }
    try {
      g->AddEdge(u, v, std::move(constraint), std::move(cost));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  g->set_source(Field(j, "source").get<std::string>());
  g->set_target(Field(j, "target").get<std::string>());
  if (j.value("shortcut_positions", false)) g->set_shortcut_positions(true);
  return g;
}

json ToJson(const PushingEnvironment& env) {
  json bodies = json::array();
  for (const BodySpec& b : env.bodies) {
    json polygon = json::array();
    for (const auto& v : b.polygon) polygon.push_back({v.x(), v.y()});
    bodies.push_back({{"name", b.name},
                      {"polygon", polygon},
                      {"movable", b.movable},
                      {"actuated", b.actuated}});
  }
  json start = json::array();
  for (const auto& p : env.start) start.push_back({p.x(), p.y()});
  return {{"bodies", bodies},
          {"workspace", ToJson(env.workspace)},
          {"start", start},
          {"goal", ToJson(env.goal)},
          {"weights", env.weights},
          {"mu", env.mu},
          {"actuation_limit", env.actuation_limit},
          {"max_contact_force", env.max_contact_force}};
}

PushingEnvironment PushingEnvironmentFromJson(const json& j) {
  PushingEnvironment env;
  for (const json& b : Field(j, "bodies")) {
    BodySpec body;
    body.name = b.value("name", "body" + std::to_string(env.bodies.size()));
    for (const json& v : Field(b, "polygon")) {
      const Eigen::VectorXd p = ReadVector(v, "polygon vertex");
      if (p.size() != 2) throw InputError("polygon vertices must be 2-D");
      body.polygon.emplace_back(p(0), p(1));
    }
    body.movable = b.value("movable", true);
    body.actuated = b.value("actuated", false);
    env.bodies.push_back(std::move(body));
  }
  env.workspace = ReadH(Field(j, "workspace"), "A", "b", 2, "workspace");
  for (const json& p : Field(j, "start")) {
    const Eigen::VectorXd v = ReadVector(p, "start");
    if (v.size() != 2) throw InputError("start positions must be 2-D");
    env.start.emplace_back(v(0), v(1));
  }
  env.goal = ReadH(Field(j, "goal"), "A", "b", -1, "goal");
  if (j.contains("weights")) env.weights = j.at("weights").get<std::vector<double>>();
  env.mu = j.value("mu", 1.0);
  env.actuation_limit = j.value("actuation_limit", 5.0);
  env.max_contact_force = j.value("max_contact_force", 10.0);
  try {
    env.Validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return env;
}

const ImplicitGcs& Problem::graph() const {
  if (explicit_graph) return *explicit_graph;
  return *pushing;
}

Problem ProblemFromJson(const json& j, const std::string& name) {
  Problem p;
  p.name = name;
  try {
    if (j.contains("bodies")) {
      p.pushing = make_pushing_problem(PushingEnvironmentFromJson(j));
    } else {
      p.explicit_graph = ExplicitGcsFromJson(j);
    }
    p.max_path_len = j.value("max_path_len", 0);
  } catch (const json::exception& e) {
    throw InputError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return p;
}

Problem LoadProblem(const std::string& path) {
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return ProblemFromJson(ReadJsonFile(path), name);
}

json BuiltinProblemJson(const std::string& name) {
  if (name == "fig3") return ToJson(*make_fig3_counterexample());
  if (name == "stones4") return ToJson(*make_stones4());
  if (name == "push1") {
    json out = ToJson(make_push1_environment());
    out["max_path_len"] = kPush1MaxPathLen;
    return out;
  }
  throw InputError("unknown fixture '" + name + "'");
}

Problem BuiltinProblem(const std::string& name) {
  Problem p;
  p.name = name;
  if (name == "fig3") {
    p.explicit_graph = make_fig3_counterexample();
  } else if (name == "stones4") {
    p.explicit_graph = make_stones4();
  } else if (name == "push1") {
    p.pushing = make_pushing_problem(make_push1_environment());
    p.max_path_len = kPush1MaxPathLen;
  } else {
    throw InputError("unknown fixture '" + name + "'");
  }
  return p;
}

json SolutionToJson(const Solution& sol, const RunInfo& info) {
  json path = json::array();
  for (const auto& v : sol.path) path.push_back(v.str());
  json trajectory = json::array();
  for (const auto& x : sol.trajectory.points) trajectory.push_back(Vector(x));
  json out = {{"status", to_string(sol.status)},
              {"path", path},
              {"expansions", sol.stats.expansions},
              {"queue_pushes", sol.stats.queue_pushes},
              {"domination_calls", sol.stats.domination_calls},
              {"solver_calls", sol.stats.solver_calls},
              {"wall_time_ms", sol.stats.wall_time_ms},
              {"seed", info.seed},
              {"checker", info.checker},
              {"heuristic", info.heuristic},
              {"trajectory", trajectory}};
  // JSON has no infinity.
  out["cost"] = sol.solved() ? json(sol.cost) : json(nullptr);
  return out;
}

LoadedSolution SolutionFromJson(const json& j) {
  LoadedSolution out;
  try {
    out.status = Field(j, "status").get<std::string>();
    for (const json& v : Field(j, "path")) out.path.emplace_back(v.get<std::string>());
    for (const json& x : Field(j, "trajectory")) {
      out.points.push_back(ReadVector(x, "trajectory point"));
    }
    const json& cost = Field(j, "cost");
    out.cost = cost.is_null() ? kInfinity : Number(cost, "cost");
  } catch (const json::exception& e) {
    throw InputError(e.what());
  }
  if (out.points.size() != out.path.size()) {
    throw InputError("trajectory and path lengths differ");
  }
  return out;
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace gcs_star
