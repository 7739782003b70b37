#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "gcs_star/gcs.h"
#include "gcs_star/pushing.h"
#include "gcs_star/search.h"

namespace gcs_star {

/// Raised for malformed problem or solution files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json ToJson(const HPolyhedron& P);
HPolyhedron HPolyhedronFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const AHPolytope& X);
AHPolytope AHPolytopeFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const ExplicitGcs& g);
std::shared_ptr<ExplicitGcs> ExplicitGcsFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const PushingEnvironment& env);
PushingEnvironment PushingEnvironmentFromJson(const nlohmann::json& j);

/// A loaded problem: an explicit graph or a pushing environment.
struct Problem {
  std::string name;
  std::shared_ptr<ExplicitGcs> explicit_graph;
  std::shared_ptr<PushingGcs> pushing;
  /// Path length bound stored with the problem; 0 when absent.
  int max_path_len{0};

  const ImplicitGcs& graph() const;
};

/// Documents with "bodies" are pushing environments; the rest are explicit
/// graphs. Throws InputError.
Problem ProblemFromJson(const nlohmann::json& j, const std::string& name);
Problem LoadProblem(const std::string& path);

/// "fig3", "stones4" or "push1". Throws InputError for other names.
Problem BuiltinProblem(const std::string& name);
nlohmann::json BuiltinProblemJson(const std::string& name);

struct RunInfo {
  std::uint64_t seed{0};
  std::string checker;
  std::string heuristic;
};

/// Stats record plus the trajectory.
nlohmann::json SolutionToJson(const Solution& sol, const RunInfo& info);

struct LoadedSolution {
  std::string status;
  Path path;
  std::vector<Eigen::VectorXd> points;
  double cost{kInfinity};
};
LoadedSolution SolutionFromJson(const nlohmann::json& j);

nlohmann::json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const nlohmann::json& j);

}  // namespace gcs_star
