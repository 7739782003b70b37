#include "cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gcs_star/environments.h"

namespace gcs_star::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Tmp(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / "gcsstar_cli_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int Count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

std::vector<std::vector<std::string>> CsvRows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(csv);
  for (std::string line; std::getline(lines, line);) {
    std::vector<std::string> cells;
    std::istringstream cols(line);
    for (std::string cell; std::getline(cols, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string WithoutTimeColumn(const std::string& csv) {
  std::string out;
  for (auto row : CsvRows(csv)) {
    row[5] = "";
    for (const auto& c : row) out += c + ",";
    out += "\n";
  }
  return out;
}

TEST(Cli, SolveCounterexampleWithSampling) {
  const std::string out = Tmp("fig3.json");
  const Outcome r = Cli({"solve", "--fixture", "fig3", "--checker", "rn-sampling",
                         "--seed", "7", "--out", out});
  EXPECT_EQ(r.code, kExitSolved) << r.err;
  EXPECT_NE(r.out.find("path [s, B, C, t]"), std::string::npos) << r.out;
  const auto sol = SolutionFromJson(ReadJsonFile(out));
  EXPECT_EQ(sol.path, (Path{"s", "B", "C", "t"}));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(Cli({"solve", "--fixture", "fig3", "--checker", "astar-baseline"}).code,
            kExitFail);
  EXPECT_EQ(Cli({"solve", "--problem", "missing.json"}).code, kExitInput);
  EXPECT_EQ(Cli({"solve", "--fixture", "fig3", "--max-expansions", "1"}).code,
            kExitLimit);
  EXPECT_EQ(Cli({"solve", "--fixture", "fig3", "--checker", "rn-sampling"}).code,
            kExitInput);
  EXPECT_EQ(Cli({"solve", "--fixture", "fig3", "--checker", "rq-sampling", "--seed", "1"})
                .code,
            kExitInput);
  EXPECT_EQ(Cli({"solve", "--fixture", "fig3", "--epsilon", "0.5"}).code, kExitInput);
  EXPECT_EQ(Cli({"solve", "--fixture", "fig3", "--samples", "0"}).code, kExitInput);
  EXPECT_EQ(Cli({"solve", "--fixture", "nope"}).code, kExitInput);
  EXPECT_EQ(Cli({"solve", "--fixture", "fig3", "--problem", "x.json"}).code, kExitInput);
  EXPECT_EQ(Cli({"solve"}).code, kExitInput);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitInput);
  EXPECT_EQ(Cli({"solve", "--fixture", "fig3", "--heuristic", "shortcut"}).code,
            kExitInput);
  EXPECT_EQ(Cli({"--help"}).code, kExitSolved);

  EXPECT_EQ(ExitCodeFor(SearchStatus::kSolved), kExitSolved);
  EXPECT_EQ(ExitCodeFor(SearchStatus::kFail), kExitFail);
  EXPECT_EQ(ExitCodeFor(SearchStatus::kTimedOut), kExitLimit);
  EXPECT_EQ(ExitCodeFor(SearchStatus::kExpansionLimit), kExitLimit);
}

TEST(Cli, MalformedJsonIsAnInputError) {
  const std::string path = Tmp("broken.json");
  std::ofstream(path) << "{\"vertices\": [";
  const Outcome r = Cli({"solve", "--problem", path});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ImplicitProblemNeedsPathBound) {
  auto doc = BuiltinProblemJson("push1");
  doc.erase("max_path_len");
  const std::string path = Tmp("push_unbounded.json");
  WriteJsonFile(path, doc);
  const Outcome r = Cli({"solve", "--problem", path, "--checker", "rn-sampling",
                         "--seed", "1"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("--max-path-len"), std::string::npos) << r.err;
}

TEST(Cli, SolveFromCommittedFile) {
  const Outcome r = Cli({"solve", "--problem", std::string(GCSSTAR_FIXTURE_DIR) +
                                                   "/stones4.json"});
  EXPECT_EQ(r.code, kExitSolved) << r.err;
}

TEST(Cli, BenchMatrixCardinalityAndDeterminism) {
  const std::vector<std::string> args = {"bench", "--checker", "rc-sampling,rn-sampling",
                                         "--fixture", "fig3,stones4", "--seed", "5"};
  const Outcome a = Cli(args);
  const Outcome b = Cli(args);
  ASSERT_EQ(a.code, kExitSolved) << a.err;
  const auto rows = CsvRows(a.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"alg", "checker", "impl", "heuristic",
                                                "fixture", "time", "cost", "expansions",
                                                "status"}));
  EXPECT_EQ(rows[1][1], "rc");
  EXPECT_EQ(rows[1][2], "sampling");
  EXPECT_EQ(rows[1][4], "fig3");
  EXPECT_EQ(rows[4][4], "stones4");
  EXPECT_EQ(WithoutTimeColumn(a.out), WithoutTimeColumn(b.out));

  auto parallel = args;
  parallel.insert(parallel.end(), {"--jobs", "3"});
  EXPECT_EQ(WithoutTimeColumn(Cli(parallel).out), WithoutTimeColumn(a.out));
}

TEST(Cli, BenchSanityRowExpandsNoMoreThanContainment) {
  const Outcome r = Cli({"bench", "--checker", "rc-containment,astar-baseline",
                         "--fixture", "stones4"});
  ASSERT_EQ(r.code, kExitSolved) << r.err;
  const auto rows = CsvRows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2][0], "astar_vertex_baseline");
  EXPECT_GE(std::stol(rows[1][7]), std::stol(rows[2][7]));
  EXPECT_EQ(rows[1][8], "solved");
}

TEST(Cli, BenchRecordsRowFailuresAndContinues) {
  const Outcome r = Cli({"bench", "--checker", "rc-sampling", "--fixture", "fig3",
                         "--heuristic", "shortcut,zero"});
  ASSERT_EQ(r.code, kExitSolved);
  const auto rows = CsvRows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][8], "error");
  EXPECT_EQ(rows[2][8], "solved");
}

TEST(Cli, VizCounterexample) {
  const std::string sol = Tmp("fig3_viz.json");
  ASSERT_EQ(Cli({"solve", "--fixture", "fig3", "--out", sol}).code, kExitSolved);
  const std::string svg = Tmp("fig3.svg");
  ASSERT_EQ(Cli({"viz", "--fixture", "fig3", "--solution", sol, "--svg", svg}).code,
            kExitSolved);
  const std::string text = Slurp(svg);
  EXPECT_EQ(Count(text, "<polygon"), 5);
  EXPECT_EQ(Count(text, "<polyline"), 1);
}

TEST(Cli, VizPushingHasOneTrackPerMovableBody) {
  const std::string sol = Tmp("push1.json");
  const std::string svg = Tmp("push1.svg");
  ASSERT_EQ(Cli({"solve", "--fixture", "push1", "--checker", "rn-sampling", "--seed",
                 "1", "--epsilon", "10", "--out", sol, "--svg", svg})
                .code,
            kExitSolved);
  const int movable =
      static_cast<int>(make_push1_environment().movable_bodies().size());
  EXPECT_EQ(Count(Slurp(svg), "<polyline"), movable);
  const Outcome again = Cli({"viz", "--fixture", "push1", "--solution", sol});
  EXPECT_EQ(again.code, kExitSolved);
  EXPECT_EQ(Count(again.out, "<polyline"), movable);
}

TEST(Cli, VizRejectsEmptyAndNon2D) {
  const std::string failed = Tmp("failed.json");
  ASSERT_EQ(Cli({"solve", "--fixture", "fig3", "--checker", "astar-baseline", "--out",
                 failed})
                .code,
            kExitFail);
  EXPECT_EQ(Cli({"viz", "--fixture", "fig3", "--solution", failed}).code, kExitInput);

  auto g = std::make_shared<ExplicitGcs>();
  g->AddVertex("s", HPolyhedron::MakeBox(Eigen::VectorXd::Constant(1, 0.0),
                                         Eigen::VectorXd::Constant(1, 1.0)));
  g->AddVertex("t", HPolyhedron::MakeBox(Eigen::VectorXd::Constant(1, 2.0),
                                         Eigen::VectorXd::Constant(1, 3.0)));
  g->AddEdge("s", "t", HPolyhedron(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0)),
             L1DistanceCost(1, 0.0));
  g->set_source("s");
  g->set_target("t");
  const std::string problem = Tmp("line.json");
  WriteJsonFile(problem, ToJson(*g));
  const std::string sol = Tmp("line_sol.json");
  ASSERT_EQ(Cli({"solve", "--problem", problem, "--out", sol}).code, kExitSolved);
  const Outcome r = Cli({"viz", "--problem", problem, "--solution", sol});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("2-D"), std::string::npos) << r.err;
}

TEST(Cli, SolutionFileCostIsReproducible) {
  const std::string sol = Tmp("stones4_sol.json");
  ASSERT_EQ(Cli({"solve", "--fixture", "stones4", "--out", sol}).code, kExitSolved);
  const Problem p = BuiltinProblem("stones4");
  const LoadedSolution back = SolutionFromJson(ReadJsonFile(sol));
  EXPECT_NEAR(EvaluateTrajectoryCost(Realize(p.graph(), back.path), back.points),
              back.cost, 1e-6);
}

TEST(Cli, PolygonVerticesOfBox) {
  const auto pts = PolygonVertices(
      HPolyhedron::MakeBox(Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 1)));
  ASSERT_EQ(pts.size(), 4u);
  double area = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    area += p.x() * q.y() - q.x() * p.y();
  }
  EXPECT_NEAR(area / 2, 2.0, 1e-12);
}

}  // namespace
}  // namespace gcs_star::cli
