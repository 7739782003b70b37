#include "cli.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gcs_star/domination.h"
#include "gcs_star/heuristic.h"
#include "gcs_star/lp_solver.h"

namespace gcs_star::cli {

namespace {

constexpr const char* kBaselineKey = "astar-baseline";

struct RunConfig {
  std::string problem_file;
  std::string fixture;
  std::string checker{"rc-containment"};
  std::string heuristic{"auto"};
  double epsilon{1.0};
  int samples{1};
  std::optional<std::uint64_t> seed;
  int max_path_len{0};
  long max_expansions{0};
  double timeout_s{0.0};
  int threads{1};
  std::string out;
  std::string svg;
};

bool UsesSampling(const std::string& checker) {
  return checker.find("sampling") != std::string::npos ||
         checker.find("hybrid") != std::string::npos;
}

void ValidateChecker(const std::string& key) {
  if (key == kBaselineKey) return;
  try {
    DominationChecker::FromKey(key);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

std::shared_ptr<const Heuristic> BuildHeuristic(const Problem& problem,
                                                 const std::string& key, double epsilon) {
  const ImplicitGcs& g = problem.graph();
  std::shared_ptr<const Heuristic> h;
  std::string resolved = key;
  if (resolved == "auto") {
    resolved = g.shortcut_model(g.source()) ? "shortcut" : "zero";
  }
  if (resolved == "zero") {
    h = MakeZeroHeuristic();
  } else if (resolved == "shortcut") {
    if (!g.shortcut_model(g.source())) {
      throw InputError("problem has no shortcut model; use --heuristic zero");
    }
    h = MakeShortcutHeuristic({});
  } else if (resolved == "c0") {
    if (!problem.explicit_graph) throw InputError("heuristic c0 needs an explicit graph");
    h = MakeConstantLowerBoundHeuristic(*problem.explicit_graph);
  } else {
    throw InputError("unknown heuristic '" + key + "'");
  }
  if (epsilon < 1.0) throw InputError("--epsilon must be at least 1");
  if (epsilon > 1.0) h = MakeInflatedHeuristic(h, epsilon);
  return h;
}

std::string HeuristicLabel(const Problem& problem, const std::string& key, double epsilon) {
  std::string label = key;
  if (key == "auto") {
    const ImplicitGcs& g = problem.graph();
    label = g.shortcut_model(g.source()) ? "shortcut" : "zero";
  }
  if (epsilon > 1.0) {
    std::ostringstream s;
    s << label << "*" << epsilon;
    label = s.str();
  }
  return label;
}

Problem LoadConfigProblem(const RunConfig& config) {
  if (config.problem_file.empty() == config.fixture.empty()) {
    throw InputError("pass exactly one of --problem and --fixture");
  }
  Problem problem = config.fixture.empty() ? LoadProblem(config.problem_file)
                                           : BuiltinProblem(config.fixture);
  if (problem.explicit_graph) {
    const auto issues = validate_problem(*problem.explicit_graph);
    if (!issues.empty()) {
      std::string message = "invalid problem:";
      for (const auto& issue : issues) message += "\n  " + issue;
      throw InputError(message);
    }
  }
  return problem;
}

struct RunResult {
  Solution solution;
  RunInfo info;
};

RunResult Execute(const Problem& problem, const RunConfig& config,
                  const LpSolver& solver) {
  if (config.samples < 1) throw InputError("--samples must be at least 1");
  if (config.threads < 1) throw InputError("--threads must be at least 1");
  ValidateChecker(config.checker);
  RunResult result;
  result.info.seed = config.seed.value_or(0);
  result.info.checker = config.checker;
  result.info.heuristic = HeuristicLabel(problem, config.heuristic, config.epsilon);
  const auto h = BuildHeuristic(problem, config.heuristic, config.epsilon);

  SearchOptions options;
  options.max_path_len = config.max_path_len > 0 ? config.max_path_len : problem.max_path_len;
  options.max_expansions = config.max_expansions;
  options.timeout_s = config.timeout_s;
  options.seed = result.info.seed;
  options.num_threads = config.threads;
  options.solver = &solver;
  try {
    EffectiveMaxPathLen(problem.graph(), options);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string(e.what()) + "; pass --max-path-len");
  }
  if (config.checker == kBaselineKey) {
    result.solution = astar_vertex_baseline(problem.graph(), *h, options);
  } else {
    const auto checker = DominationChecker::FromKey(config.checker, config.samples);
    result.solution = gcs_star::gcs_star(problem.graph(), *h, checker, options);
  }
  return result;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
}

LoadedSolution Reload(const Solution& sol) {
  LoadedSolution out;
  out.path = sol.path;
  out.points = sol.trajectory.points;
  out.cost = sol.cost;
  return out;
}

std::string FormatCost(double cost) {
  if (!std::isfinite(cost)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", cost);
  return buf;
}

int CmdSolve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (UsesSampling(config.checker) && !config.seed) {
    throw InputError("--seed is required for checker '" + config.checker + "'");
  }
  const Problem problem = LoadConfigProblem(config);
  const RunResult run = Execute(problem, config, DefaultLpSolver());
  const Solution& sol = run.solution;
  out << "status " << to_string(sol.status) << "\n"
      << "cost " << FormatCost(sol.cost) << "\n"
      << "path " << PathToString(sol.path) << "\n"
      << "expansions " << sol.stats.expansions << "\n";
  if (!config.out.empty()) WriteJsonFile(config.out, SolutionToJson(sol, run.info));
  if (!config.svg.empty()) {
    if (sol.solved()) {
      WriteText(config.svg, RenderSvg(problem, Reload(sol)));
    } else {
      err << "no trajectory; skipping --svg\n";
    }
  }
  return ExitCodeFor(sol.status);
}

struct BenchConfig {
  RunConfig base;
  std::vector<std::string> fixtures;
  std::vector<std::string> problems;
  std::vector<std::string> checkers;
  std::vector<std::string> heuristics;
  int jobs{1};
};

struct BenchRow {
  std::string alg, checker, impl, heuristic, fixture, status;
  double time_s{0};
  double cost{kInfinity};
  long expansions{0};
};

std::string CsvLine(const BenchRow& r) {
  char time[32];
  std::snprintf(time, sizeof(time), "%.3f", r.time_s);
  std::ostringstream s;
  s << r.alg << "," << r.checker << "," << r.impl << "," << r.heuristic << ","
    << r.fixture << "," << time << "," << FormatCost(r.cost) << "," << r.expansions
    << "," << r.status;
  return s.str();
}

int CmdBench(const BenchConfig& bench, std::ostream& out, std::ostream& err) {
  if (bench.jobs < 1) throw InputError("--jobs must be at least 1");
  for (const auto& c : bench.checkers) ValidateChecker(c);

  // Problems are loaded up front so input errors fail the whole run.
  std::vector<Problem> problems;
  for (const auto& name : bench.fixtures) problems.push_back(BuiltinProblem(name));
  for (const auto& file : bench.problems) {
    RunConfig c;
    c.problem_file = file;
    problems.push_back(LoadConfigProblem(c));
  }

  struct Job {
    const Problem* problem;
    std::string checker;
    std::string heuristic;
  };
  std::vector<Job> jobs;
  for (const auto& p : problems) {
    for (const auto& h : bench.heuristics) {
      for (const auto& c : bench.checkers) jobs.push_back({&p, c, h});
    }
  }

  std::vector<BenchRow> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  auto run_job = [&](std::size_t i) {
    const Job& job = jobs[i];
    BenchRow& row = rows[i];
    row.fixture = job.problem->name;
    row.heuristic = HeuristicLabel(*job.problem, job.heuristic, bench.base.epsilon);
    if (job.checker == kBaselineKey) {
      row.alg = "astar_vertex_baseline";
      row.checker = "none";
      row.impl = "none";
    } else {
      const auto dash = job.checker.find('-');
      row.alg = "gcs_star";
      row.checker = job.checker.substr(0, dash);
      row.impl = job.checker.substr(dash + 1);
    }
    RunConfig config = bench.base;
    config.checker = job.checker;
    config.heuristic = job.heuristic;
    try {
      const auto solver = MakeLpSolver(DefaultLpSolverKey());
      const RunResult run = Execute(*job.problem, config, *solver);
      row.status = to_string(run.solution.status);
      row.cost = run.solution.cost;
      row.expansions = run.solution.stats.expansions;
      row.time_s = run.solution.stats.wall_time_ms / 1000.0;
    } catch (const std::exception& e) {
      row.status = "error";
      errors[i] = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const int n = std::min<int>(bench.jobs, static_cast<int>(jobs.size()));
  for (int w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
    });
  }
  for (auto& w : workers) w.join();

  std::ostringstream csv;
  csv << "alg,checker,impl,heuristic,fixture,time,cost,expansions,status\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv << CsvLine(rows[i]) << "\n";
    if (!errors[i].empty()) {
      err << rows[i].fixture << " " << jobs[i].checker << ": " << errors[i] << "\n";
    }
  }
  if (bench.base.out.empty()) {
    out << csv.str();
  } else {
    WriteText(bench.base.out, csv.str());
  }
  return kExitSolved;
}

int CmdViz(const RunConfig& config, const std::string& solution_file, std::ostream& out) {
  const Problem problem = LoadConfigProblem(config);
  const LoadedSolution sol = SolutionFromJson(ReadJsonFile(solution_file));
  const std::string svg = RenderSvg(problem, sol);
  if (config.svg.empty()) {
    out << svg;
  } else {
    WriteText(config.svg, svg);
  }
  return kExitSolved;
}

void AddProblemFlags(CLI::App* app, RunConfig& c) {
  auto* problem = app->add_option("--problem", c.problem_file, "Problem JSON file");
  auto* fixture =
      app->add_option("--fixture", c.fixture, "Builtin fixture: fig3, stones4, push1");
  problem->excludes(fixture);
}

void AddSearchFlags(CLI::App* app, RunConfig& c) {
  app->add_option("--epsilon", c.epsilon, "Heuristic inflation factor (>= 1)");
  app->add_option("--samples", c.samples, "Samples per sampling check");
  app->add_option("--max-path-len", c.max_path_len, "Longest path in vertices");
  app->add_option("--max-expansions", c.max_expansions, "Expansion limit");
  app->add_option("--timeout", c.timeout_s, "Wall-clock limit in seconds");
  app->add_option("--threads", c.threads, "Threads for successor fan-out");
}

}  // namespace

int ExitCodeFor(SearchStatus status) {
  switch (status) {
    case SearchStatus::kSolved:
      return kExitSolved;
    case SearchStatus::kFail:
      return kExitFail;
    case SearchStatus::kTimedOut:
    case SearchStatus::kExpansionLimit:
      return kExitLimit;
  }
  return kExitInternal;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shortest paths on graphs of convex sets"};
  app.require_subcommand(1);

  RunConfig solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem");
  AddProblemFlags(solve_cmd, solve);
  AddSearchFlags(solve_cmd, solve);
  solve_cmd->add_option("--heuristic", solve.heuristic, "auto, zero, shortcut or c0");
  solve_cmd->add_option("--checker", solve.checker,
                        "rc|rn-sampling|containment|hybrid, or astar-baseline");
  solve_cmd->add_option("--seed", solve.seed, "Sampling seed");
  solve_cmd->add_option("--out", solve.out, "Solution JSON output");
  solve_cmd->add_option("--svg", solve.svg, "SVG output");

  BenchConfig bench;
  bench.fixtures = {"fig3", "stones4"};
  bench.checkers = {"rc-sampling",    "rn-sampling", "rc-containment",
                    "rn-containment", "rc-hybrid",   "rn-hybrid"};
  bench.heuristics = {"auto"};
  bench.base.seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run a checker x heuristic x fixture sweep");
  AddSearchFlags(bench_cmd, bench.base);
  bench_cmd->add_option("--fixture", bench.fixtures, "Builtin fixtures")->delimiter(',');
  bench_cmd->add_option("--problem", bench.problems, "Problem files")->delimiter(',');
  bench_cmd->add_option("--checker", bench.checkers, "Checker keys")->delimiter(',');
  bench_cmd->add_option("--heuristic", bench.heuristics, "Heuristic keys")->delimiter(',');
  bench_cmd->add_option("--seed", bench.base.seed, "Sampling seed");
  bench_cmd->add_option("--jobs", bench.jobs, "Rows run in parallel");
  bench_cmd->add_option("--out", bench.base.out, "CSV output (default stdout)");

  RunConfig viz;
  std::string solution_file;
  auto* viz_cmd = app.add_subcommand("viz", "Render a solution as SVG");
  AddProblemFlags(viz_cmd, viz);
  viz_cmd->add_option("--solution", solution_file, "Solution JSON")->required();
  viz_cmd->add_option("--svg", viz.svg, "SVG output (default stdout)");

  std::string export_name;
  std::string export_out;
  auto* export_cmd = app.add_subcommand("export", "Write a builtin fixture as JSON");
  export_cmd->add_option("--fixture", export_name, "Builtin fixture")->required();
  export_cmd->add_option("--out", export_out, "JSON output (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSolved : kExitInput;
  }

  try {
    if (*solve_cmd) return CmdSolve(solve, out, err);
    if (*bench_cmd) return CmdBench(bench, out, err);
    if (*viz_cmd) return CmdViz(viz, solution_file, out);
    const auto doc = BuiltinProblemJson(export_name);
    if (export_out.empty()) {
      out << doc.dump(2) << "\n";
    } else {
      WriteJsonFile(export_out, doc);
    }
    return kExitSolved;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace gcs_star::cli
